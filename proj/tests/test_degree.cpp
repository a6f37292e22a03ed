#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "sarkisov/degree.hpp"

using namespace sarkisov;
using namespace fixtures;

namespace {

Rat random_rat(std::mt19937& rng, long lo, long hi, long max_den = 6) {
    long den = 1 + static_cast<long>(rng() % max_den);
    long num = lo * den + static_cast<long>(rng() % static_cast<unsigned long>((hi - lo) * den + 1));
    return Rat(Int(num), Int(den));
}

SarkisovDegree random_degree(std::mt19937& rng) {
    SarkisovDegree d;
    d.mu = random_rat(rng, 1, 4);
    d.c = (rng() % 4 == 0) ? Rat::infinity() : random_rat(rng, 0, 2) + Rat(1, 7);
    d.e = d.c.is_infinite() ? Rat(0) : Rat(static_cast<long>(rng() % 5));
    return d;
}

AugmentedSarkisovDegree random_aug(std::mt19937& rng) {
    AugmentedSarkisovDegree a;
    a.mu = random_rat(rng, 1, 4);
    a.b = static_cast<long>(rng() % 3);
    a.rho = (rng() % 3 == 0) ? Rat::infinity() : Rat(static_cast<long>(rng() % 4));
    a.d = (rng() % 2 == 0) ? Rat::infinity() : random_rat(rng, 0, 3);
    a.c_prime = (rng() % 2 == 0) ? Rat::infinity() : random_rat(rng, 0, 1) + Rat(1, 5);
    a.e_prime = Rat(static_cast<long>(rng() % 4));
    return a;
}

} // namespace

TEST_CASE("weight functions") {
    WeightFunction minus = make_weight(Rat(1, 2), true);
    WeightFunction plus = make_weight(Rat(1, 2), false);
    CHECK(weight(minus, Rat(3, 10)) == Rat(7, 10));
    CHECK(weight(minus, Rat(1, 2)) == Rat(1, 2));
    CHECK(weight(plus, Rat(1, 2)) == Rat(0));
    CHECK(weight(minus, Rat(3, 2)) == Rat(0));
    CHECK(weight(plus, Rat(3, 2)) == Rat(0));
    CHECK_THROWS_AS(make_weight(Rat(1), true), EngineError);
    CHECK_THROWS_AS(make_weight(Rat(0), true), EngineError);
}

TEST_CASE("summed weights evaluate their finite sums") {
    WeightFunction w12 = make_weight(Rat(1, 2), true);
    CHECK(summed_weight(w12, Rat(1, 2)) == Rat(1, 2));
    CHECK(summed_weight(w12, Rat(0)) == Rat(0));
    CHECK(summed_weight(w12, Rat(-3)) == Rat(0));
    WeightFunction w910 = make_weight(Rat(9, 10), true);
    CHECK(summed_weight(w910, Rat(2, 3)) == Rat(1)); // w(1/3) + w(2/3) = 2/3 + 1/3
    CHECK_THROWS_AS(summed_weight(w12, Rat(1)), EngineError);

    // Direct finite-sum oracle on random samples.
    std::mt19937 rng(7);
    for (int t = 0; t < 200; ++t) {
        Rat alpha = random_rat(rng, 0, 0, 9) + Rat(1, 10);
        if (alpha >= Rat(1)) alpha = Rat(9, 10);
        WeightFunction w = make_weight(alpha, t % 2 == 0);
        Rat b = Rat(1) - (random_rat(rng, 0, 1) + Rat(1, 11));
        if (b >= Rat(1)) b = Rat(1, 2);
        Rat direct(0);
        for (long k = 1; Rat(k) * (Rat(1) - b) < Rat(1); ++k) {
            Rat x = Rat(k) * (Rat(1) - b);
            bool below = w.closed ? x <= w.alpha : x < w.alpha;
            if (below && x < Rat(1)) direct += Rat(1) - x;
        }
        CHECK(summed_weight(w, b) == direct);
    }
}

TEST_CASE("summed weight is nonincreasing in b") {
    WeightFunction w = make_weight(Rat(3, 4), true);
    Rat prev = summed_weight(w, Rat(-5));
    for (long k = -24; k < 5; ++k) {
        Rat b(Int(k), Int(5));
        if (b >= Rat(1)) break;
        Rat cur = summed_weight(w, b);
        CHECK(cur >= prev);
        prev = cur;
    }
}

TEST_CASE("weight axiom: superadditivity over multiplicities") {
    // w(1 - sum m_i b_i) >= sum m_i w(1 - b_i) whenever 0 < sum m_i b_i < 1.
    std::mt19937 rng(11);
    int checked = 0;
    while (checked < 200) {
        Rat alpha = Rat(1 + static_cast<long>(rng() % 8), 9);
        WeightFunction w = make_weight(alpha, rng() % 2 == 0);
        int n = 1 + static_cast<int>(rng() % 3);
        Rat total(0);
        std::vector<std::pair<long, Rat>> terms;
        for (int i = 0; i < n; ++i) {
            long m = static_cast<long>(rng() % 3);
            Rat b = Rat(1 + static_cast<long>(rng() % 11), 12);
            terms.push_back({m, b});
            total += Rat(m) * b;
        }
        if (!(total.is_positive() && total < Rat(1))) continue;
        ++checked;
        Rat lhs = weight(w, Rat(1) - total);
        Rat rhs(0);
        for (const auto& [m, b] : terms) rhs += Rat(m) * weight(w, Rat(1) - b);
        CHECK(lhs >= rhs);
    }
}

TEST_CASE("degree order is a strict total order") {
    SarkisovDegree a{Rat(2), Rat(1, 3), Rat(3)};
    SarkisovDegree b{Rat(2), Rat(1, 2), Rat(3)};
    SarkisovDegree c{Rat(1), Rat(1, 3), Rat(3)};
    CHECK(degree_compare(a, b) == Ordering::Greater); // smaller c is larger degree
    CHECK(degree_compare(a, c) == Ordering::Greater);
    CHECK(degree_compare(a, a) == Ordering::Equal);

    std::mt19937 rng(3);
    for (int t = 0; t < 200; ++t) {
        SarkisovDegree x = random_degree(rng), y = random_degree(rng), z = random_degree(rng);
        Ordering xy = degree_compare(x, y), yx = degree_compare(y, x);
        if (xy == Ordering::Less) CHECK(yx == Ordering::Greater);
        if (xy == Ordering::Equal) CHECK(yx == Ordering::Equal);
        // transitivity of <=
        auto le = [](Ordering o) { return o != Ordering::Greater; };
        if (le(degree_compare(x, y)) && le(degree_compare(y, z)))
            CHECK(le(degree_compare(x, z)));
    }
}

TEST_CASE("augmented order follows the directed lexicographic slots") {
    AugmentedSarkisovDegree base;
    base.mu = Rat(2);
    base.b = 1;
    base.rho = Rat(3);
    base.d = Rat::infinity();
    base.c_prime = Rat(1, 2);
    base.e_prime = Rat(1);

    AugmentedSarkisovDegree rho4 = base;
    rho4.rho = Rat(4);
    CHECK(augmented_compare(base, rho4) == Ordering::Less); // smaller rho is smaller

    AugmentedSarkisovDegree cp = base;
    cp.c_prime = Rat(1, 3);
    CHECK(augmented_compare(base, cp) == Ordering::Less); // larger c' is smaller

    CHECK(augmented_compare(base, base) == Ordering::Equal);

    AugmentedSarkisovDegree bigb = base;
    bigb.b = 2;
    CHECK(augmented_compare(bigb, base) == Ordering::Less); // larger b is smaller

    std::mt19937 rng(5);
    for (int t = 0; t < 200; ++t) {
        AugmentedSarkisovDegree x = random_aug(rng), y = random_aug(rng), z = random_aug(rng);
        Ordering xy = augmented_compare(x, y), yx = augmented_compare(y, x);
        if (xy == Ordering::Less) CHECK(yx == Ordering::Greater);
        if (xy == Ordering::Equal) CHECK(yx == Ordering::Equal);
        auto le = [](Ordering o) { return o != Ordering::Greater; };
        if (le(augmented_compare(x, y)) && le(augmented_compare(y, z)))
            CHECK(le(augmented_compare(x, z)));
    }
}

TEST_CASE("difficulty of explicit profiles") {
    WeightFunction w = make_weight(Rat(1, 2), true);
    SUBCASE("an empty profile has difficulty zero") {
        CHECK(difficulty_terminal(DiscrepancyProfile{}, w) == Rat(0));
    }
    SUBCASE("one codimension-2 center with one valuation and one branch") {
        DiscrepancyProfile p;
        p.valuations.push_back({Rat(1, 2), 2, 0});
        p.branches.push_back({0, Rat(1, 2)});
        CHECK(difficulty_terminal(p, w) == Rat(1)); // w(1/2) + W(1/2) = 1/2 + 1/2
    }
    SUBCASE("valuations with discrepancy >= 1 are rejected") {
        DiscrepancyProfile p;
        p.valuations.push_back({Rat(1), 2, 0});
        CHECK_THROWS_AS(difficulty_terminal(p, w), EngineError);
    }
    SUBCASE("codim != 2 valuations contribute plain weights") {
        DiscrepancyProfile p;
        p.valuations.push_back({Rat(1, 4), 3, -1});
        CHECK(difficulty_terminal(p, w) == Rat(3, 4));
    }
}

TEST_CASE("difficulty of klt toric pairs") {
    ToricVariety p2 = make_variety(p2_fan());
    WeightFunction w12 = make_weight(Rat(1, 2), true);
    WeightFunction w910 = make_weight(Rat(9, 10), true);

    SUBCASE("boundary-free plane") {
        InvariantDivisor zero(p2.fan.rays.size(), Rat(0));
        CHECK(difficulty_klt(p2, zero, w12) == Rat(0));
    }
    SUBCASE("half a line carries no positive-weight valuation") {
        InvariantDivisor d = divisor_on(p2.fan, {{{Int(1), Int(0)}, Rat(1, 2)}});
        CHECK(difficulty_klt(p2, d, w12) == Rat(0));
    }
    SUBCASE("the quadric cone with empty boundary is canonical, difficulty 0") {
        Fan a1 = make_fan(2, {{Int(1), Int(0)}, {Int(1), Int(2)}, {Int(-1), Int(-1)}},
                          {{0, 1}, {1, 2}, {2, 0}});
        ToricVariety qc = make_variety(a1);
        InvariantDivisor zero(a1.rays.size(), Rat(0));
        CHECK(difficulty_klt(qc, zero, w12) == Rat(0));
    }
    SUBCASE("two lines with coefficient 2/3: hand-evaluated tower sum") {
        // The fixed-point blowup has a = 2 - 4/3 = 2/3 < 1 with a codim-2
        // center on both components; the formula gives
        //   w(2/3) + W(2/3) + W(2/3) = 1/3 + 1 + 1 = 7/3 for alpha = 9/10.
        InvariantDivisor d = divisor_on(p2.fan, {{{Int(1), Int(0)}, Rat(2, 3)},
                                                 {{Int(0), Int(1)}, Rat(2, 3)}});
        // Independent evaluation from the raw formula pieces:
        Rat expected = weight(w910, Rat(2, 3)) + summed_weight(w910, Rat(2, 3)) +
                       summed_weight(w910, Rat(2, 3));
        CHECK(expected == Rat(7, 3));
        CHECK(difficulty_klt(p2, d, w910) == expected);

        DiscrepancyProfile prof = klt_profile(p2, d);
        CHECK(prof.components.size() == 2);
        CHECK(prof.valuations.size() == 1);
        CHECK(prof.valuations[0].log_discrepancy == Rat(2, 3));
        CHECK(prof.valuations[0].center_codim == 2);
        CHECK(prof.branches.size() == 2);
    }
    SUBCASE("non-klt input is rejected") {
        InvariantDivisor d = divisor_on(p2.fan, {{{Int(1), Int(0)}, Rat(1)}});
        CHECK_THROWS_AS(difficulty_klt(p2, d, w12), EngineError);
    }
}

TEST_CASE("degree and case analysis of the bundled maps") {
    Fan p2 = p2_fan();
    SUBCASE("identity with |-2K|") {
        DegreeData dd = analyze_map(identity_p2_map(), o3m_system(p2, 2));
        CHECK(dd.degree.mu == Rat(2));
        CHECK(dd.degree.c.is_infinite());
        CHECK(dd.degree.e == Rat(0));
        CHECK(dd.nfi == NfiCase::SquareIso);
    }
    SUBCASE("the quadratic involution with |-K|") {
        DegreeData dd = analyze_map(cremona_map(), o3m_system(p2, 1));
        CHECK(dd.degree.mu == Rat(2));
        CHECK(dd.degree.c == Rat(1, 3));
        CHECK(dd.degree.e == Rat(3));
        CHECK(dd.nfi == NfiCase::Case1);
        // Augmented clauses: 1/mu = 1/2 > c = 1/3.
        CHECK(dd.augmented.mu == Rat(2));
        CHECK(dd.augmented.b == 0);
        CHECK(dd.augmented.rho.is_infinite());
        CHECK(dd.augmented.d.is_infinite());
        CHECK(dd.augmented.c_prime == Rat(1, 3));
        CHECK(dd.augmented.e_prime == Rat(3));
    }
    SUBCASE("identity on F1 over the line with m = 1 and a point polarization") {
        ToricMoriFibreSpace f1 = hirzebruch_over_p1(1);
        InvariantDivisor a(f1.base.fan.rays.size(), Rat(0));
        a[f1.base.fan.ray_index({Int(1)})] = Rat(1);
        MonomialLinearSystem h = polarization_system(f1, 1, a);
        ToricBirationalMap id = make_map(Mat::identity(2), f1, f1);
        DegreeData dd = analyze_map(id, h);
        CHECK(dd.degree.mu == Rat(1));
        CHECK(dd.degree.c.is_infinite());
        CHECK(dd.degree.e == Rat(0));
        CHECK(dd.nfi == NfiCase::SquareIso);
        CHECK(dd.augmented.rho == Rat(1)); // rank Cl(P^1)
        CHECK(dd.augmented.b == 1);
        CHECK(dd.augmented.d.is_infinite()); // b <= 2
    }
    SUBCASE("the ruling swap is Case 2") {
        ToricMoriFibreSpace f0 = hirzebruch_over_p1(0);
        InvariantDivisor a(f0.base.fan.rays.size(), Rat(0));
        a[f0.base.fan.ray_index({Int(1)})] = Rat(1);
        MonomialLinearSystem h = polarization_system(f0_over_second_ruling(), 1, a);
        DegreeData dd = analyze_map(ruling_swap_map(), h);
        CHECK(dd.degree.c.is_infinite());
        CHECK(dd.nfi == NfiCase::Case2);
        CHECK(dd.degree.mu == Rat(3, 2));
    }
}

TEST_CASE("total transform of the anticanonical system under the involution") {
    Fan p2 = p2_fan();
    ToricBirationalMap tau = cremona_map();
    MonomialLinearSystem h = total_transform(o3m_system(p2, 1), tau);
    CHECK(systems_equivalent(p2, h, cremona_sextic_system(p2)));

    SUBCASE("identity transform is the identity") {
        MonomialLinearSystem back = total_transform(o3m_system(p2, 1), identity_p2_map());
        CHECK(systems_equivalent(p2, back, o3m_system(p2, 1)));
    }
    SUBCASE("pulling back and forth preserves the mobile part") {
        ToricBirationalMap tau_inv = cremona_map(); // the involution is its own inverse
        MonomialLinearSystem round = total_transform(h, tau_inv);
        auto [m1, f1] = fixed_mobile_decomposition(p2, round);
        auto [m0, f0] = fixed_mobile_decomposition(p2, o3m_system(p2, 1));
        CHECK(systems_equivalent(p2, m1, m0));
    }
}

TEST_CASE("square isomorphism detection") {
    CHECK(is_square_isomorphism(identity_p2_map()));
    CHECK(!is_square_isomorphism(cremona_map()));
    CHECK(!is_square_isomorphism(ruling_swap_map())); // no base descent
    // The antipodal model maps to the standard plane under -I.
    Mat minus = Mat::identity(2);
    minus.at(0, 0) = -1;
    minus.at(1, 1) = -1;
    ToricBirationalMap anti = make_map(minus, p2_antipodal_over_point(), p2_over_point());
    CHECK(is_square_isomorphism(anti));
}
