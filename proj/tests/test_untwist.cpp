#include <doctest.h>

#include "fixtures.hpp"
#include "sarkisov/untwist.hpp"

using namespace sarkisov;
using namespace fixtures;

namespace {

MonomialLinearSystem at_scale(MonomialLinearSystem h, const Rat& c) {
    h.scale = c;
    return h;
}

MonomialLinearSystem anticanonical_on_target(const ToricMoriFibreSpace& target) {
    InvariantDivisor a(target.base.fan.rays.size(), Rat(0));
    if (!a.empty()) a[target.base.fan.ray_index({Int(1)})] = Rat(1);
    return polarization_system(target, 1, a);
}

} // namespace

TEST_CASE("maximal extractions of the Cremona pair") {
    ToricVariety p2 = make_variety(p2_fan());
    MonomialLinearSystem h = at_scale(cremona_sextic_system(p2.fan), Rat(1, 3));
    std::vector<MaximalExtraction> exs = find_maximal_extractions(p2, h);
    REQUIRE(exs.size() == 3);
    CHECK(exs[0].valuation.vector == Vec{Int(-1), Int(0)});
    CHECK(exs[1].valuation.vector == Vec{Int(0), Int(-1)});
    CHECK(exs[2].valuation.vector == Vec{Int(1), Int(1)});
    for (const MaximalExtraction& ex : exs) {
        CHECK(ex.terminal);
        CHECK(ex.extremal);
        CHECK(fan_is_smooth(ex.extracted_fan));
    }
}

TEST_CASE("one-point systems admit a single extraction") {
    ToricVariety p2 = make_variety(p2_fan());
    MonomialLinearSystem h = at_scale(corner_triple_point_system(p2.fan), Rat(1, 3));
    std::vector<MaximalExtraction> exs = find_maximal_extractions(p2, h);
    REQUIRE(exs.size() == 1);
    CHECK(exs[0].valuation.vector == Vec{Int(1), Int(1)});
}

TEST_CASE("the Cremona Case-1 game gives a type I link to the ruling") {
    ToricMoriFibreSpace xs = p2_over_point();
    MonomialLinearSystem h = cremona_sextic_system(xs.total.fan);
    Rat c(1, 3);
    std::vector<MaximalExtraction> exs =
        find_maximal_extractions(xs.total, at_scale(h, c));
    MaximalExtraction at11 = exs[2];
    REQUIRE(at11.valuation.vector == Vec{Int(1), Int(1)});

    SarkisovLink link = two_ray_game_case1(xs, h, c, at11);
    CHECK(link.kind == LinkKind::I);
    CHECK(link.target.total.fan == p2_blowup_fan());
    CHECK(link.target.base.fan.dim == 1);
    CHECK(*link.extraction == Vec{Int(1), Int(1)});
    REQUIRE(link.steps.size() == 1);
    CHECK(link.steps[0].kind == ContractionKind::Fibering);
    CHECK(link.steps[0].canonical_after);

    SUBCASE("forcing the extraction ray first is a NoOp error") {
        // The (K+cH)-trivial class at the extraction: find it and force it.
        RelativeCone rc = relative_mori_cone(at11.extracted_fan, xs.projection, xs.base.fan);
        MonomialLinearSystem lifted;
        lifted.points = h.points;
        lifted.scale = c;
        lifted.reference.assign(at11.extracted_fan.rays.size(), Rat(0));
        for (size_t i = 0; i < h.reference.size(); ++i)
            lifted.reference[at11.ray_map[i]] = h.reference[i];
        lifted.reference[at11.new_ray] = Rat(-3);
        std::optional<std::vector<Int>> trivial;
        for (const ExtremalRay& r : rc.extremal)
            if (pair_degree_on_class(lifted, r.cls).is_zero()) trivial = r.cls;
        REQUIRE(trivial);
        CHECK_THROWS_WITH_AS(two_ray_game_case1(xs, h, c, at11, trivial),
                             doctest::Contains("NoOp"), EngineError);
    }
}

TEST_CASE("an elementary transformation appears as a type II link") {
    // Residual state after the first Cremona link: F1-like model over P^1 with
    // two remaining base points; extracting one gives blowup + blowdown.
    ToricMoriFibreSpace f1 = make_mfs(p2_blowup_fan(), p1_fan(), [] {
        Mat m(1, 2);
        m.at(0, 0) = 1;
        m.at(0, 1) = -1;
        return m;
    }());
    require_valid_mfs(f1);
    Mat minus = Mat::identity(2);
    minus.at(0, 0) = -1;
    minus.at(1, 1) = -1;
    ToricBirationalMap residual = make_map(minus, f1, p2_over_point());
    MonomialLinearSystem h_target = o3m_system(p2_fan(), 1);
    DegreeData dd = analyze_map(residual, h_target);
    CHECK(dd.nfi == NfiCase::Case1);
    CHECK(dd.degree.mu == Rat(3, 2));
    CHECK(dd.degree.c == Rat(1, 3));
    CHECK(dd.degree.e == Rat(2));

    auto [link, next] = untwist_once(residual, h_target, Policy{});
    CHECK(link.kind == LinkKind::II);
    CHECK(link.target.base.fan == p1_fan());
    // One divisorial step after the extraction, no flips on a surface.
    REQUIRE(link.steps.size() == 1);
    CHECK(link.steps[0].kind == ContractionKind::Divisorial);
    // The new model is an F0-type quadric: both sections have square zero.
    CHECK(link.target.total.fan.rays.size() == 4);
}

TEST_CASE("the ruling swap is a single type IV link over the point") {
    ToricBirationalMap phi = ruling_swap_map();
    MonomialLinearSystem h = anticanonical_on_target(phi.target);
    DegreeData dd = analyze_map(phi, h);
    REQUIRE(dd.nfi == NfiCase::Case2);

    std::vector<Case2Candidate> cands =
        case2_candidates(phi.source, dd.h_source, dd.degree.mu, {});
    REQUIRE(cands.size() == 1);

    SarkisovLink link = two_ray_game_case2(phi.source, dd.h_source, dd.degree.mu, {});
    CHECK(link.kind == LinkKind::IV);
    CHECK(link.subtype == 'a');
    CHECK(!link.extraction.has_value());
    CHECK(link.target.total.fan == phi.source.total.fan);
    CHECK(link.target.projection == phi.target.projection);

    UntwistingSequence seq = factorize_checked(phi, h, Policy{});
    CHECK(seq.terminated);
    REQUIRE(seq.links.size() == 1);
    CHECK(seq.links[0].kind == LinkKind::IV);
    CHECK(is_square_isomorphism(seq.residual));
}

TEST_CASE("the quadratic involution factorizes into I, II, II, III") {
    ToricBirationalMap tau = cremona_map();
    MonomialLinearSystem h = o3m_system(p2_fan(), 1);

    UntwistingSequence seq = factorize_checked(tau, h, Policy{});
    CHECK(seq.terminated);
    REQUIRE(seq.links.size() == 4);
    CHECK(seq.links[0].kind == LinkKind::I);
    CHECK(seq.links[1].kind == LinkKind::II);
    CHECK(seq.links[2].kind == LinkKind::II);
    CHECK(seq.links[3].kind == LinkKind::III);
    CHECK(seq.links[3].subtype == 'a');

    // First link lands on the blowup over its ruling.
    CHECK(seq.links[0].target.base.fan.dim == 1);

    // Composite: identity links times the residual equals -Id exactly.
    Mat composite = Mat::identity(2);
    for (const SarkisovLink& l : seq.links) composite = mul(l.matrix, composite);
    composite = mul(seq.residual.matrix, composite);
    CHECK(composite == tau.matrix);
    CHECK(is_square_isomorphism(seq.residual));
    CHECK(seq.residual.source.total.fan == p2_antipodal_fan());

    // Ledger: mu nonincreasing, degree strictly decreasing on Case-1 links.
    REQUIRE(seq.ledger.size() == 5);
    CHECK(seq.ledger[0].degree.mu == Rat(2));
    CHECK(seq.ledger[1].degree.mu == Rat(3, 2));
    for (size_t i = 0; i + 1 < seq.ledger.size(); ++i)
        CHECK(seq.ledger[i + 1].degree.mu <= seq.ledger[i].degree.mu);
    for (size_t i = 0; i < 3; ++i)
        CHECK(degree_compare(seq.ledger[i + 1].degree, seq.ledger[i].degree) == Ordering::Less);

    // No flips on surfaces, every step re-verified canonical.
    for (const SarkisovLink& l : seq.links)
        for (const MmpStep& s : l.steps) {
            CHECK(s.kind != ContractionKind::Small);
            CHECK(s.canonical_after);
        }

    // Monotonicity report passes every row.
    MonotonicityReport rep = check_monotonic(seq, make_weight(Rat(1, 2), true));
    CHECK(rep.pass);
    CHECK(rep.rows.size() == 4);
    verify_monotonic(seq, make_weight(Rat(1, 2), true));

    SUBCASE("policy index chooses the other base points first") {
        Policy p;
        p.kind = Policy::Kind::Index;
        p.index = 2;
        UntwistingSequence alt = factorize_checked(tau, h, p);
        CHECK(alt.terminated);
        CHECK(alt.links.size() == 4);
        CHECK(alt.links[0].extraction != seq.links[0].extraction);
        CHECK(is_square_isomorphism(alt.residual));
    }
    SUBCASE("out-of-range policy index is rejected by a single untwist") {
        Policy p;
        p.kind = Policy::Kind::Index;
        p.index = 9;
        CHECK_THROWS_AS(untwist_once(tau, h, p), EngineError);
    }
}

TEST_CASE("identity input gives the empty sequence") {
    UntwistingSequence seq =
        factorize_checked(identity_p2_map(), o3m_system(p2_fan(), 2), Policy{});
    CHECK(seq.terminated);
    CHECK(seq.links.empty());
    CHECK(seq.ledger.size() == 1);
    CHECK_THROWS_AS(untwist_once(identity_p2_map(), o3m_system(p2_fan(), 2), Policy{}),
                    EngineError);
}

TEST_CASE("the cap aborts a factorization honestly") {
    ToricBirationalMap tau = cremona_map();
    MonomialLinearSystem h = o3m_system(p2_fan(), 1);
    UntwistingSequence part = factorize(tau, h, Policy{}, 2);
    CHECK(!part.terminated);
    CHECK(part.links.size() == 2);
    CHECK_THROWS_WITH_AS(factorize_checked(tau, h, Policy{}, 2),
                         doctest::Contains("StepCapExceeded"), EngineError);
}

TEST_CASE("monotonicity violations are reported by link") {
    ToricBirationalMap tau = cremona_map();
    MonomialLinearSystem h = o3m_system(p2_fan(), 1);
    UntwistingSequence seq = factorize_checked(tau, h, Policy{});
    // Forge a non-decreasing ledger entry.
    seq.ledger[1] = seq.ledger[0];
    seq.ledger[1].degree.mu = seq.ledger[0].degree.mu + Rat(1);
    seq.ledger[1].augmented.mu = seq.ledger[1].degree.mu;
    MonotonicityReport rep = check_monotonic(seq, make_weight(Rat(1, 2), true));
    CHECK(!rep.pass);
    CHECK_THROWS_WITH_AS(verify_monotonic(seq, make_weight(Rat(1, 2), true)),
                         doctest::Contains("MonotonicityViolation"), EngineError);
}

TEST_CASE("a IVb-style stall is tolerated only for IVb links") {
    // Hand-built: one link whose ledger stalls completely.
    UntwistingSequence seq;
    seq.terminated = true;
    DegreeLedgerEntry e;
    e.degree = {Rat(2), Rat::infinity(), Rat(0)};
    e.augmented.mu = Rat(2);
    e.augmented.b = 1;
    e.augmented.rho = Rat(1);
    e.augmented.d = Rat::infinity();
    e.augmented.c_prime = Rat::infinity();
    e.augmented.e_prime = Rat(0);
    seq.ledger = {e, e};
    SarkisovLink link;
    link.kind = LinkKind::IV;
    link.subtype = 'b';
    seq.links = {link};
    CHECK(check_monotonic(seq, make_weight(Rat(1, 2), true)).pass);
    seq.links[0].subtype = 'a';
    CHECK(!check_monotonic(seq, make_weight(Rat(1, 2), true)).pass);
}
