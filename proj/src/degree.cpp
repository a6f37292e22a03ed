#include "sarkisov/degree.hpp"

#include <algorithm>
#include <map>

#include "sarkisov/errors.hpp"

namespace sarkisov {

Ordering degree_compare(const SarkisovDegree& a, const SarkisovDegree& b) {
    if (a.mu != b.mu) return a.mu > b.mu ? Ordering::Greater : Ordering::Less;
    if (a.c != b.c) return a.c < b.c ? Ordering::Greater : Ordering::Less;
    if (a.e != b.e) return a.e > b.e ? Ordering::Greater : Ordering::Less;
    return Ordering::Equal;
}

WeightFunction make_weight(const Rat& alpha, bool closed) {
    if (alpha.is_infinite() || !alpha.is_positive() || alpha >= Rat(1))
        fail(ErrorKind::InvalidInput, "weight parameter alpha must lie in (0,1)");
    return WeightFunction{alpha, closed};
}

Rat weight(const WeightFunction& w, const Rat& a) {
    if (a.is_infinite()) return Rat(0);
    bool below = w.closed ? a <= w.alpha : a < w.alpha;
    if (!below || a >= Rat(1)) return Rat(0);
    return Rat(1) - a;
}

Rat summed_weight(const WeightFunction& w, const Rat& b) {
    if (b >= Rat(1)) fail(ErrorKind::InvalidInput, "summed weight is defined only for b < 1");
    Rat one_minus(Rat(1) - b);
    Rat total(0);
    for (long k = 1;; ++k) {
        Rat x = Rat(k) * one_minus;
        if (x >= Rat(1)) break;
        total += weight(w, x);
    }
    return total;
}

Ordering augmented_compare(const AugmentedSarkisovDegree& a, const AugmentedSarkisovDegree& b) {
    if (a.mu != b.mu) return a.mu < b.mu ? Ordering::Less : Ordering::Greater;
    if (a.b != b.b) return a.b > b.b ? Ordering::Less : Ordering::Greater;
    if (a.rho != b.rho) return a.rho < b.rho ? Ordering::Less : Ordering::Greater;
    if (a.d != b.d) return a.d < b.d ? Ordering::Less : Ordering::Greater;
    if (a.c_prime != b.c_prime) return a.c_prime > b.c_prime ? Ordering::Less : Ordering::Greater;
    if (a.e_prime != b.e_prime) return a.e_prime < b.e_prime ? Ordering::Less : Ordering::Greater;
    return Ordering::Equal;
}

Rat difficulty_terminal(const DiscrepancyProfile& p, const WeightFunction& w) {
    for (const ProfileValuation& v : p.valuations)
        if (v.log_discrepancy >= Rat(1))
            fail(ErrorKind::InvalidProfile, "profile lists a valuation with log discrepancy >= 1");
    Rat total(0);
    // Components with a(B_i) <= 0 cannot occur on a terminal pair.
    for (const ProfileComponent& c : p.components)
        if (c.coefficient >= Rat(1))
            fail(ErrorKind::InvalidProfile, "terminal pair cannot carry a component of coefficient >= 1");
    // Valuations away from codimension-2 centers.
    for (const ProfileValuation& v : p.valuations)
        if (v.center_codim != 2) total += weight(w, v.log_discrepancy);
    // Codimension-2 centers carrying at least one positive-weight valuation:
    // their valuations plus the branch towers.
    std::map<int, Rat> center_val_sum;
    std::map<int, bool> qualified;
    for (const ProfileValuation& v : p.valuations) {
        if (v.center_codim != 2) continue;
        Rat wt = weight(w, v.log_discrepancy);
        auto it = center_val_sum.find(v.center_id);
        if (it == center_val_sum.end())
            center_val_sum[v.center_id] = wt;
        else
            it->second += wt;
        if (wt.is_positive()) qualified[v.center_id] = true;
    }
    for (const auto& [id, sum] : center_val_sum) {
        if (!qualified.count(id)) continue;
        total += sum;
        for (const ProfileBranch& br : p.branches)
            if (br.center_id == id) total += summed_weight(w, br.component_coefficient);
    }
    return total;
}

namespace {

MonomialLinearSystem divisor_as_system(const InvariantDivisor& d, int dim) {
    MonomialLinearSystem s;
    s.points = {Vec(static_cast<size_t>(dim), Int(0))};
    s.reference = d;
    s.scale = Rat(1);
    return s;
}

} // namespace

DiscrepancyProfile klt_profile(const ToricVariety& X, const InvariantDivisor& D) {
    if (!X.q_factorial || !X.complete)
        fail(ErrorKind::InvalidInput, "difficulty profile needs a complete Q-factorial variety");
    MonomialLinearSystem sys = divisor_as_system(D, X.fan.dim);
    if (!is_pair_klt(X.fan, sys)) fail(ErrorKind::InvalidInput, "pair is not klt");

    std::vector<ToricValuation> low = low_discrepancy_valuations_closed(X, sys, Rat(1));

    DiscrepancyProfile p;
    for (size_t i = 0; i < X.fan.rays.size(); ++i) {
        if (D[i].is_zero()) continue;
        ProfileComponent c;
        c.coefficient = D[i];
        c.picard_rank = class_group_rank(star_fan(X.fan, static_cast<int>(i)));
        p.components.push_back(c);
    }
    // Canonical center ids: sorted list of the codim-2 host cones observed.
    std::map<std::vector<int>, int> center_ids;
    for (const ToricValuation& v : low) {
        Rat a = log_discrepancy(X, sys, v.vector);
        if (a >= Rat(1)) continue; // crepant extractions carry no weight
        ProfileValuation pv;
        pv.log_discrepancy = a;
        pv.center_codim = static_cast<int>(v.host_cone.size());
        if (pv.center_codim == 2) {
            auto it = center_ids.find(v.host_cone);
            if (it == center_ids.end())
                it = center_ids.emplace(v.host_cone, static_cast<int>(center_ids.size())).first;
            pv.center_id = it->second;
        } else {
            pv.center_id = -1;
        }
        p.valuations.push_back(pv);
    }
    for (const auto& [cone, id] : center_ids) {
        for (int ray : cone) {
            if (D[ray].is_zero()) continue;
            ProfileBranch br;
            br.center_id = id;
            br.component_coefficient = D[ray];
            p.branches.push_back(br);
        }
    }
    return p;
}

Rat difficulty_klt(const ToricVariety& X, const InvariantDivisor& D, const WeightFunction& w) {
    MonomialLinearSystem sys = divisor_as_system(D, X.fan.dim);
    if (!is_pair_klt(X.fan, sys)) fail(ErrorKind::InvalidInput, "difficulty of a non-klt pair");

    // Crepant terminal model: subdivide at every valuation with a <= 1. The
    // profile is evaluated in crepant-invariant data, so the order is
    // immaterial; the model itself certifies termination of the extraction.
    std::vector<ToricValuation> low = low_discrepancy_valuations_closed(X, sys, Rat(1));
    Fan y = X.fan;
    MonomialLinearSystem pulled = sys;
    for (const ToricValuation& v : low) {
        Rat a = log_discrepancy(X, sys, v.vector);
        FanSurgery s = star_subdivide(y, v.vector);
        MonomialLinearSystem next;
        next.points = pulled.points;
        next.scale = pulled.scale;
        next.reference.assign(s.fan.rays.size(), Rat(0));
        for (size_t i = 0; i < pulled.reference.size(); ++i)
            next.reference[s.ray_map[i]] = pulled.reference[i];
        next.reference[s.new_ray] = Rat(1) - a; // crepant boundary coefficient
        y = s.fan;
        pulled = next;
    }
    ToricVariety yv = make_variety(y);
    if (!low_discrepancy_valuations_closed(yv, pulled, Rat(1)).empty())
        fail(ErrorKind::InternalInvariantViolation, "terminalization left a low valuation");

    return difficulty_terminal(klt_profile(X, D), w);
}

const char* nfi_case_name(NfiCase c) {
    switch (c) {
        case NfiCase::SquareIso: return "SquareIso";
        case NfiCase::Case1: return "Case1";
        case NfiCase::Case2: return "Case2";
    }
    return "?";
}

MonomialLinearSystem polarization_system(const ToricMoriFibreSpace& x, long m,
                                         const InvariantDivisor& a_on_base) {
    if (m <= 0) fail(ErrorKind::InvalidInput, "polarization multiple must be positive");
    if (a_on_base.size() != x.base.fan.rays.size())
        fail(ErrorKind::InvalidInput, "base polarization does not match the base rays");
    InvariantDivisor pulled = pullback_divisor(x, a_on_base);
    InvariantDivisor d(x.total.fan.rays.size(), Rat(0));
    for (size_t i = 0; i < d.size(); ++i) {
        d[i] = Rat(m) * (Rat(1) + pulled[i]); // m(-K + f^*A)
        if (d[i].is_infinite() || d[i].denominator() != 1)
            fail(ErrorKind::InvalidInput,
                 "polarization coefficients are not integral; increase m");
    }
    if (!divisor_is_ample(x.total.fan, d))
        fail(ErrorKind::InvalidInput, "polarization divisor is not ample");
    return complete_system_of_divisor(x.total.fan, d);
}

DegreeData analyze_map(const ToricBirationalMap& phi, const MonomialLinearSystem& h_target) {
    DegreeData out;
    out.h_source = total_transform(h_target, phi);
    out.h_source.scale = Rat(1);

    out.degree.mu = pseff_threshold_mu(phi.source, out.h_source);
    out.degree.c = canonical_threshold(phi.source.total, out.h_source);
    if (out.degree.c.is_infinite()) {
        out.degree.e = Rat(0);
    } else {
        MonomialLinearSystem at_c = out.h_source;
        at_c.scale = out.degree.c;
        CrepantEnumeration ce = crepant_divisors(phi.source.total, at_c);
        out.degree.e = ce.finite ? Rat(static_cast<long>(ce.valuations.size())) : Rat::infinity();
    }

    Rat inv_mu = Rat(1) / out.degree.mu;
    if (is_square_isomorphism(phi))
        out.nfi = NfiCase::SquareIso;
    else
        out.nfi = out.degree.c < inv_mu ? NfiCase::Case1 : NfiCase::Case2;

    out.base_dim = phi.source.base.fan.dim;
    out.base_cl_rank = class_group_rank(phi.source.base.fan);

    AugmentedSarkisovDegree& a = out.augmented;
    a.mu = out.degree.mu;
    a.b = out.base_dim;
    bool case1 = inv_mu > out.degree.c;
    if (case1) {
        a.c_prime = out.degree.c;
        a.e_prime = out.degree.e;
        a.rho = Rat::infinity();
        a.d = Rat::infinity();
    } else {
        a.c_prime = Rat::infinity();
        a.e_prime = Rat(0);
        a.rho = Rat(out.base_cl_rank);
        if (a.b <= 2)
            a.d = Rat::infinity();
        else
            fail(ErrorKind::UnsupportedInput,
                 "difficulty slot for base dimension >= 3 is outside desk scale");
    }
    return out;
}

SarkisovDegree degree_of(const ToricBirationalMap& phi, const MonomialLinearSystem& h_target) {
    return analyze_map(phi, h_target).degree;
}

AugmentedSarkisovDegree augmented_degree_of(const ToricBirationalMap& phi,
                                            const MonomialLinearSystem& h_target) {
    return analyze_map(phi, h_target).augmented;
}

NfiCase nfi_case(const ToricBirationalMap& phi, const MonomialLinearSystem& h_target) {
    return analyze_map(phi, h_target).nfi;
}

} // namespace sarkisov
