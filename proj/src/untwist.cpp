#include "sarkisov/untwist.hpp"

#include <algorithm>
#include <sstream>

#include "sarkisov/errors.hpp"

namespace sarkisov {

const char* link_kind_name(LinkKind k) {
    switch (k) {
        case LinkKind::I: return "I";
        case LinkKind::II: return "II";
        case LinkKind::III: return "III";
        case LinkKind::IV: return "IV";
    }
    return "?";
}

DegreeLedgerEntry ledger_entry(const DegreeData& dd) {
    DegreeLedgerEntry e;
    e.degree = dd.degree;
    e.augmented = dd.augmented;
    e.nfi = dd.nfi;
    e.base_cl_rank = dd.base_cl_rank;
    e.base_dim = dd.base_dim;
    return e;
}

std::vector<MaximalExtraction> find_maximal_extractions(const ToricVariety& X,
                                                        const MonomialLinearSystem& h_at_c) {
    CrepantEnumeration ce = crepant_divisors(X, h_at_c);
    if (!ce.finite)
        fail(ErrorKind::InvalidState, "crepant set is unbounded: " + ce.diagnostic);
    std::vector<MaximalExtraction> out;
    for (const ToricValuation& v : ce.valuations) {
        FanSurgery s = star_subdivide(X.fan, v.vector);
        if (!fan_is_terminal(s.fan)) continue;
        MaximalExtraction ex;
        ex.valuation = v;
        ex.extracted_fan = s.fan;
        ex.ray_map = s.ray_map;
        ex.new_ray = s.new_ray;
        ex.terminal = true;
        out.push_back(std::move(ex));
    }
    if (out.empty())
        fail(ErrorKind::InternalInvariantViolation,
             "no maximal extraction exists although the pair is in Case 1");
    return out;
}

namespace {

MonomialLinearSystem at_scale(const MonomialLinearSystem& h, const Rat& c) {
    MonomialLinearSystem s = h;
    s.scale = c;
    return s;
}

// Intermediate steps of a link must be small transformations.
void check_link_shape(const std::vector<MmpStep>& steps) {
    for (size_t i = 0; i + 1 < steps.size(); ++i)
        if (steps[i].kind != ContractionKind::Small)
            fail(ErrorKind::InternalInvariantViolation,
                 "non-flip step in the middle of a 2-ray game");
}

} // namespace

SarkisovLink two_ray_game_case1(const ToricMoriFibreSpace& xs, const MonomialLinearSystem& h_unit,
                                const Rat& c, const MaximalExtraction& ex,
                                const std::optional<std::vector<Int>>& forced_first, int step_cap) {
    if (c.is_infinite())
        fail(ErrorKind::PreconditionViolation, "Case 1 requires a finite canonical threshold");

    // Crepant pullback = strict transform for a maximal extraction: the new
    // ray carries coefficient phi_D(w) - mult(w).
    const Fan& x = xs.total.fan;
    MonomialLinearSystem lifted;
    lifted.points = h_unit.points;
    lifted.scale = c;
    lifted.reference.assign(ex.extracted_fan.rays.size(), Rat(0));
    for (size_t i = 0; i < h_unit.reference.size(); ++i)
        lifted.reference[ex.ray_map[i]] = h_unit.reference[i];
    lifted.reference[ex.new_ray] =
        pl_evaluate(x, h_unit.reference, ex.valuation.vector) -
        system_mult(x, h_unit, ex.valuation.vector);

    RelativeCone rc = relative_mori_cone(ex.extracted_fan, xs.projection, xs.base.fan);
    if (rc.rank != 2)
        fail(ErrorKind::InternalInvariantViolation, "extraction does not have relative rank 2");
    MmpModel model{ex.extracted_fan, lifted};
    const ExtremalRay* trivial = nullptr;
    const ExtremalRay* negative = nullptr;
    for (const ExtremalRay& r : rc.extremal) {
        Rat deg = pair_degree_on_class(lifted, r.cls);
        if (deg.is_zero()) trivial = &r;
        else if (deg.is_negative()) negative = &r;
    }
    if (!trivial || !negative)
        fail(ErrorKind::InternalInvariantViolation,
             "2-ray game does not see one trivial and one negative ray");

    MmpOptions opt;
    opt.first_class = forced_first ? *forced_first : negative->cls;
    opt.step_cap = step_cap;
    opt.stop_at_relative_rank_one = true;
    MmpRun run = run_relative_mmp(model, xs.base.fan, xs.projection, opt);
    check_link_shape(run.steps);

    SarkisovLink link;
    link.extraction = ex.valuation.vector;
    link.steps = run.steps;
    link.source = xs;
    link.matrix = Mat::identity(x.dim);
    if (run.ended_with_fibering) {
        link.kind = LinkKind::I;
        link.target = make_mfs(run.model.fan, run.fibration_base, run.fibration_projection);
    } else if (run.divisorial_happened) {
        link.kind = LinkKind::II;
        link.target = make_mfs(run.model.fan, xs.base.fan, xs.projection);
    } else {
        fail(ErrorKind::InvalidState, "2-ray game ended without a Mori fibre space");
    }
    require_valid_mfs(link.target);
    return link;
}

std::vector<Case2Candidate> case2_candidates(const ToricMoriFibreSpace& xs,
                                             const MonomialLinearSystem& h_unit, const Rat& mu,
                                             const std::optional<InvariantDivisor>& a_base) {
    const Fan& x = xs.total.fan;
    MonomialLinearSystem pair = at_scale(h_unit, Rat(1) / mu);
    if (!is_pair_canonical(x, pair))
        fail(ErrorKind::PreconditionViolation, "Case 2 requires (X, (1/mu)H) canonical");

    InvariantDivisor a = a_base ? *a_base : boundary_sum_divisor(xs.base.fan);
    if (a.size() != xs.base.fan.rays.size())
        fail(ErrorKind::InvalidInput, "supporting divisor does not match the base rays");
    if (!divisor_is_ample(xs.base.fan, a))
        fail(ErrorKind::InvalidInput, "supporting divisor on the base is not ample");
    InvariantDivisor supporting = pullback_divisor(xs, a);

    Fan point = make_fan(0, {}, {{}});
    Mat to_point(0, x.dim);
    RelativeCone abs = relative_mori_cone(x, to_point, point);
    std::vector<Case2Candidate> out;
    for (const ExtremalRay& r : abs.extremal) {
        Rat deg = pair_degree_on_class(pair, r.cls);
        if (!deg.is_negative()) continue;
        Rat denom = divisor_degree_on_class(supporting, r.cls);
        if (!denom.is_positive())
            fail(ErrorKind::InternalInvariantViolation,
                 "supporting divisor vanishes on a negative extremal ray");
        out.push_back({r, (Rat(0) - deg) / denom});
    }
    if (out.empty())
        fail(ErrorKind::InternalInvariantViolation,
             "Case 2 found no negative extremal ray; the map should have been square");
    return out;
}

SarkisovLink two_ray_game_case2(const ToricMoriFibreSpace& xs, const MonomialLinearSystem& h_unit,
                                const Rat& mu, const std::optional<InvariantDivisor>& a_base,
                                std::optional<int> forced_candidate, int step_cap) {
    const Fan& x = xs.total.fan;
    MonomialLinearSystem pair = at_scale(h_unit, Rat(1) / mu);
    std::vector<Case2Candidate> cands = case2_candidates(xs, h_unit, mu, a_base);

    int pick = 0;
    if (forced_candidate) {
        if (*forced_candidate < 0 || *forced_candidate >= static_cast<int>(cands.size()))
            fail(ErrorKind::InvalidInput, "Case-2 candidate index out of range");
        pick = *forced_candidate;
    } else {
        for (size_t i = 1; i < cands.size(); ++i)
            if (cands[i].ratio > cands[pick].ratio) pick = static_cast<int>(i);
    }
    const ExtremalRay& r_prime = cands[pick].ray;

    // Fibration ray R of X/S, trivial on the pair by construction.
    RelativeCone over_s = relative_mori_cone(x, xs.projection, xs.base.fan);
    if (over_s.rank != 1)
        fail(ErrorKind::InternalInvariantViolation, "source of Case 2 is not relative rank 1");
    const ExtremalRay& r = over_s.extremal[0];
    if (!pair_degree_on_class(pair, r.cls).is_zero())
        fail(ErrorKind::InternalInvariantViolation, "fibration ray is not (K + (1/mu)H)-trivial");

    // Face contraction to T: vertical span of the fibre-type walls whose class
    // lies in cone(R, R').
    Fan point = make_fan(0, {}, {{}});
    Mat to_point(0, x.dim);
    RelativeCone abs = relative_mori_cone(x, to_point, point);
    std::vector<Vec> span;
    for (const Wall& w : abs.walls) {
        auto sol = solve_rational({r.cls, r_prime.cls}, w.relation);
        if (!sol || (*sol)[0].is_negative() || (*sol)[1].is_negative()) continue;
        bool fibre_type = std::none_of(w.relation.begin(), w.relation.end(),
                                       [](const Int& c) { return c < 0; });
        if (!fibre_type) continue;
        for (size_t v = 0; v < w.relation.size(); ++v)
            if (w.relation[v] != 0) span.push_back(x.rays[v]);
    }
    if (span.empty())
        fail(ErrorKind::InternalInvariantViolation, "Case-2 face has no fibre direction");
    auto [t_fan, t_proj] = quotient_fibration(x, span);

    RelativeCone over_t = relative_mori_cone(x, t_proj, t_fan);
    if (over_t.rank != 2)
        fail(ErrorKind::InternalInvariantViolation, "Case-2 face contraction is not relative rank 2");

    MmpOptions opt;
    opt.first_class = r_prime.cls;
    opt.step_cap = step_cap;
    opt.stop_at_relative_rank_one = true;
    MmpRun run = run_relative_mmp(MmpModel{x, pair}, t_fan, t_proj, opt);
    check_link_shape(run.steps);

    SarkisovLink link;
    link.steps = run.steps;
    link.source = xs;
    link.matrix = Mat::identity(x.dim);
    if (run.ended_with_fibering) {
        link.kind = LinkKind::IV;
        link.target = make_mfs(run.model.fan, run.fibration_base, run.fibration_projection);
    } else if (run.divisorial_happened) {
        link.kind = LinkKind::III;
        link.target = make_mfs(run.model.fan, t_fan, t_proj);
    } else {
        fail(ErrorKind::InvalidState, "Case-2 game ended without a Mori fibre space");
    }
    require_valid_mfs(link.target);

    // Subtype: sign of (K + (1/mu)H'') on the new fibres.
    RelativeCone after = relative_mori_cone(link.target.total.fan, link.target.projection,
                                            link.target.base.fan);
    bool any_neg = false, any_zero = false, any_pos = false;
    for (const ExtremalRay& rr : after.extremal) {
        Rat deg = pair_degree_on_class(run.model.sys, rr.cls);
        if (deg.is_negative()) any_neg = true;
        else if (deg.is_zero()) any_zero = true;
        else any_pos = true;
    }
    if (any_neg && !any_zero && !any_pos) link.subtype = 'a';
    else if (any_zero && !any_neg && !any_pos) link.subtype = 'b';
    else
        fail(ErrorKind::InternalInvariantViolation, "Case-2 subtype is neither negative nor trivial");
    return link;
}

std::pair<SarkisovLink, ToricBirationalMap> untwist_once(const ToricBirationalMap& phi,
                                                         const MonomialLinearSystem& h_target,
                                                         const Policy& policy) {
    DegreeData dd = analyze_map(phi, h_target);
    if (dd.nfi == NfiCase::SquareIso)
        fail(ErrorKind::PreconditionViolation, "untwisting a square isomorphism");

    SarkisovLink link;
    if (dd.nfi == NfiCase::Case1) {
        MonomialLinearSystem h_at_c = at_scale(dd.h_source, dd.degree.c);
        std::vector<MaximalExtraction> exs = find_maximal_extractions(phi.source.total, h_at_c);
        size_t pick = 0;
        if (policy.kind == Policy::Kind::Index) {
            if (policy.index < 1 || (!policy.clamp_index &&
                                     policy.index > static_cast<int>(exs.size())))
                fail(ErrorKind::InvalidInput, "extraction index out of range");
            pick = static_cast<size_t>(std::min<int>(policy.index, static_cast<int>(exs.size())) - 1);
        }
        link = two_ray_game_case1(phi.source, dd.h_source, dd.degree.c, exs[pick], {},
                                  policy.step_cap);
    } else {
        link = two_ray_game_case2(phi.source, dd.h_source, dd.degree.mu,
                                  policy.case2_base_divisor, {}, policy.step_cap);
    }
    ToricBirationalMap residual = make_map(phi.matrix, link.target, phi.target);
    return {link, residual};
}

UntwistingSequence factorize(const ToricBirationalMap& phi, const MonomialLinearSystem& h_target,
                             const Policy& policy, int link_cap) {
    if (link_cap < 1) fail(ErrorKind::InvalidInput, "factorization cap must be >= 1");
    UntwistingSequence seq;
    seq.initial = phi;
    ToricBirationalMap current = phi;
    while (true) {
        DegreeData dd = analyze_map(current, h_target);
        if (!seq.ledger.empty()) {
            // 1/mu is nondecreasing along the whole program.
            const Rat& prev_mu = seq.ledger.back().degree.mu;
            if (dd.degree.mu > prev_mu)
                fail(ErrorKind::InternalInvariantViolation, "mu increased across a link");
        }
        seq.ledger.push_back(ledger_entry(dd));
        if (dd.nfi == NfiCase::SquareIso) {
            seq.terminated = true;
            break;
        }
        if (static_cast<int>(seq.links.size()) >= link_cap) break;
        Policy stage_policy = policy;
        stage_policy.clamp_index = true; // later stages may offer fewer choices
        auto [link, next] = untwist_once(current, h_target, stage_policy);
        if (next.matrix != phi.matrix)
            fail(ErrorKind::InternalInvariantViolation, "residual matrix drifted");
        seq.links.push_back(link);
        current = next;
    }
    seq.residual = current;
    // Composite correctness: product of the (identity) link matrices times the
    // residual equals the initial matrix.
    Mat composite = Mat::identity(phi.matrix.cols);
    for (const SarkisovLink& l : seq.links) composite = mul(l.matrix, composite);
    if (mul(seq.residual.matrix, composite) != phi.matrix)
        fail(ErrorKind::InternalInvariantViolation, "link composite does not reproduce the map");
    return seq;
}

UntwistingSequence factorize_checked(const ToricBirationalMap& phi,
                                     const MonomialLinearSystem& h_target, const Policy& policy,
                                     int link_cap) {
    UntwistingSequence seq = factorize(phi, h_target, policy, link_cap);
    if (!seq.terminated)
        fail(ErrorKind::StepCapExceeded,
             "factorization did not terminate within " + std::to_string(link_cap) + " links");
    return seq;
}

namespace {

std::string arrow(const Rat& before, const Rat& after) {
    if (before == after) return "=";
    return before < after ? "up" : "down";
}

} // namespace

MonotonicityReport check_monotonic(const UntwistingSequence& seq, const WeightFunction&) {
    MonotonicityReport rep;
    if (seq.ledger.size() != seq.links.size() + 1) {
        rep.pass = false;
        rep.violation = "ledger does not cover every stage";
        return rep;
    }
    for (size_t i = 0; i < seq.links.size(); ++i) {
        const DegreeLedgerEntry& before = seq.ledger[i];
        const DegreeLedgerEntry& after = seq.ledger[i + 1];
        const SarkisovLink& link = seq.links[i];
        MonotonicityRow row;
        row.link = static_cast<int>(i);
        bool case1 = link.kind == LinkKind::I || link.kind == LinkKind::II;
        std::ostringstream label;
        label << (case1 ? "1-" : "2-") << link_kind_name(link.kind);
        if (link.subtype) label << link.subtype;
        row.case_label = label.str();

        std::ostringstream mv;
        mv << "mu:" << before.augmented.mu.str() << "->" << after.augmented.mu.str()
           << " b:" << before.augmented.b << "->" << after.augmented.b
           << " rho:" << before.augmented.rho.str() << "->" << after.augmented.rho.str()
           << " d:" << before.augmented.d.str() << "->" << after.augmented.d.str()
           << " c':" << before.augmented.c_prime.str() << "->" << after.augmented.c_prime.str()
           << " e':" << before.augmented.e_prime.str() << "->" << after.augmented.e_prime.str()
           << " [" << arrow(before.augmented.mu, after.augmented.mu) << "]";
        row.movement = mv.str();

        Ordering cmp = augmented_compare(after.augmented, before.augmented);
        bool ivb = link.kind == LinkKind::IV && link.subtype == 'b';
        if (cmp == Ordering::Greater) {
            row.pass = false;
            row.note = "augmented degree increased";
        } else if (cmp == Ordering::Equal && !ivb) {
            row.pass = false;
            row.note = "augmented degree stalled outside Case 2-(IVb)";
        }
        if (case1) {
            if (degree_compare(after.degree, before.degree) != Ordering::Less) {
                row.pass = false;
                row.note = "Sarkisov degree did not strictly decrease on a Case-1 link";
            }
            if (before.degree.mu == after.degree.mu && before.degree.c == after.degree.c &&
                !(after.degree.e < before.degree.e)) {
                row.pass = false;
                row.note = "crepant count did not drop at equal (mu, c)";
            }
        }
        if (link.kind == LinkKind::III && link.subtype == 'b' &&
            after.base_cl_rank != before.base_cl_rank - 1) {
            row.pass = false;
            row.note = "Case 2-(IIIb) must drop rank Cl(S) by exactly one";
        }
        if (!row.pass && rep.pass) {
            rep.pass = false;
            rep.violation = "link " + std::to_string(i) + ": " + row.note;
        }
        rep.rows.push_back(row);
    }
    return rep;
}

void verify_monotonic(const UntwistingSequence& seq, const WeightFunction& w) {
    MonotonicityReport rep = check_monotonic(seq, w);
    if (!rep.pass) fail(ErrorKind::MonotonicityViolation, rep.violation);
}

} // namespace sarkisov
