#pragma once

#include <string>
#include <vector>

#include "sarkisov/toric.hpp"

namespace sarkisov {

/// Divisorial toric valuation: a primitive lattice point together with the
/// minimal fan cone containing it. Exceptional iff the point is not a ray.
struct ToricValuation {
    Vec vector;
    std::vector<int> host_cone;
    bool exceptional = true;
};

ToricValuation make_valuation(const Fan& f, const Vec& w);

/// log discrepancy a(E_w, X, cH) = psi(w) - scale * mult_H(w). For a ray of X
/// this equals 1 minus the scaled fixed-part coefficient at that ray.
Rat log_discrepancy(const ToricVariety& X, const MonomialLinearSystem& H, const Vec& w);

/// Smooth refinement on which both psi and the multiplicity function are
/// linear on every cone, with per-ray values. All threshold and enumeration
/// computations reduce to exact per-cone arithmetic on this data.
struct DiscrepancyData {
    Fan refined;
    std::vector<bool> original; // ray of the refined fan is a ray of X
    std::vector<Rat> psi_ray;
    std::vector<Rat> mult_ray;  // unscaled system multiplicity
};

DiscrepancyData build_discrepancy_data(const Fan& x, const MonomialLinearSystem& H);

/// sup{t : (X, tH) canonical} for the integral (unit-scale) system; +infinity
/// when the system has empty base locus. Requires X terminal.
Rat canonical_threshold(const ToricVariety& X, const MonomialLinearSystem& H);

/// sup{t : (X, tH) log canonical}; ray (fixed-part) constraints included.
Rat lc_threshold(const ToricVariety& X, const MonomialLinearSystem& H);

/// Threshold restricted to valuations whose center contains the orbit closure
/// of the stratum (a cone of the fan, given by ray indices; empty = generic).
Rat local_canonical_threshold(const ToricVariety& X, const MonomialLinearSystem& H,
                              const std::vector<int>& stratum);

/// Pair singularity tests at the system's own scale.
bool is_pair_canonical(const Fan& x, const MonomialLinearSystem& H);
bool is_pair_klt(const Fan& x, const MonomialLinearSystem& H);
bool is_pair_terminal(const Fan& x, const MonomialLinearSystem& H);

struct CrepantEnumeration {
    bool finite = true;
    std::string diagnostic;
    std::vector<ToricValuation> valuations; // a = 1 exactly, lex order
};

/// All exceptional valuations with log discrepancy exactly 1 at the system's
/// scale. Infinite (with diagnostic) when the level set is unbounded.
CrepantEnumeration crepant_divisors(const ToricVariety& X, const MonomialLinearSystem& H);

/// All exceptional valuations with a < bound (bound <= 1); requires the pair
/// klt at the system's scale, else reports the unbounded region.
std::vector<ToricValuation> low_discrepancy_valuations(const ToricVariety& X,
                                                       const MonomialLinearSystem& H,
                                                       const Rat& bound);

/// Variant with non-strict cutoff a <= bound (terminalization support).
std::vector<ToricValuation> low_discrepancy_valuations_closed(const ToricVariety& X,
                                                              const MonomialLinearSystem& H,
                                                              const Rat& bound);

} // namespace sarkisov
