#pragma once

#include "sarkisov/discrepancy.hpp"
#include "sarkisov/transform.hpp"

namespace sarkisov {

enum class Ordering { Less, Equal, Greater };

/// The triple (mu, c, e). c may be +infinity (base-point-free), in which case
/// e = 0; e may be +infinity when the crepant level set is unbounded.
struct SarkisovDegree {
    Rat mu;
    Rat c;
    Rat e;

    bool operator==(const SarkisovDegree& o) const = default;
};

/// Strict total order: bigger mu, then smaller c, then bigger e means a bigger
/// degree. Returns the comparison of a against b.
Ordering degree_compare(const SarkisovDegree& a, const SarkisovDegree& b);

/// w_alpha^- (closed at alpha) or w_alpha^+ (open at alpha): 1-x below the
/// cutoff, 0 at and above 1.
struct WeightFunction {
    Rat alpha;
    bool closed; // true: w_alpha^-, false: w_alpha^+
};

WeightFunction make_weight(const Rat& alpha, bool closed);
Rat weight(const WeightFunction& w, const Rat& a);

/// Summed weight W(b) = sum_{k>=1} w(k(1-b)); finite for b < 1.
Rat summed_weight(const WeightFunction& w, const Rat& b);

/// The 6-tuple (mu, b, rho, d, c', e') with its lexicographic order of
/// directions (<, >, <, <, >, <).
struct AugmentedSarkisovDegree {
    Rat mu;
    long b = 0;
    Rat rho;
    Rat d;
    Rat c_prime;
    Rat e_prime;

    bool operator==(const AugmentedSarkisovDegree& o) const = default;
};

Ordering augmented_compare(const AugmentedSarkisovDegree& a, const AugmentedSarkisovDegree& b);

/// Difficulty input data: boundary components with class-group ranks of their
/// normalizations, the finitely many valuations of log discrepancy < 1 with
/// their centers, and per-center branch coefficients.
struct ProfileComponent {
    Rat coefficient;
    long picard_rank = 1;
};
struct ProfileValuation {
    Rat log_discrepancy;
    int center_codim = 0;
    int center_id = 0;
};
struct ProfileBranch {
    int center_id = 0;
    Rat component_coefficient;
};
struct DiscrepancyProfile {
    std::vector<ProfileComponent> components;
    std::vector<ProfileValuation> valuations;
    std::vector<ProfileBranch> branches;
};

/// Difficulty of a terminal pair from its profile: weighted low-discrepancy
/// valuations plus summed-weight towers over the codimension-2 centers that
/// carry at least one positive-weight valuation.
Rat difficulty_terminal(const DiscrepancyProfile& p, const WeightFunction& w);

/// Difficulty of a klt invariant pair (X, D): terminalizes by subdividing at
/// every valuation of log discrepancy <= 1, builds the toric profile, and
/// evaluates the terminal formula. The value does not depend on the
/// subdivision order.
Rat difficulty_klt(const ToricVariety& X, const InvariantDivisor& D, const WeightFunction& w);

/// The profile difficulty_klt evaluates (exposed for oracles).
DiscrepancyProfile klt_profile(const ToricVariety& X, const InvariantDivisor& D);

enum class NfiCase { SquareIso, Case1, Case2 };
const char* nfi_case_name(NfiCase c);

/// Everything the degree of a map determines, computed through the total
/// transform onto the source model.
struct DegreeData {
    MonomialLinearSystem h_source; // unit scale
    SarkisovDegree degree;
    AugmentedSarkisovDegree augmented;
    NfiCase nfi = NfiCase::SquareIso;
    long base_cl_rank = 0;
    long base_dim = 0;
};

DegreeData analyze_map(const ToricBirationalMap& phi, const MonomialLinearSystem& h_target);

SarkisovDegree degree_of(const ToricBirationalMap& phi, const MonomialLinearSystem& h_target);
AugmentedSarkisovDegree augmented_degree_of(const ToricBirationalMap& phi,
                                            const MonomialLinearSystem& h_target);
NfiCase nfi_case(const ToricBirationalMap& phi, const MonomialLinearSystem& h_target);

/// The polarization |m(-K + f^* A)| on a Mori fibre space; validates
/// integrality and relative ampleness.
MonomialLinearSystem polarization_system(const ToricMoriFibreSpace& x, long m,
                                         const InvariantDivisor& a_on_base);

} // namespace sarkisov
