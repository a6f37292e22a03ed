#pragma once

#include <optional>

#include "sarkisov/degree.hpp"
#include "sarkisov/mmp.hpp"

namespace sarkisov {

/// Extremal divisorial extraction of a crepant valuation landing on a
/// Q-factorial terminal model.
struct MaximalExtraction {
    ToricValuation valuation;
    Fan extracted_fan;
    std::vector<int> ray_map;
    int new_ray = -1;
    bool extremal = true; // relative rank of the extraction is always 1
    bool terminal = false;
};

/// All maximal extractions of (X, cH), canonical (lex) order; nonempty in a
/// Case-1 situation, else InternalInvariantViolation.
std::vector<MaximalExtraction> find_maximal_extractions(const ToricVariety& X,
                                                        const MonomialLinearSystem& h_at_c);

enum class LinkKind { I, II, III, IV };
const char* link_kind_name(LinkKind k);

/// One Sarkisov link with its elementary-step trace. Every elementary toric
/// step is the identity on the lattice, so the link matrix is the identity;
/// it is recorded to make composite checking explicit matrix algebra.
struct SarkisovLink {
    LinkKind kind = LinkKind::I;
    char subtype = 0; // 'a' / 'b' for Case-2 links, 0 otherwise
    std::optional<Vec> extraction;
    std::vector<MmpStep> steps;
    ToricMoriFibreSpace source;
    ToricMoriFibreSpace target;
    Mat matrix;
};

struct DegreeLedgerEntry {
    SarkisovDegree degree;
    AugmentedSarkisovDegree augmented;
    NfiCase nfi = NfiCase::SquareIso;
    long base_cl_rank = 0;
    long base_dim = 0;
};

DegreeLedgerEntry ledger_entry(const DegreeData& dd);

struct UntwistingSequence {
    ToricBirationalMap initial;
    std::vector<SarkisovLink> links;
    std::vector<DegreeLedgerEntry> ledger; // one entry per stage, links+1 total
    ToricBirationalMap residual;
    bool terminated = false;
};

struct Policy {
    enum class Kind { First, Index, Scaling } kind = Kind::First;
    int index = 1;           // 1-based, Index policy
    bool clamp_index = false; // factorize clamps to the last choice at later stages
    std::optional<InvariantDivisor> case2_base_divisor;
    int step_cap = 64;
};

/// Case 1: extract, then run the 2-ray game over S. forced_first selects the
/// first contracted class explicitly (NoOp error when it is the extraction
/// class, which is (K+cH)-trivial).
SarkisovLink two_ray_game_case1(const ToricMoriFibreSpace& xs, const MonomialLinearSystem& h_unit,
                                const Rat& c, const MaximalExtraction& ex,
                                const std::optional<std::vector<Int>>& forced_first = {},
                                int step_cap = 64);

/// Case-2 candidate rays: the (K + (1/mu)H)-negative extremal rays, canonical
/// order, with their supporting-divisor ratios.
struct Case2Candidate {
    ExtremalRay ray;
    Rat ratio; // -(K + (1/mu)H).v / (f*A . v)
};
std::vector<Case2Candidate> case2_candidates(const ToricMoriFibreSpace& xs,
                                             const MonomialLinearSystem& h_unit, const Rat& mu,
                                             const std::optional<InvariantDivisor>& a_base);

/// Case 2: contract the face spanned by the fibration ray and the chosen
/// negative ray, then run the game over T. Default choice: largest ratio.
SarkisovLink two_ray_game_case2(const ToricMoriFibreSpace& xs, const MonomialLinearSystem& h_unit,
                                const Rat& mu, const std::optional<InvariantDivisor>& a_base,
                                std::optional<int> forced_candidate = {}, int step_cap = 64);

/// One untwisting step; returns the link and the residual map.
std::pair<SarkisovLink, ToricBirationalMap> untwist_once(const ToricBirationalMap& phi,
                                                         const MonomialLinearSystem& h_target,
                                                         const Policy& policy);

/// Iterates untwist_once until a square isomorphism or the cap. The returned
/// sequence reports `terminated`; factorize_checked throws StepCapExceeded.
UntwistingSequence factorize(const ToricBirationalMap& phi, const MonomialLinearSystem& h_target,
                             const Policy& policy, int link_cap = 64);
UntwistingSequence factorize_checked(const ToricBirationalMap& phi,
                                     const MonomialLinearSystem& h_target, const Policy& policy,
                                     int link_cap = 64);

struct MonotonicityRow {
    int link = 0;
    std::string case_label;
    std::string movement;
    bool pass = true;
    std::string note;
};
struct MonotonicityReport {
    bool pass = true;
    std::vector<MonotonicityRow> rows;
    std::string violation;
};

/// Per-link monotonicity table: augmented degree non-increasing (strictly
/// except subtype IVb), Case-1 crepant count drops at equal (mu, c), IIIb
/// drops rank Cl(S) by exactly one.
MonotonicityReport check_monotonic(const UntwistingSequence& seq, const WeightFunction& w);

/// Throwing variant: MonotonicityViolation naming the offending link.
void verify_monotonic(const UntwistingSequence& seq, const WeightFunction& w);

} // namespace sarkisov
