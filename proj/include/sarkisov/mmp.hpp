#pragma once

#include <optional>

#include "sarkisov/discrepancy.hpp"
#include "sarkisov/toric.hpp"

namespace sarkisov {

enum class ContractionKind { Fibering, Divisorial, Small };

const char* contraction_kind_name(ContractionKind k);

/// Extremal ray of the relative Mori cone: the primitive positively normalized
/// relation vector shared by its wall curves.
struct ExtremalRay {
    std::vector<Int> cls;
    std::vector<int> wall_ids;
};

struct RelativeCone {
    std::vector<Wall> walls; // vertical walls over Z
    std::vector<ExtremalRay> extremal;
    int rank = 0; // dimension of the span of vertical classes
};

/// Extremal rays of NE(X/Z) from wall enumeration. Z given by its fan and the
/// lattice projection; the absolute cone is Z = point.
RelativeCone relative_mori_cone(const Fan& total, const Mat& projection, const Fan& base);

/// Sign pattern of the relation: no negative coefficient = fibering, exactly
/// one = divisorial (that ray is contracted), two or more = small.
ContractionKind classify_contraction(const Fan& f, const ExtremalRay& ray);

/// Model state in a relative MMP: the fan plus the transported pair boundary
/// (sys.scale is the pair scale).
struct MmpModel {
    Fan fan;
    MonomialLinearSystem sys;
};

struct MmpStep {
    ContractionKind kind;
    std::vector<Int> ray_class; // class in the pre-step model
    Fan fan_after;
    bool canonical_after = false;
    Fan base_after;      // fibering only
    Mat projection_after; // fibering only
};

struct MmpOptions {
    std::optional<std::vector<Int>> first_class;
    std::optional<InvariantDivisor> scaling; // ample divisor on the model
    int step_cap = 64;
    bool stop_at_relative_rank_one = false; // 2-ray-game mode
};

struct MmpRun {
    std::vector<MmpStep> steps;
    MmpModel model; // final birational model
    bool ended_with_fibering = false;
    Fan fibration_base;
    Mat fibration_projection;
    bool divisorial_happened = false;
};

/// Relative (K + cH)-MMP over Z. Selects a negative extremal ray each step
/// (first_class on step one, scaling ratio when given, else the ray with the
/// lexicographically smallest wall), executes it, re-verifies the pair stays
/// canonical, and stops at a fibering step or a relatively minimal model.
MmpRun run_relative_mmp(MmpModel start, const Fan& zfan, const Mat& zproj, const MmpOptions& opt);

/// MMP with scaling: every step picks the negative ray maximizing
/// -(K+cH).v / (A.v), ties broken by canonical ray order.
MmpRun mmp_with_scaling(MmpModel start, const Fan& zfan, const Mat& zproj,
                        const InvariantDivisor& ample, int step_cap = 64);

/// Surgery executors (exposed for tests).
struct DivisorialResult {
    Fan fan;
    std::vector<int> ray_map;
    int contracted_ray; // index in the old fan
};
DivisorialResult execute_divisorial(const Fan& f, const ExtremalRay& ray,
                                    const std::vector<Wall>& walls);
Fan execute_flip(const Fan& f, const ExtremalRay& ray, const std::vector<Wall>& walls);

/// Span of the fibre directions of a fibre-type class (union of the relation
/// supports of its walls).
std::vector<Vec> fibre_span_of_class(const Fan& f, const ExtremalRay& ray,
                                     const std::vector<Wall>& walls);

/// Pair degree (K + scale*H) . class.
Rat pair_degree_on_class(const MonomialLinearSystem& sys, const std::vector<Int>& cls);

} // namespace sarkisov
