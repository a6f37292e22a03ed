#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sarkisov/cone.hpp"

namespace sarkisov {

/// Complete rational polyhedral fan with primitive rays. Rays are kept in
/// canonical lex order and cones as sorted index sets, so fan equality is
/// structural equality and every downstream computation is deterministic.
struct Fan {
    int dim = 0;
    std::vector<Vec> rays;
    std::vector<std::vector<int>> cones; // maximal cones as ray index sets

    bool operator==(const Fan& o) const = default;

    std::vector<Vec> cone_generators(int c) const {
        std::vector<Vec> g;
        for (int i : cones[c]) g.push_back(rays[i]);
        return g;
    }
    int ray_index(const Vec& v) const; // -1 when absent
};

/// Builds a fan in canonical form. Validates shapes (primitive distinct rays,
/// in-range indices); geometric fan axioms are checked by fan_is_valid.
Fan make_fan(int dim, std::vector<Vec> rays, std::vector<std::vector<int>> cones);

/// Point location: first maximal cone containing w together with barycentric
/// coordinates (simplicial cones only).
struct Located {
    int cone;
    std::vector<Rat> lambda;
};
std::optional<Located> locate(const Fan& f, const Vec& w);

/// Ray indices of the minimal cone of `f` whose relative interior contains w.
std::optional<std::vector<int>> minimal_cone_containing(const Fan& f, const Vec& w);

/// PL function with value 1 on every ray (the toric log-discrepancy function
/// of the underlying variety). Throws InvalidInput if w lies outside |f|.
Rat psi(const Fan& f, const Vec& w);

bool fan_is_simplicial(const Fan& f);
bool fan_is_complete(const Fan& f);
bool fan_is_smooth(const Fan& f);
bool fan_is_terminal(const Fan& f);  // every non-ray lattice point has psi > 1
bool fan_is_canonical(const Fan& f); // every non-ray lattice point has psi >= 1

/// Pairwise proper-intersection check (cones meet in common faces).
bool fan_is_valid(const Fan& f, std::string* why = nullptr);

Int cone_multiplicity(const Fan& f, int cone);

/// Result of a surgery that keeps the lattice: the new fan plus the map from
/// old ray indices to new ones (-1 for a removed ray).
struct FanSurgery {
    Fan fan;
    std::vector<int> ray_map;
    int new_ray = -1;
};

/// Star subdivision at a primitive lattice point w interior to some cone.
/// Errors: NoOp when w is an existing ray, NotSubdividable when w lies
/// outside the support, InvalidInput for zero/non-primitive w.
FanSurgery star_subdivide(const Fan& f, const Vec& w);

/// Deterministic resolution: repeatedly star-subdivide at the minimal-psi
/// (then lex-smallest) primitive parallelotope point of a maximal-multiplicity
/// cone until every maximal cone is unimodular.
Fan smooth_subdivision(const Fan& f);

/// Coarsest common refinement of two complete fans in the same lattice,
/// simplicialized and smoothed so it supports a common log resolution.
Fan common_refinement(const Fan& a, const Fan& b);

/// Codimension-1 cone shared by two maximal cones, with the primitive linear
/// relation among the involved rays (the two outer rays have positive
/// coefficients). `relation` is indexed by fan rays, zero off the circuit.
struct Wall {
    std::vector<int> wall_rays;
    int cone_a = -1, cone_b = -1;
    int outer_a = -1, outer_b = -1; // ray indices completing each cone
    std::vector<Int> relation;
};

std::vector<Wall> fan_walls(const Fan& f);

/// Enumerates lattice points x = sum lambda_i g_i with lambda_i >= 0 and
/// sum lambda_i <= bound over a simplicial cone; reports (x, lambda).
void enumerate_cone_simplex_points(
    const std::vector<Vec>& gens, const Rat& bound,
    const std::function<void(const Vec&, const std::vector<Rat>&)>& fn);

/// Star fan of a ray: the fan of the invariant divisor V(ray) in the quotient
/// lattice. Used for class-group ranks of boundary components.
Fan star_fan(const Fan& f, int ray);

} // namespace sarkisov
