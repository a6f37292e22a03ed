#pragma once

#include <optional>
#include <vector>

#include "sarkisov/linalg.hpp"

namespace sarkisov {

/// Convex rational polyhedral cone given by primitive generators. Strongly
/// convex throughout the engine (fans never store cones containing a line).
struct Cone {
    std::vector<Vec> generators;

    int ambient_dim() const { return generators.empty() ? 0 : static_cast<int>(generators[0].size()); }
    int dim() const { return rank_of(generators); }
    bool is_simplicial() const { return dim() == static_cast<int>(generators.size()); }
};

/// Barycentric solve in a simplicial cone: x = sum lambda_i g_i. Returns the
/// lambdas or nullopt when x is outside the linear span.
std::optional<std::vector<Rat>> coordinates_in_simplicial(const std::vector<Vec>& gens, const Vec& x);

/// Membership x in cone(gens). Simplicial cones use the barycentric solve;
/// full-dimensional non-simplicial cones use facet normals.
bool cone_contains(const std::vector<Vec>& gens, const Vec& x);

/// Relative interior membership (all barycentric coordinates > 0 for
/// simplicial cones; strict facet inequalities otherwise).
bool cone_contains_relint(const std::vector<Vec>& gens, const Vec& x);

/// Inward facet normals of a full-dimensional pointed cone.
std::vector<Vec> facet_normals(const std::vector<Vec>& gens);

/// Extreme rays of {x : <row, x> >= 0 for all rows} assuming the cone is
/// pointed. Rays are primitive, lex-sorted.
std::vector<Vec> extreme_rays_from_inequalities(const std::vector<Vec>& rows, int dim);

/// Extreme rays of the intersection of two full-dimensional cones given by
/// generators. Empty result when the intersection is lower dimensional.
std::vector<Vec> intersect_cones_fulldim(const std::vector<Vec>& a, const std::vector<Vec>& b);

/// Splits a (possibly non-simplicial) full-dimensional pointed cone into
/// simplicial cones sharing its extreme rays. Pulling triangulation from the
/// lex-smallest ray; supported for ambient dimension <= 3.
std::vector<std::vector<Vec>> triangulate_cone(const std::vector<Vec>& extreme);

} // namespace sarkisov
