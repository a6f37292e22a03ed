#include "sarkisov/cone.hpp"

#include <algorithm>
#include <set>

#include "sarkisov/errors.hpp"

namespace sarkisov {

namespace {

// All (k)-subsets of {0..m-1}, emitted in lexicographic order.
void foreach_subset(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
    if (k > m || k < 0) return;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[i] == m - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

std::optional<std::vector<Rat>> coordinates_in_simplicial(const std::vector<Vec>& gens, const Vec& x) {
    return solve_rational(gens, x);
}

bool cone_contains(const std::vector<Vec>& gens, const Vec& x) {
    if (gens.empty()) return is_zero(x);
    int n = static_cast<int>(gens[0].size());
    if (static_cast<int>(gens.size()) == rank_of(gens)) {
        auto lam = coordinates_in_simplicial(gens, x);
        if (!lam) return false;
        return std::all_of(lam->begin(), lam->end(), [](const Rat& r) { return !r.is_negative(); });
    }
    if (rank_of(gens) != n)
        fail(ErrorKind::UnsupportedInput, "membership in a lower-dimensional non-simplicial cone");
    for (const Vec& h : facet_normals(gens))
        if (dot(h, x) < 0) return false;
    return true;
}

bool cone_contains_relint(const std::vector<Vec>& gens, const Vec& x) {
    if (gens.empty()) return is_zero(x);
    int n = static_cast<int>(gens[0].size());
    if (static_cast<int>(gens.size()) == rank_of(gens)) {
        auto lam = coordinates_in_simplicial(gens, x);
        if (!lam) return false;
        return std::all_of(lam->begin(), lam->end(), [](const Rat& r) { return r.is_positive(); });
    }
    if (rank_of(gens) != n)
        fail(ErrorKind::UnsupportedInput, "relint membership in a lower-dimensional non-simplicial cone");
    for (const Vec& h : facet_normals(gens))
        if (dot(h, x) <= 0) return false;
    return true;
}

std::vector<Vec> facet_normals(const std::vector<Vec>& gens) {
    if (gens.empty()) return {};
    int n = static_cast<int>(gens[0].size());
    if (rank_of(gens) != n)
        fail(ErrorKind::UnsupportedInput, "facet normals of a lower-dimensional cone");
    std::set<Vec> normals;
    if (n == 1) {
        // One generator direction; the facet is the origin, halfspace = sign.
        normals.insert(primitive_vector(gens[0]));
        return {normals.begin(), normals.end()};
    }
    foreach_subset(static_cast<int>(gens.size()), n - 1, [&](const std::vector<int>& idx) {
        std::vector<Vec> rows;
        for (int i : idx) rows.push_back(gens[i]);
        if (rank_of(rows) != n - 1) return;
        std::vector<Vec> ns = integer_nullspace(rows);
        if (ns.size() != 1) return;
        Vec h = ns[0];
        bool pos = false, neg = false;
        for (const Vec& g : gens) {
            Int d = dot(h, g);
            if (d > 0) pos = true;
            if (d < 0) neg = true;
        }
        if (pos && neg) return; // interior hyperplane, not a facet
        if (neg) {
            for (Int& c : h) c = -c;
        }
        if (pos || neg) normals.insert(h);
    });
    return {normals.begin(), normals.end()};
}

std::vector<Vec> extreme_rays_from_inequalities(const std::vector<Vec>& rows, int dim) {
    std::set<Vec> rays;
    if (dim == 1) {
        for (const Vec& cand : {Vec{Int(1)}, Vec{Int(-1)}}) {
            bool ok = true;
            for (const Vec& r : rows)
                if (dot(r, cand) < 0) ok = false;
            if (ok) rays.insert(cand);
        }
        if (rays.size() == 2)
            fail(ErrorKind::InternalInvariantViolation, "inequality cone is not pointed");
        return {rays.begin(), rays.end()};
    }
    foreach_subset(static_cast<int>(rows.size()), dim - 1, [&](const std::vector<int>& idx) {
        std::vector<Vec> sub;
        for (int i : idx) sub.push_back(rows[i]);
        if (rank_of(sub) != dim - 1) return;
        std::vector<Vec> ns = integer_nullspace(sub);
        if (ns.size() != 1) return;
        for (const Vec& cand : {ns[0], scale(Int(-1), ns[0])}) {
            bool ok = true;
            for (const Vec& r : rows)
                if (dot(r, cand) < 0) {
                    ok = false;
                    break;
                }
            if (ok) rays.insert(primitive_vector(cand));
        }
    });
    // Pointedness: a ray and its negative cannot both be present.
    for (const Vec& r : rays)
        if (rays.count(scale(Int(-1), r)))
            fail(ErrorKind::InternalInvariantViolation, "inequality cone is not pointed");
    return {rays.begin(), rays.end()};
}

std::vector<Vec> intersect_cones_fulldim(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    if (a.empty() || b.empty()) return {};
    int n = static_cast<int>(a[0].size());
    std::vector<Vec> rows = facet_normals(a);
    for (const Vec& h : facet_normals(b)) rows.push_back(h);
    std::vector<Vec> rays = extreme_rays_from_inequalities(rows, n);
    if (rank_of(rays) != n) return {};
    return rays;
}

std::vector<std::vector<Vec>> triangulate_cone(const std::vector<Vec>& extreme) {
    int n = extreme.empty() ? 0 : static_cast<int>(extreme[0].size());
    int d = rank_of(extreme);
    if (static_cast<int>(extreme.size()) == d) return {extreme};
    if (n > 3 || d > 3)
        fail(ErrorKind::UnsupportedInput, "cone triangulation beyond dimension 3");
    if (d != n)
        fail(ErrorKind::UnsupportedInput, "triangulation of a lower-dimensional non-simplicial cone");
    // d == n == 3 with >3 extreme rays: pull from the lex-smallest ray. Facets
    // of a 3-cone are 2-dimensional, hence have exactly two extreme rays.
    std::vector<Vec> sorted = extreme;
    std::sort(sorted.begin(), sorted.end(), lex_less);
    const Vec& apex = sorted[0];
    std::vector<std::vector<Vec>> out;
    for (const Vec& h : facet_normals(extreme)) {
        if (dot(h, apex) == 0) continue;
        std::vector<Vec> tight;
        for (const Vec& g : sorted)
            if (dot(h, g) == 0) tight.push_back(g);
        if (tight.size() != 2)
            fail(ErrorKind::InternalInvariantViolation, "facet of a 3-cone with != 2 rays");
        out.push_back({apex, tight[0], tight[1]});
    }
    return out;
}

} // namespace sarkisov
