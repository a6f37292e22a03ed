#include "sarkisov/fan.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "sarkisov/errors.hpp"

namespace sarkisov {

namespace {

Int rat_floor(const Rat& q) {
    Int n = q.numerator(), d = q.denominator();
    if (n >= 0) return n / d;
    return -((-n + d - 1) / d);
}

Int rat_ceil(const Rat& q) { return -rat_floor(-q); }

// Iterates integer points of the box [lo, hi] coordinatewise.
void foreach_box_point(const Vec& lo, const Vec& hi, const std::function<void(const Vec&)>& fn) {
    size_t n = lo.size();
    if (n == 0) {
        fn(Vec{});
        return;
    }
    Vec x = lo;
    while (true) {
        fn(x);
        size_t i = 0;
        while (i < n) {
            x[i] += 1;
            if (x[i] <= hi[i]) break;
            x[i] = lo[i];
            ++i;
        }
        if (i == n) break;
    }
}

Fan assemble_fan(int dim, const std::vector<std::vector<Vec>>& cone_gens) {
    std::vector<Vec> rays;
    std::map<Vec, int> index;
    std::vector<std::vector<int>> cones;
    for (const auto& gens : cone_gens) {
        std::vector<int> c;
        for (const Vec& g : gens) {
            Vec p = primitive_vector(g);
            auto it = index.find(p);
            if (it == index.end()) {
                index[p] = static_cast<int>(rays.size());
                rays.push_back(p);
                c.push_back(static_cast<int>(rays.size()) - 1);
            } else {
                c.push_back(it->second);
            }
        }
        cones.push_back(c);
    }
    return make_fan(dim, std::move(rays), std::move(cones));
}

} // namespace

int Fan::ray_index(const Vec& v) const {
    for (size_t i = 0; i < rays.size(); ++i)
        if (rays[i] == v) return static_cast<int>(i);
    return -1;
}

Fan make_fan(int dim, std::vector<Vec> rays, std::vector<std::vector<int>> cones) {
    if (dim < 0) fail(ErrorKind::InvalidInput, "negative lattice dimension");
    if (dim == 0) {
        if (!rays.empty()) fail(ErrorKind::InvalidInput, "rays in a 0-dimensional fan");
        Fan f;
        f.dim = 0;
        f.cones = {{}};
        return f;
    }
    for (const Vec& r : rays) {
        if (static_cast<int>(r.size()) != dim)
            fail(ErrorKind::InvalidInput, "ray dimension mismatch");
        if (is_zero(r)) fail(ErrorKind::InvalidInput, "zero ray");
        if (!is_primitive(r)) fail(ErrorKind::InvalidInput, "non-primitive ray " + vec_str(r));
    }
    // Canonical ray order with index remap.
    std::vector<int> perm(rays.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) { return lex_less(rays[a], rays[b]); });
    std::vector<int> inv(rays.size());
    std::vector<Vec> sorted;
    for (size_t i = 0; i < perm.size(); ++i) {
        inv[perm[i]] = static_cast<int>(i);
        sorted.push_back(rays[perm[i]]);
    }
    for (size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] == sorted[i + 1]) fail(ErrorKind::InvalidInput, "duplicate ray");

    std::set<std::vector<int>> cone_set;
    std::vector<bool> used(sorted.size(), false);
    for (auto& c : cones) {
        if (c.empty()) fail(ErrorKind::InvalidInput, "empty maximal cone");
        for (int& i : c) {
            if (i < 0 || i >= static_cast<int>(rays.size()))
                fail(ErrorKind::InvalidInput, "cone ray index out of range");
            i = inv[i];
            used[i] = true;
        }
        std::sort(c.begin(), c.end());
        for (size_t i = 0; i + 1 < c.size(); ++i)
            if (c[i] == c[i + 1]) fail(ErrorKind::InvalidInput, "repeated ray in cone");
        cone_set.insert(c);
    }
    for (size_t i = 0; i < used.size(); ++i)
        if (!used[i]) fail(ErrorKind::InvalidInput, "ray not used by any cone: " + vec_str(sorted[i]));

    Fan f;
    f.dim = dim;
    f.rays = std::move(sorted);
    f.cones.assign(cone_set.begin(), cone_set.end());
    return f;
}

std::optional<Located> locate(const Fan& f, const Vec& w) {
    if (f.dim == 0) return Located{0, {}};
    for (size_t c = 0; c < f.cones.size(); ++c) {
        std::vector<Vec> gens = f.cone_generators(static_cast<int>(c));
        if (static_cast<int>(gens.size()) != rank_of(gens)) continue; // non-simplicial: skip
        auto lam = coordinates_in_simplicial(gens, w);
        if (!lam) continue;
        bool inside = std::all_of(lam->begin(), lam->end(), [](const Rat& r) { return !r.is_negative(); });
        if (inside) return Located{static_cast<int>(c), *lam};
    }
    return std::nullopt;
}

std::optional<std::vector<int>> minimal_cone_containing(const Fan& f, const Vec& w) {
    auto loc = locate(f, w);
    if (!loc) return std::nullopt;
    std::vector<int> support;
    const auto& cone = f.cones[loc->cone];
    for (size_t i = 0; i < cone.size(); ++i)
        if (loc->lambda[i].is_positive()) support.push_back(cone[i]);
    return support;
}

Rat psi(const Fan& f, const Vec& w) {
    auto loc = locate(f, w);
    if (!loc) fail(ErrorKind::InvalidInput, "point outside the fan support: " + vec_str(w));
    Rat s(0);
    for (const Rat& l : loc->lambda) s += l;
    return s;
}

bool fan_is_simplicial(const Fan& f) {
    if (f.dim == 0) return true;
    for (size_t c = 0; c < f.cones.size(); ++c) {
        std::vector<Vec> gens = f.cone_generators(static_cast<int>(c));
        if (static_cast<int>(gens.size()) != rank_of(gens)) return false;
    }
    return true;
}

bool fan_is_complete(const Fan& f) {
    if (f.dim == 0) return f.cones.size() == 1;
    if (f.dim == 1) {
        return f.rays.size() == 2 && f.rays[0] == Vec{Int(-1)} && f.rays[1] == Vec{Int(1)};
    }
    // Every geometric facet of a maximal cone must be shared by exactly two
    // maximal cones; all maximal cones must be full dimensional.
    std::map<std::vector<int>, int> facet_count;
    for (size_t c = 0; c < f.cones.size(); ++c) {
        std::vector<Vec> gens = f.cone_generators(static_cast<int>(c));
        if (rank_of(gens) != f.dim) return false;
        for (const Vec& h : facet_normals(gens)) {
            std::vector<int> key;
            for (int i : f.cones[c])
                if (dot(h, f.rays[i]) == 0) key.push_back(i);
            std::sort(key.begin(), key.end());
            facet_count[key] += 1;
        }
    }
    for (const auto& [key, count] : facet_count)
        if (count != 2) return false;
    return !f.cones.empty();
}

Int cone_multiplicity(const Fan& f, int cone) {
    std::vector<Vec> gens = f.cone_generators(cone);
    if (static_cast<int>(gens.size()) != f.dim)
        fail(ErrorKind::InvalidInput, "multiplicity of a non-simplicial or lower-dim cone");
    Mat m(f.dim, f.dim);
    for (int j = 0; j < f.dim; ++j)
        for (int i = 0; i < f.dim; ++i) m.at(i, j) = gens[j][i];
    Int d = det(m);
    return d < 0 ? Int(-d) : d;
}

bool fan_is_smooth(const Fan& f) {
    if (f.dim == 0) return true;
    if (!fan_is_simplicial(f)) return false;
    for (size_t c = 0; c < f.cones.size(); ++c) {
        if (static_cast<int>(f.cones[c].size()) != f.dim) continue; // lower-dim cones can't occur in complete fans
        if (cone_multiplicity(f, static_cast<int>(c)) != 1) return false;
    }
    return true;
}

void enumerate_cone_simplex_points(
    const std::vector<Vec>& gens, const Rat& bound,
    const std::function<void(const Vec&, const std::vector<Rat>&)>& fn) {
    if (gens.empty()) return;
    int n = static_cast<int>(gens[0].size());
    Vec lo(n, Int(0)), hi(n, Int(0));
    for (int i = 0; i < n; ++i) {
        Int neg = 0, pos = 0;
        for (const Vec& g : gens) {
            if (g[i] < 0) neg += g[i];
            if (g[i] > 0) pos += g[i];
        }
        lo[i] = rat_floor(bound * Rat(neg));
        hi[i] = rat_ceil(bound * Rat(pos));
    }
    foreach_box_point(lo, hi, [&](const Vec& x) {
        auto lam = coordinates_in_simplicial(gens, x);
        if (!lam) return;
        Rat total(0);
        for (const Rat& l : *lam) {
            if (l.is_negative()) return;
            total += l;
        }
        if (total > bound) return;
        fn(x, *lam);
    });
}

namespace {

bool fan_psi_bounded_below(const Fan& f, bool strict) {
    // strict: every non-ray lattice point of every cone has psi > 1
    // (terminal); otherwise psi >= 1 (canonical).
    for (size_t c = 0; c < f.cones.size(); ++c) {
        std::vector<Vec> gens = f.cone_generators(static_cast<int>(c));
        if (static_cast<int>(gens.size()) != rank_of(gens))
            fail(ErrorKind::UnsupportedInput, "terminality of a non-simplicial fan");
        if (static_cast<int>(gens.size()) == f.dim && cone_multiplicity(f, static_cast<int>(c)) == 1)
            continue; // unimodular cones carry no extra lattice points
        bool bad = false;
        enumerate_cone_simplex_points(gens, Rat(1), [&](const Vec& x, const std::vector<Rat>& lam) {
            if (bad || is_zero(x)) return;
            // Generators themselves are rays of the variety, not exceptional.
            for (const Vec& g : gens)
                if (x == g) return;
            Rat total(0);
            for (const Rat& l : lam) total += l;
            if (strict ? total <= Rat(1) : total < Rat(1)) bad = true;
        });
        if (bad) return false;
    }
    return true;
}

} // namespace

bool fan_is_terminal(const Fan& f) { return f.dim == 0 || fan_psi_bounded_below(f, true); }
bool fan_is_canonical(const Fan& f) { return f.dim == 0 || fan_psi_bounded_below(f, false); }

bool fan_is_valid(const Fan& f, std::string* why) {
    if (f.dim <= 1) return true;
    for (size_t i = 0; i < f.cones.size(); ++i) {
        std::vector<Vec> gi = f.cone_generators(static_cast<int>(i));
        if (rank_of(gi) != static_cast<int>(gi.size())) continue; // checked via Q-factoriality separately
        for (size_t j = i + 1; j < f.cones.size(); ++j) {
            std::vector<Vec> gj = f.cone_generators(static_cast<int>(j));
            if (rank_of(gj) != static_cast<int>(gj.size())) continue;
            if (rank_of(gi) != f.dim || rank_of(gj) != f.dim) continue;
            std::vector<Vec> rows = facet_normals(gi);
            for (const Vec& h : facet_normals(gj)) rows.push_back(h);
            std::vector<Vec> rays = extreme_rays_from_inequalities(rows, f.dim);
            for (const Vec& r : rays) {
                bool in_i = std::find(gi.begin(), gi.end(), r) != gi.end();
                bool in_j = std::find(gj.begin(), gj.end(), r) != gj.end();
                if (!in_i || !in_j) {
                    if (why) {
                        std::ostringstream os;
                        os << "cones " << i << " and " << j
                           << " do not meet in a common face (ray " << vec_str(r) << ")";
                        *why = os.str();
                    }
                    return false;
                }
            }
        }
    }
    return true;
}

FanSurgery star_subdivide(const Fan& f, const Vec& w) {
    if (is_zero(w)) fail(ErrorKind::InvalidInput, "star subdivision at the zero vector");
    if (!is_primitive(w)) fail(ErrorKind::InvalidInput, "star subdivision at a non-primitive point");
    if (f.ray_index(w) >= 0)
        fail(ErrorKind::NoOpSubdivision, "subdivision point is already a ray: " + vec_str(w));
    auto min_cone = minimal_cone_containing(f, w);
    if (!min_cone) fail(ErrorKind::NotSubdividable, "point outside the fan support: " + vec_str(w));

    std::vector<Vec> new_rays = f.rays;
    new_rays.push_back(w);
    std::vector<std::vector<int>> new_cones;
    int w_old_index = static_cast<int>(f.rays.size());
    for (size_t c = 0; c < f.cones.size(); ++c) {
        const auto& cone = f.cones[c];
        bool contains = std::includes(cone.begin(), cone.end(), min_cone->begin(), min_cone->end());
        if (!contains) {
            new_cones.push_back(cone);
            continue;
        }
        std::vector<Vec> gens = f.cone_generators(static_cast<int>(c));
        auto lam = coordinates_in_simplicial(gens, w);
        if (!lam) fail(ErrorKind::InternalInvariantViolation, "inconsistent star subdivision state");
        for (size_t p = 0; p < cone.size(); ++p) {
            if (!(*lam)[p].is_positive()) continue;
            std::vector<int> nc;
            for (size_t q = 0; q < cone.size(); ++q)
                if (q != p) nc.push_back(cone[q]);
            nc.push_back(w_old_index);
            new_cones.push_back(nc);
        }
    }
    Fan out = make_fan(f.dim, new_rays, new_cones);
    FanSurgery s;
    s.fan = out;
    s.ray_map.resize(f.rays.size());
    for (size_t i = 0; i < f.rays.size(); ++i) s.ray_map[i] = out.ray_index(f.rays[i]);
    s.new_ray = out.ray_index(w);
    return s;
}

Fan smooth_subdivision(const Fan& f) {
    Fan cur = f;
    if (cur.dim <= 1) return cur;
    while (true) {
        if (!fan_is_simplicial(cur))
            fail(ErrorKind::UnsupportedInput, "smoothing of a non-simplicial fan");
        Int max_mult = 0;
        for (size_t c = 0; c < cur.cones.size(); ++c) {
            if (static_cast<int>(cur.cones[c].size()) != cur.dim) continue;
            Int m = cone_multiplicity(cur, static_cast<int>(c));
            if (m > max_mult) max_mult = m;
        }
        if (max_mult <= 1) return cur;

        // Candidates: primitive parallelotope points of maximal-multiplicity
        // cones; pick minimal psi, then lex-smallest.
        bool have = false;
        Rat best_psi(0);
        Vec best;
        for (size_t c = 0; c < cur.cones.size(); ++c) {
            if (static_cast<int>(cur.cones[c].size()) != cur.dim) continue;
            if (cone_multiplicity(cur, static_cast<int>(c)) != max_mult) continue;
            std::vector<Vec> gens = cur.cone_generators(static_cast<int>(c));
            enumerate_cone_simplex_points(gens, Rat(static_cast<long>(cur.dim)), [&](const Vec& x, const std::vector<Rat>& lam) {
                if (is_zero(x)) return;
                for (const Rat& l : lam)
                    if (l >= Rat(1)) return; // outside the half-open parallelotope
                Vec w = primitive_vector(x);
                Rat g(content(x));
                Rat p(0);
                for (const Rat& l : lam) p += l;
                p = p / g;
                if (!have || p < best_psi || (p == best_psi && lex_less(w, best))) {
                    have = true;
                    best_psi = p;
                    best = w;
                }
            });
        }
        if (!have)
            fail(ErrorKind::InternalInvariantViolation, "singular cone without parallelotope points");
        cur = star_subdivide(cur, best).fan;
    }
}

Fan common_refinement(const Fan& a, const Fan& b) {
    if (a.dim != b.dim) fail(ErrorKind::InvalidInput, "common refinement across different lattices");
    if (!fan_is_complete(a) || !fan_is_complete(b))
        fail(ErrorKind::InvalidInput, "common refinement requires complete fans");
    if (a.dim <= 1) return a;
    if (a.dim > 3) fail(ErrorKind::UnsupportedInput, "common refinement beyond dimension 3");
    std::vector<std::vector<Vec>> pieces;
    for (size_t i = 0; i < a.cones.size(); ++i) {
        std::vector<Vec> ga = a.cone_generators(static_cast<int>(i));
        for (size_t j = 0; j < b.cones.size(); ++j) {
            std::vector<Vec> gb = b.cone_generators(static_cast<int>(j));
            std::vector<Vec> rays = intersect_cones_fulldim(ga, gb);
            if (rays.empty()) continue;
            for (const auto& simp : triangulate_cone(rays)) pieces.push_back(simp);
        }
    }
    return smooth_subdivision(assemble_fan(a.dim, pieces));
}

std::vector<Wall> fan_walls(const Fan& f) {
    if (f.dim == 0) return {};
    if (!fan_is_simplicial(f))
        fail(ErrorKind::UnsupportedInput, "wall enumeration on a non-simplicial fan");
    std::map<std::vector<int>, std::vector<std::pair<int, int>>> facets;
    for (size_t c = 0; c < f.cones.size(); ++c) {
        const auto& cone = f.cones[c];
        if (static_cast<int>(cone.size()) != f.dim) continue;
        for (size_t p = 0; p < cone.size(); ++p) {
            std::vector<int> key;
            for (size_t q = 0; q < cone.size(); ++q)
                if (q != p) key.push_back(cone[q]);
            facets[key].push_back({static_cast<int>(c), cone[p]});
        }
    }
    std::vector<Wall> walls;
    for (const auto& [key, inc] : facets) {
        if (inc.size() != 2) continue; // boundary facet of a surgery state
        Wall w;
        w.wall_rays = key;
        w.cone_a = inc[0].first;
        w.outer_a = inc[0].second;
        w.cone_b = inc[1].first;
        w.outer_b = inc[1].second;
        std::vector<Vec> vectors = {f.rays[w.outer_a], f.rays[w.outer_b]};
        for (int i : key) vectors.push_back(f.rays[i]);
        Vec rel = kernel_vector(vectors);
        if (rel[0] < 0) rel = scale(Int(-1), rel);
        if (rel[0] <= 0 || rel[1] <= 0)
            fail(ErrorKind::InternalInvariantViolation, "wall relation with nonpositive outer coefficients");
        w.relation.assign(f.rays.size(), Int(0));
        w.relation[w.outer_a] = rel[0];
        w.relation[w.outer_b] = rel[1];
        for (size_t i = 0; i < key.size(); ++i) w.relation[key[i]] += rel[2 + i];
        walls.push_back(w);
    }
    return walls;
}

Fan star_fan(const Fan& f, int ray) {
    if (ray < 0 || ray >= static_cast<int>(f.rays.size()))
        fail(ErrorKind::InvalidInput, "star_fan of a nonexistent ray");
    Mat P = quotient_projection(f.dim, {f.rays[ray]});
    std::vector<std::vector<Vec>> cone_gens;
    for (size_t c = 0; c < f.cones.size(); ++c) {
        const auto& cone = f.cones[c];
        if (std::find(cone.begin(), cone.end(), ray) == cone.end()) continue;
        std::vector<Vec> gens;
        for (int i : cone) {
            if (i == ray) continue;
            Vec img = mat_apply(P, f.rays[i]);
            if (is_zero(img))
                fail(ErrorKind::InternalInvariantViolation, "degenerate star fan projection");
            gens.push_back(primitive_vector(img));
        }
        cone_gens.push_back(gens);
    }
    return assemble_fan(f.dim - 1, cone_gens);
}

} // namespace sarkisov
