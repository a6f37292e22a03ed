#pragma once

// Brute-force oracles, independent of the engine's refinement machinery.
// They share only the value types: piecewise-linear evaluation is redone here
// with Cramer-style solves, and thresholds come from primitive-vector
// enumeration up to a height bound (default: 10x the largest coordinate in
// rays and points).

#include <functional>
#include <optional>
#include <vector>

#include "sarkisov/toric.hpp"

namespace oracles {

using namespace sarkisov;

inline Int det3(const std::vector<Vec>& cols) {
    size_t n = cols.size();
    if (n == 1) return cols[0][0];
    if (n == 2) return cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1];
    Int d = 0;
    for (size_t j = 0; j < 3; ++j) {
        std::vector<Vec> minor;
        for (size_t k = 0; k < 3; ++k) {
            if (k == j) continue;
            minor.push_back({cols[k][1], cols[k][2]});
        }
        Int m = det3(minor);
        d += (j % 2 ? -cols[j][0] : cols[j][0]) * m;
    }
    return d;
}

// Cramer solve of sum lambda_i g_i = x for full-rank square systems.
inline std::optional<std::vector<Rat>> cramer(const std::vector<Vec>& gens, const Vec& x) {
    Int d = det3(gens);
    if (d == 0) return std::nullopt;
    std::vector<Rat> lam;
    for (size_t i = 0; i < gens.size(); ++i) {
        std::vector<Vec> cols = gens;
        cols[i] = x;
        lam.push_back(Rat(det3(cols), d));
    }
    return lam;
}

struct PlValue {
    Rat psi;
    Rat mult;
};

// Locates w in some maximal cone and evaluates psi and the system
// multiplicity by interpolation; nullopt if outside every cone.
inline std::optional<PlValue> pl_oracle(const Fan& f, const MonomialLinearSystem& h, const Vec& w) {
    for (const auto& cone : f.cones) {
        std::vector<Vec> gens;
        for (int i : cone) gens.push_back(f.rays[i]);
        auto lam = cramer(gens, w);
        if (!lam) continue;
        bool inside = true;
        for (const Rat& l : *lam)
            if (l.is_negative()) inside = false;
        if (!inside) continue;
        PlValue v;
        v.psi = Rat(0);
        Rat phi(0);
        for (size_t i = 0; i < cone.size(); ++i) {
            v.psi += (*lam)[i];
            phi += (*lam)[i] * h.reference[cone[i]];
        }
        bool first = true;
        Int best = 0;
        for (const Vec& m : h.points) {
            Int val = dot(w, m);
            if (first || val < best) {
                best = val;
                first = false;
            }
        }
        v.mult = phi + Rat(best);
        return v;
    }
    return std::nullopt;
}

inline long default_height_bound(const Fan& f, const MonomialLinearSystem& h) {
    Int m = 1;
    for (const Vec& r : f.rays)
        for (const Int& c : r)
            if ((c < 0 ? Int(-c) : c) > m) m = c < 0 ? Int(-c) : c;
    for (const Vec& p : h.points)
        for (const Int& c : p)
            if ((c < 0 ? Int(-c) : c) > m) m = c < 0 ? Int(-c) : c;
    return 10 * static_cast<long>(m);
}

// Enumerates primitive vectors in the box [-bound, bound]^n.
inline void foreach_primitive(int dim, long bound, const std::function<void(const Vec&)>& fn) {
    Vec x(dim, Int(-bound));
    while (true) {
        if (!is_zero(x) && is_primitive(x)) fn(x);
        int i = 0;
        while (i < dim) {
            x[i] += 1;
            if (x[i] <= bound) break;
            x[i] = -bound;
            ++i;
        }
        if (i == dim) break;
    }
}

struct ThresholdOracle {
    Rat canonical;
    Rat lc;
};

// Thresholds by direct minimization over enumerated valuations. Exact for
// mobile systems whose minimizers sit inside the height bound; the engine's
// value is proven to be the global minimum, so engine == oracle certifies
// both.
inline ThresholdOracle thresholds(const Fan& f, const MonomialLinearSystem& h, long bound = 0) {
    if (bound <= 0) bound = default_height_bound(f, h);
    ThresholdOracle t{Rat::infinity(), Rat::infinity()};
    foreach_primitive(f.dim, bound, [&](const Vec& w) {
        auto v = pl_oracle(f, h, w);
        if (!v || !v->mult.is_positive()) return;
        if (f.ray_index(w) >= 0) {
            // Ray of X: only the lc (fixed-part) constraint applies directly;
            // canonical towers over the divisor approach psi/mult as well.
            t.lc = min(t.lc, v->psi / v->mult);
            t.canonical = min(t.canonical, v->psi / v->mult);
            return;
        }
        t.canonical = min(t.canonical, (v->psi - Rat(1)) / v->mult);
        t.lc = min(t.lc, v->psi / v->mult);
    });
    return t;
}

// All enumerated exceptional valuations with a = scale-weighted discrepancy
// exactly one (crepant), inside the height bound.
inline std::vector<Vec> crepant(const Fan& f, const MonomialLinearSystem& h, long bound = 0) {
    if (bound <= 0) bound = default_height_bound(f, h);
    std::vector<Vec> out;
    foreach_primitive(f.dim, bound, [&](const Vec& w) {
        if (f.ray_index(w) >= 0) return;
        auto v = pl_oracle(f, h, w);
        if (!v) return;
        if (v->psi - h.scale * v->mult == Rat(1)) out.push_back(w);
    });
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

inline std::vector<Vec> low_discrepancy(const Fan& f, const MonomialLinearSystem& h,
                                        const Rat& cutoff, long bound = 0) {
    if (bound <= 0) bound = default_height_bound(f, h);
    std::vector<Vec> out;
    foreach_primitive(f.dim, bound, [&](const Vec& w) {
        if (f.ray_index(w) >= 0) return;
        auto v = pl_oracle(f, h, w);
        if (!v) return;
        if (v->psi - h.scale * v->mult < cutoff) out.push_back(w);
    });
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

// Discrepancy of a convex combination of members at w: psi - sum b_i ord_i.
inline Rat member_combination_discrepancy(const Fan& f, const MonomialLinearSystem& h, const Vec& w,
                                          const std::vector<std::pair<size_t, Rat>>& combo) {
    auto v = pl_oracle(f, h, w);
    if (!v) fail(ErrorKind::InvalidInput, "oracle point outside the fan");
    Rat phi = v->mult - Rat(0); // recover phi_D(w) = mult - min <w, m>
    bool first = true;
    Int best = 0;
    for (const Vec& m : h.points) {
        Int val = dot(w, m);
        if (first || val < best) {
            best = val;
            first = false;
        }
    }
    phi = v->mult - Rat(best);
    Rat ord(0);
    for (const auto& [idx, b] : combo) ord += b * (Rat(dot(w, h.points[idx])) + phi);
    return v->psi - ord;
}

} // namespace oracles
