#include "sarkisov/discrepancy.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sarkisov/errors.hpp"

namespace sarkisov {

ToricValuation make_valuation(const Fan& f, const Vec& w) {
    if (is_zero(w) || !is_primitive(w))
        fail(ErrorKind::InvalidInput, "valuation vector must be primitive and nonzero");
    auto mc = minimal_cone_containing(f, w);
    if (!mc) fail(ErrorKind::InvalidInput, "valuation vector outside the fan support");
    ToricValuation v;
    v.vector = w;
    v.host_cone = *mc;
    v.exceptional = f.ray_index(w) < 0;
    return v;
}

Rat log_discrepancy(const ToricVariety& X, const MonomialLinearSystem& H, const Vec& w) {
    if (is_zero(w)) fail(ErrorKind::InvalidInput, "log discrepancy at the zero vector");
    Rat p = psi(X.fan, w);
    if (H.scale.is_zero()) return p;
    return p - H.scale * system_mult(X.fan, H, w);
}

DiscrepancyData build_discrepancy_data(const Fan& x, const MonomialLinearSystem& H) {
    if (!fan_is_complete(x)) fail(ErrorKind::InvalidInput, "discrepancy data needs a complete fan");
    if (!fan_is_simplicial(x)) fail(ErrorKind::UnsupportedInput, "discrepancy data needs a Q-factorial fan");
    if (H.points.empty()) fail(ErrorKind::InvalidInput, "empty monomial system");

    DiscrepancyData d;
    if (x.dim <= 1) {
        d.refined = x;
    } else {
        if (x.dim > 3)
            fail(ErrorKind::UnsupportedInput, "discrepancy refinement beyond dimension 3");
        // Refine each maximal cone by the regions where a single monomial
        // attains the minimum, then triangulate and smooth.
        std::vector<std::vector<Vec>> pieces;
        for (size_t c = 0; c < x.cones.size(); ++c) {
            std::vector<Vec> gens = x.cone_generators(static_cast<int>(c));
            std::vector<Vec> cone_rows = facet_normals(gens);
            for (size_t k = 0; k < H.points.size(); ++k) {
                std::vector<Vec> rows = cone_rows;
                for (size_t l = 0; l < H.points.size(); ++l) {
                    if (l == k) continue;
                    rows.push_back(sub(H.points[l], H.points[k]));
                }
                std::vector<Vec> rays = extreme_rays_from_inequalities(rows, x.dim);
                if (rays.empty() || rank_of(rays) != x.dim) continue;
                for (const auto& simp : triangulate_cone(rays)) pieces.push_back(simp);
            }
        }
        std::map<Vec, int> seen;
        std::vector<Vec> rays;
        std::vector<std::vector<int>> cones;
        for (const auto& g : pieces) {
            std::vector<int> cone;
            for (const Vec& v : g) {
                Vec p = primitive_vector(v);
                auto it = seen.find(p);
                if (it == seen.end()) {
                    it = seen.emplace(p, static_cast<int>(rays.size())).first;
                    rays.push_back(p);
                }
                cone.push_back(it->second);
            }
            cones.push_back(cone);
        }
        d.refined = smooth_subdivision(make_fan(x.dim, rays, cones));
    }
    d.original.resize(d.refined.rays.size());
    d.psi_ray.resize(d.refined.rays.size());
    d.mult_ray.resize(d.refined.rays.size());
    for (size_t i = 0; i < d.refined.rays.size(); ++i) {
        const Vec& u = d.refined.rays[i];
        d.original[i] = x.ray_index(u) >= 0;
        d.psi_ray[i] = psi(x, u);
        d.mult_ray[i] = system_mult(x, H, u);
    }
    return d;
}

namespace {

// Threshold families per refined maximal cone; see the derivation in the
// header. `canonical` selects (psi-1)/mult singles and original-ray pairs;
// otherwise the lc families psi/mult.
Rat threshold_from_data(const DiscrepancyData& d, bool canonical) {
    Rat best = Rat::infinity();
    for (size_t c = 0; c < d.refined.cones.size(); ++c) {
        const auto& cone = d.refined.cones[c];
        for (size_t a = 0; a < cone.size(); ++a) {
            int i = cone[a];
            if (d.mult_ray[i].is_positive()) {
                Rat num = canonical && !d.original[i] ? d.psi_ray[i] - Rat(1) : d.psi_ray[i];
                best = min(best, num / d.mult_ray[i]);
            }
            if (!canonical) continue;
            if (!d.original[i]) continue;
            for (size_t b = a + 1; b < cone.size(); ++b) {
                int j = cone[b];
                if (!d.original[j]) continue;
                Rat m = d.mult_ray[i] + d.mult_ray[j];
                if (!m.is_positive()) continue;
                best = min(best, (d.psi_ray[i] + d.psi_ray[j] - Rat(1)) / m);
            }
        }
    }
    return best;
}

} // namespace

Rat canonical_threshold(const ToricVariety& X, const MonomialLinearSystem& H) {
    if (!X.terminal) fail(ErrorKind::UnsupportedInput, "canonical threshold requires a terminal variety");
    DiscrepancyData d = build_discrepancy_data(X.fan, H);
    return threshold_from_data(d, true);
}

Rat lc_threshold(const ToricVariety& X, const MonomialLinearSystem& H) {
    if (!X.terminal) fail(ErrorKind::UnsupportedInput, "lc threshold requires a terminal variety");
    DiscrepancyData d = build_discrepancy_data(X.fan, H);
    return threshold_from_data(d, false);
}

Rat local_canonical_threshold(const ToricVariety& X, const MonomialLinearSystem& H,
                              const std::vector<int>& stratum) {
    // Stratum must be a cone of the fan (a face of some maximal cone).
    std::vector<int> s = stratum;
    std::sort(s.begin(), s.end());
    bool is_face = s.empty();
    for (const auto& cone : X.fan.cones)
        if (std::includes(cone.begin(), cone.end(), s.begin(), s.end())) is_face = true;
    if (!is_face) fail(ErrorKind::InvalidInput, "stratum is not a cone of the fan");
    if (s.empty()) return Rat::infinity(); // no exceptional valuation centered at the generic point

    std::vector<Vec> tau_gens;
    for (int i : s) tau_gens.push_back(X.fan.rays[i]);
    auto in_tau = [&](const Vec& v) { return cone_contains(tau_gens, v); };

    DiscrepancyData d = build_discrepancy_data(X.fan, H);
    Rat best = Rat::infinity();
    for (size_t c = 0; c < d.refined.cones.size(); ++c) {
        const auto& cone = d.refined.cones[c];
        for (size_t a = 0; a < cone.size(); ++a) {
            int i = cone[a];
            if (!d.mult_ray[i].is_positive()) continue;
            const Vec& u = d.refined.rays[i];
            if (!d.original[i]) {
                if (in_tau(u)) best = min(best, (d.psi_ray[i] - Rat(1)) / d.mult_ray[i]);
                continue;
            }
            // Original ray: the asymptotic tower bound applies when deeper
            // centers inside the divisor can still contain the stratum.
            if (static_cast<int>(s.size()) >= 2 &&
                std::find(s.begin(), s.end(), X.fan.ray_index(u)) != s.end())
                best = min(best, d.psi_ray[i] / d.mult_ray[i]);
        }
        for (size_t a = 0; a < cone.size(); ++a) {
            int i = cone[a];
            if (!d.original[i]) continue;
            for (size_t b = a + 1; b < cone.size(); ++b) {
                int j = cone[b];
                if (!d.original[j]) continue;
                Rat m = d.mult_ray[i] + d.mult_ray[j];
                if (!m.is_positive()) continue;
                if (!in_tau(d.refined.rays[i]) || !in_tau(d.refined.rays[j])) continue;
                best = min(best, (d.psi_ray[i] + d.psi_ray[j] - Rat(1)) / m);
            }
        }
    }
    return best;
}

namespace {

// Per-ray scaled log discrepancies on the refined fan.
std::vector<Rat> scaled_values(const DiscrepancyData& d, const Rat& scale) {
    std::vector<Rat> c(d.refined.rays.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = d.psi_ray[i] - scale * d.mult_ray[i];
    return c;
}

} // namespace

bool is_pair_canonical(const Fan& x, const MonomialLinearSystem& H) {
    DiscrepancyData d = build_discrepancy_data(x, H);
    std::vector<Rat> cv = scaled_values(d, H.scale);
    for (size_t c = 0; c < d.refined.cones.size(); ++c) {
        const auto& cone = d.refined.cones[c];
        for (size_t a = 0; a < cone.size(); ++a) {
            int i = cone[a];
            if (d.original[i]) {
                if (cv[i].is_negative()) return false;
                for (size_t b = a + 1; b < cone.size(); ++b) {
                    int j = cone[b];
                    if (d.original[j] && cv[i] + cv[j] < Rat(1)) return false;
                }
            } else if (cv[i] < Rat(1)) {
                return false;
            }
        }
    }
    return true;
}

bool is_pair_klt(const Fan& x, const MonomialLinearSystem& H) {
    DiscrepancyData d = build_discrepancy_data(x, H);
    std::vector<Rat> cv = scaled_values(d, H.scale);
    for (size_t i = 0; i < cv.size(); ++i)
        if (!cv[i].is_positive()) return false;
    return true;
}

bool is_pair_terminal(const Fan& x, const MonomialLinearSystem& H) {
    DiscrepancyData d = build_discrepancy_data(x, H);
    std::vector<Rat> cv = scaled_values(d, H.scale);
    for (size_t c = 0; c < d.refined.cones.size(); ++c) {
        const auto& cone = d.refined.cones[c];
        for (size_t a = 0; a < cone.size(); ++a) {
            int i = cone[a];
            if (d.original[i]) {
                if (cv[i].is_negative()) return false;
                for (size_t b = a + 1; b < cone.size(); ++b) {
                    int j = cone[b];
                    if (d.original[j] && cv[i] + cv[j] <= Rat(1)) return false;
                }
            } else if (cv[i] <= Rat(1)) {
                return false;
            }
        }
    }
    return true;
}

namespace {

// Enumerates exceptional primitive lattice points with scaled discrepancy
// related to `bound` per the comparison mode, collecting them lex-sorted.
// mode: 0 = equal, 1 = strictly below, 2 = at most.
std::vector<ToricValuation> enumerate_by_discrepancy(const ToricVariety& X,
                                                     const MonomialLinearSystem& H,
                                                     const Rat& bound, int mode,
                                                     std::string* unbounded_diag) {
    DiscrepancyData d = build_discrepancy_data(X.fan, H);
    std::vector<Rat> cv = scaled_values(d, H.scale);
    std::set<Vec> found;
    for (size_t c = 0; c < d.refined.cones.size(); ++c) {
        const auto& cone = d.refined.cones[c];
        int k = static_cast<int>(cone.size());
        for (int i : cone) {
            if (!cv[i].is_positive()) {
                if (unbounded_diag) {
                    *unbounded_diag = "level set unbounded along ray " + vec_str(d.refined.rays[i]);
                    return {};
                }
                fail(ErrorKind::InvalidState,
                     "unbounded discrepancy region along ray " + vec_str(d.refined.rays[i]));
            }
        }
        // lambda_i <= bound / cv_i; odometer over the integer box.
        std::vector<Int> hi(k);
        for (int a = 0; a < k; ++a) {
            Rat q = bound / cv[cone[a]];
            hi[a] = q.numerator() >= 0 ? Int(q.numerator() / q.denominator()) : Int(0);
        }
        std::vector<Int> lam(k, Int(0));
        while (true) {
            Rat a_val(0);
            Vec w(X.fan.dim, Int(0));
            bool any = false;
            for (int a = 0; a < k; ++a) {
                if (lam[a] == 0) continue;
                any = true;
                a_val += Rat(lam[a]) * cv[cone[a]];
                w = add(w, scale(lam[a], d.refined.rays[cone[a]]));
            }
            bool take = false;
            if (any) {
                if (mode == 0) take = (a_val == bound);
                if (mode == 1) take = (a_val < bound);
                if (mode == 2) take = (a_val <= bound);
            }
            if (take && !is_zero(w) && is_primitive(w) && X.fan.ray_index(w) < 0) found.insert(w);
            int p = 0;
            while (p < k) {
                lam[p] += 1;
                if (lam[p] <= hi[p]) break;
                lam[p] = 0;
                ++p;
            }
            if (p == k) break;
        }
    }
    std::vector<ToricValuation> out;
    for (const Vec& w : found) out.push_back(make_valuation(X.fan, w));
    return out;
}

} // namespace

CrepantEnumeration crepant_divisors(const ToricVariety& X, const MonomialLinearSystem& H) {
    if (!is_pair_canonical(X.fan, H))
        fail(ErrorKind::InvalidState, "crepant enumeration on a non-canonical pair");
    CrepantEnumeration out;
    std::string diag;
    out.valuations = enumerate_by_discrepancy(X, H, Rat(1), 0, &diag);
    if (!diag.empty()) {
        out.finite = false;
        out.diagnostic = diag;
        out.valuations.clear();
    }
    return out;
}

std::vector<ToricValuation> low_discrepancy_valuations(const ToricVariety& X,
                                                       const MonomialLinearSystem& H,
                                                       const Rat& bound) {
    if (bound > Rat(1)) fail(ErrorKind::InvalidInput, "low-discrepancy bound must be <= 1");
    if (!is_pair_klt(X.fan, H))
        fail(ErrorKind::InvalidState, "low-discrepancy enumeration region is unbounded (pair not klt)");
    return enumerate_by_discrepancy(X, H, bound, 1, nullptr);
}

std::vector<ToricValuation> low_discrepancy_valuations_closed(const ToricVariety& X,
                                                              const MonomialLinearSystem& H,
                                                              const Rat& bound) {
    if (bound > Rat(1)) fail(ErrorKind::InvalidInput, "low-discrepancy bound must be <= 1");
    if (!is_pair_klt(X.fan, H))
        fail(ErrorKind::InvalidState, "low-discrepancy enumeration region is unbounded (pair not klt)");
    return enumerate_by_discrepancy(X, H, bound, 2, nullptr);
}

} // namespace sarkisov
