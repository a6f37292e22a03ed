#include "sarkisov/toric.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "sarkisov/errors.hpp"

namespace sarkisov {

ToricVariety make_variety(Fan f) {
    ToricVariety v;
    v.complete = fan_is_complete(f);
    v.q_factorial = fan_is_simplicial(f);
    v.smooth = fan_is_smooth(f);
    v.terminal = v.q_factorial ? fan_is_terminal(f) : false;
    v.fan = std::move(f);
    return v;
}

Rat pl_evaluate(const Fan& f, const InvariantDivisor& d, const Vec& w) {
    if (d.size() != f.rays.size())
        fail(ErrorKind::InvalidInput, "divisor coefficient count does not match ray count");
    auto loc = locate(f, w);
    if (!loc) fail(ErrorKind::InvalidInput, "PL evaluation outside the fan support");
    Rat s(0);
    const auto& cone = f.cones[loc->cone];
    for (size_t i = 0; i < cone.size(); ++i) s += loc->lambda[i] * d[cone[i]];
    return s;
}

Rat system_mult(const Fan& f, const MonomialLinearSystem& H, const Vec& w) {
    if (H.points.empty()) fail(ErrorKind::InvalidInput, "empty monomial system");
    Rat phi = pl_evaluate(f, H.reference, w);
    bool first = true;
    Int best = 0;
    for (const Vec& m : H.points) {
        Int v = dot(w, m);
        if (first || v < best) {
            best = v;
            first = false;
        }
    }
    return phi + Rat(best);
}

InvariantDivisor member_coefficients(const Fan& f, const MonomialLinearSystem& H, size_t member) {
    if (member >= H.points.size()) fail(ErrorKind::InvalidInput, "member index out of range");
    InvariantDivisor c(f.rays.size(), Rat(0));
    for (size_t i = 0; i < f.rays.size(); ++i)
        c[i] = H.reference[i] + Rat(dot(f.rays[i], H.points[member]));
    return c;
}

std::pair<MonomialLinearSystem, InvariantDivisor>
fixed_mobile_decomposition(const Fan& f, const MonomialLinearSystem& H) {
    if (H.points.empty()) fail(ErrorKind::InvalidInput, "empty monomial system");
    InvariantDivisor fixed(f.rays.size(), Rat(0));
    for (size_t i = 0; i < f.rays.size(); ++i) {
        bool first = true;
        Rat best(0);
        for (const Vec& m : H.points) {
            Rat v = H.reference[i] + Rat(dot(f.rays[i], m));
            if (first || v < best) {
                best = v;
                first = false;
            }
        }
        fixed[i] = best;
    }
    MonomialLinearSystem mobile = H;
    for (size_t i = 0; i < f.rays.size(); ++i)
        mobile.reference[i] = H.reference[i] - fixed[i];
    return {mobile, fixed};
}

bool system_is_mobile(const Fan& f, const MonomialLinearSystem& H) {
    auto [mobile, fixed] = fixed_mobile_decomposition(f, H);
    return std::all_of(fixed.begin(), fixed.end(), [](const Rat& r) { return r.is_zero(); });
}

bool systems_equivalent(const Fan& f, const MonomialLinearSystem& a, const MonomialLinearSystem& b) {
    if (a.scale != b.scale) return false;
    auto coeff_set = [&](const MonomialLinearSystem& H) {
        std::set<std::vector<std::string>> s;
        for (size_t k = 0; k < H.points.size(); ++k) {
            std::vector<std::string> row;
            for (const Rat& c : member_coefficients(f, H, k)) row.push_back(c.str());
            s.insert(row);
        }
        return s;
    };
    return coeff_set(a) == coeff_set(b);
}

MonomialLinearSystem complete_system_of_divisor(const Fan& f, const InvariantDivisor& d) {
    if (!fan_is_complete(f)) fail(ErrorKind::InvalidInput, "complete system needs a complete fan");
    for (const Rat& c : d)
        if (c.is_infinite() || c.denominator() != 1)
            fail(ErrorKind::InvalidInput, "complete system of a non-integral divisor");
    int n = f.dim;
    MonomialLinearSystem H;
    H.reference = d;
    H.scale = Rat(1);
    if (n == 0) {
        H.points = {Vec{}};
        return H;
    }
    // Vertices of {m : <v_i, m> + d_i >= 0}: solve n-subsets of tight rays.
    std::vector<std::vector<Rat>> vertices;
    std::vector<int> idx(n);
    std::function<void(int, int)> rec = [&](int start, int k) {
        if (k == n) {
            std::vector<Vec> rows;
            Vec rhs;
            for (int i = 0; i < n; ++i) rows.push_back(f.rays[idx[i]]);
            if (rank_of(rows) != n) return;
            // Solve <v_i, m> = -d_i exactly: scale to integers first.
            Int lcm = 1;
            for (int i = 0; i < n; ++i) {
                Int den = d[idx[i]].denominator();
                Int g = boost::multiprecision::gcd(lcm, den);
                lcm = lcm / g * den;
            }
            Vec b(n);
            for (int i = 0; i < n; ++i) {
                Rat scaled = d[idx[i]] * Rat(lcm);
                b[i] = -scaled.numerator();
            }
            // Columns of the transposed system.
            std::vector<Vec> cols(n, Vec(n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) cols[j][i] = rows[i][j] * lcm;
            auto sol = solve_rational(cols, b);
            if (!sol) return;
            vertices.push_back(*sol);
            return;
        }
        for (int i = start; i <= static_cast<int>(f.rays.size()) - (n - k); ++i) {
            idx[k] = i;
            rec(i + 1, k + 1);
        }
    };
    rec(0, 0);
    if (vertices.empty()) fail(ErrorKind::InvalidInput, "empty section polytope");
    auto rfloor = [](const Rat& q) {
        Int a = q.numerator(), b = q.denominator();
        return a >= 0 ? Int(a / b) : Int(-((-a + b - 1) / b));
    };
    Vec lo(n), hi(n);
    for (int j = 0; j < n; ++j) {
        bool first = true;
        Rat mn(0), mx(0);
        for (const auto& v : vertices) {
            if (first || v[j] < mn) mn = v[j];
            if (first || mx < v[j]) mx = v[j];
            first = false;
        }
        lo[j] = rfloor(mn);
        hi[j] = -rfloor(-mx);
    }
    Vec m = lo;
    while (true) {
        bool ok = true;
        for (size_t i = 0; i < f.rays.size() && ok; ++i)
            if (Rat(dot(f.rays[i], m)) + d[i] < Rat(0)) ok = false;
        if (ok) H.points.push_back(m);
        int j = 0;
        while (j < n) {
            m[j] += 1;
            if (m[j] <= hi[j]) break;
            m[j] = lo[j];
            ++j;
        }
        if (j == n) break;
    }
    if (H.points.empty()) fail(ErrorKind::InvalidInput, "section polytope has no lattice points");
    std::sort(H.points.begin(), H.points.end(), lex_less);
    return H;
}

ToricMoriFibreSpace make_mfs(Fan total, Fan base, Mat projection) {
    ToricMoriFibreSpace x;
    x.total = make_variety(std::move(total));
    x.base = make_variety(std::move(base));
    x.projection = std::move(projection);
    return x;
}

int class_group_rank(const Fan& f) { return static_cast<int>(f.rays.size()) - f.dim; }

Rat divisor_degree_on_class(const InvariantDivisor& d, const std::vector<Int>& cls) {
    Rat s(0);
    for (size_t i = 0; i < cls.size(); ++i)
        if (cls[i] != 0) s += Rat(cls[i]) * d[i];
    return s;
}

Rat anticanonical_degree_on_class(const std::vector<Int>& cls) {
    Int s = 0;
    for (const Int& c : cls) s += c;
    return Rat(s);
}

Rat system_degree_on_class(const MonomialLinearSystem& H, const std::vector<Int>& cls, bool scaled) {
    Rat d = divisor_degree_on_class(H.reference, cls);
    return scaled ? H.scale * d : d;
}

bool wall_is_vertical(const Fan& total, const Mat& projection, const Fan& base, const Wall& w) {
    if (base.dim == 0) return true;
    // Minimal base cone containing the image of the wall: the union of
    // supports of the located images inside one containing maximal cone.
    std::vector<Vec> images;
    for (int i : w.wall_rays) {
        Vec img = mat_apply(projection, total.rays[i]);
        if (!is_zero(img)) images.push_back(img);
    }
    if (images.empty()) return base.dim == 0;
    for (size_t c = 0; c < base.cones.size(); ++c) {
        std::vector<Vec> gens = base.cone_generators(static_cast<int>(c));
        std::set<int> support;
        bool all_in = true;
        for (const Vec& img : images) {
            auto lam = coordinates_in_simplicial(gens, img);
            if (!lam) {
                all_in = false;
                break;
            }
            bool nonneg = true;
            for (size_t k = 0; k < lam->size(); ++k) {
                if ((*lam)[k].is_negative()) nonneg = false;
                if ((*lam)[k].is_positive()) support.insert(base.cones[c][k]);
            }
            if (!nonneg) {
                all_in = false;
                break;
            }
        }
        if (all_in) return static_cast<int>(support.size()) == base.dim;
    }
    fail(ErrorKind::InvalidInput, "wall image not contained in any base cone");
}

Rat pseff_threshold_mu(const ToricMoriFibreSpace& x, const MonomialLinearSystem& H) {
    std::vector<Wall> walls = fan_walls(x.total.fan);
    bool found = false;
    Rat mu(0);
    for (const Wall& w : walls) {
        if (!wall_is_vertical(x.total.fan, x.projection, x.base.fan, w)) continue;
        Rat k = anticanonical_degree_on_class(w.relation);
        if (!k.is_positive())
            fail(ErrorKind::InvalidState, "-K not positive on a contracted wall curve");
        Rat h = system_degree_on_class(H, w.relation, true);
        if (!h.is_positive())
            fail(ErrorKind::NotRelativelyAmple, "system has nonpositive degree on a contracted curve");
        Rat ratio = h / k;
        if (!found) {
            mu = ratio;
            found = true;
        } else if (mu != ratio) {
            fail(ErrorKind::InternalInvariantViolation, "mu depends on the contracted curve choice");
        }
    }
    if (!found) fail(ErrorKind::InvalidState, "no contracted wall curve over the base");
    return mu;
}

std::vector<InvariantCheck> check_mfs(const ToricMoriFibreSpace& x) {
    std::vector<InvariantCheck> out;
    auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
        out.push_back({name, pass, detail});
    };
    std::string why;
    add("total_complete", x.total.complete);
    add("total_q_factorial", x.total.q_factorial);
    add("total_fan_valid", x.total.q_factorial ? fan_is_valid(x.total.fan, &why) : false, why);
    add("total_terminal", x.total.terminal);
    add("base_complete", x.base.complete);
    bool proj_shape = x.projection.rows == x.base.fan.dim && x.projection.cols == x.total.fan.dim;
    add("projection_shape", proj_shape);
    bool surj = proj_shape && is_surjective_lattice_map(x.projection);
    add("projection_surjective", surj);
    bool compatible = proj_shape && surj;
    if (compatible && x.base.fan.dim > 0) {
        for (size_t c = 0; c < x.total.fan.cones.size() && compatible; ++c) {
            std::vector<Vec> images;
            for (int i : x.total.fan.cones[c]) {
                Vec img = mat_apply(x.projection, x.total.fan.rays[i]);
                if (!is_zero(img)) images.push_back(img);
            }
            bool ok = false;
            for (size_t b = 0; b < x.base.fan.cones.size() && !ok; ++b) {
                std::vector<Vec> gens = x.base.fan.cone_generators(static_cast<int>(b));
                ok = std::all_of(images.begin(), images.end(), [&](const Vec& img) {
                    auto lam = coordinates_in_simplicial(gens, img);
                    return lam && std::all_of(lam->begin(), lam->end(),
                                              [](const Rat& r) { return !r.is_negative(); });
                });
            }
            compatible = ok;
        }
    }
    add("projection_fan_compatible", compatible);
    add("fibre_dimension_positive", x.total.fan.dim > x.base.fan.dim);
    bool rel_rank = class_group_rank(x.total.fan) - class_group_rank(x.base.fan) == 1;
    add("relative_picard_rank_one", rel_rank,
        rel_rank ? "" : "rank Cl(X) - rank Cl(S) != 1");
    bool ample = true;
    std::string ample_detail;
    if (x.total.q_factorial && x.total.complete && compatible) {
        bool any = false;
        try {
            for (const Wall& w : fan_walls(x.total.fan)) {
                if (!wall_is_vertical(x.total.fan, x.projection, x.base.fan, w)) continue;
                any = true;
                if (!anticanonical_degree_on_class(w.relation).is_positive()) {
                    ample = false;
                    ample_detail = "-K nonpositive on a contracted wall curve";
                }
            }
        } catch (const EngineError& e) {
            ample = false;
            ample_detail = e.what();
        }
        if (!any) {
            ample = false;
            ample_detail = "no contracted wall curve";
        }
    } else {
        ample = false;
        ample_detail = "prerequisite checks failed";
    }
    add("anticanonical_relatively_ample", ample, ample_detail);
    return out;
}

void require_valid_mfs(const ToricMoriFibreSpace& x) {
    for (const InvariantCheck& c : check_mfs(x))
        if (!c.pass)
            fail(ErrorKind::InvalidInput, "Mori fibre space condition failed: " + c.name +
                                              (c.detail.empty() ? "" : " (" + c.detail + ")"));
}

std::pair<Fan, Mat> quotient_fibration(const Fan& total, const std::vector<Vec>& vertical) {
    Mat P = quotient_projection(total.dim, vertical);
    int bd = P.rows;
    if (bd == total.dim)
        fail(ErrorKind::InternalInvariantViolation, "fibration with zero-dimensional fibres");
    if (bd == 0) return {make_fan(0, {}, {{}}), P};

    std::vector<std::vector<Vec>> cone_gens;
    for (size_t c = 0; c < total.cones.size(); ++c) {
        std::vector<Vec> imgs;
        for (int i : total.cones[c]) {
            Vec img = mat_apply(P, total.rays[i]);
            if (!is_zero(img)) imgs.push_back(primitive_vector(img));
        }
        if (imgs.empty())
            fail(ErrorKind::InternalInvariantViolation, "maximal cone collapses under fibration");
        if (rank_of(imgs) < bd) continue; // lower-dimensional image: a face of a neighbour
        if (bd == 1) {
            bool pos = false, neg = false;
            for (const Vec& v : imgs) (v[0] > 0 ? pos : neg) = true;
            if (pos && neg)
                fail(ErrorKind::InternalInvariantViolation, "image cone is not strongly convex");
            cone_gens.push_back({imgs[0]});
            continue;
        }
        // bd >= 2: reduce to extreme generators; images must stay pointed.
        bool found = false;
        for (size_t i = 0; i < imgs.size() && !found; ++i) {
            for (size_t j = 0; j < imgs.size() && !found; ++j) {
                if (i == j) continue;
                std::vector<Vec> pair = {imgs[i], imgs[j]};
                if (rank_of(pair) < bd) continue;
                bool all = true;
                for (const Vec& v : imgs) {
                    auto lam = coordinates_in_simplicial(pair, v);
                    if (!lam || lam->at(0).is_negative() || lam->at(1).is_negative()) {
                        all = false;
                        break;
                    }
                }
                if (all) {
                    cone_gens.push_back(pair);
                    found = true;
                }
            }
        }
        if (!found)
            fail(ErrorKind::UnsupportedInput, "non-simplicial fibration image cone");
    }
    std::map<Vec, int> seen;
    std::vector<Vec> rays;
    std::vector<std::vector<int>> cones;
    for (const auto& g : cone_gens) {
        std::vector<int> c;
        for (const Vec& v : g) {
            auto it = seen.find(v);
            if (it == seen.end()) {
                it = seen.emplace(v, static_cast<int>(rays.size())).first;
                rays.push_back(v);
            }
            c.push_back(it->second);
        }
        cones.push_back(c);
    }
    Fan base = make_fan(bd, rays, cones);
    if (!fan_is_complete(base))
        fail(ErrorKind::InternalInvariantViolation, "fibration image is not a complete fan");
    return {base, P};
}

InvariantDivisor pullback_divisor(const ToricMoriFibreSpace& x, const InvariantDivisor& a_on_base) {
    InvariantDivisor d(x.total.fan.rays.size(), Rat(0));
    if (x.base.fan.dim == 0) return d;
    for (size_t i = 0; i < x.total.fan.rays.size(); ++i) {
        Vec img = mat_apply(x.projection, x.total.fan.rays[i]);
        if (is_zero(img)) continue;
        d[i] = pl_evaluate(x.base.fan, a_on_base, img);
    }
    return d;
}

InvariantDivisor boundary_sum_divisor(const Fan& f) {
    return InvariantDivisor(f.rays.size(), Rat(1));
}

bool divisor_is_ample(const Fan& f, const InvariantDivisor& d) {
    if (f.dim == 0) return true;
    for (const Wall& w : fan_walls(f))
        if (!divisor_degree_on_class(d, w.relation).is_positive()) return false;
    return true;
}

} // namespace sarkisov
