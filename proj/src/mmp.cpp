#include "sarkisov/mmp.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "sarkisov/errors.hpp"

namespace sarkisov {

const char* contraction_kind_name(ContractionKind k) {
    switch (k) {
        case ContractionKind::Fibering: return "fibering";
        case ContractionKind::Divisorial: return "divisorial";
        case ContractionKind::Small: return "flip";
    }
    return "?";
}

Rat pair_degree_on_class(const MonomialLinearSystem& sys, const std::vector<Int>& cls) {
    return sys.scale * divisor_degree_on_class(sys.reference, cls) - anticanonical_degree_on_class(cls);
}

RelativeCone relative_mori_cone(const Fan& total, const Mat& projection, const Fan& base) {
    if (!fan_is_complete(total) || !fan_is_simplicial(total))
        fail(ErrorKind::InvalidInput, "relative Mori cone needs a complete Q-factorial fan");
    RelativeCone rc;
    std::vector<Wall> walls = fan_walls(total);
    for (Wall& w : walls)
        if (wall_is_vertical(total, projection, base, w)) rc.walls.push_back(std::move(w));
    if (rc.walls.empty()) return rc;

    // Distinct classes; relations are primitive with positive outer parts, so
    // proportional relations are equal.
    std::map<std::vector<Int>, std::vector<int>> classes;
    for (size_t i = 0; i < rc.walls.size(); ++i)
        classes[rc.walls[i].relation].push_back(static_cast<int>(i));

    std::vector<Vec> class_vecs;
    for (const auto& [cls, ids] : classes) class_vecs.push_back(cls);
    rc.rank = rank_of(class_vecs);

    if (rc.rank == 1) {
        if (classes.size() != 1)
            fail(ErrorKind::InternalInvariantViolation, "rank-1 relative cone with several classes");
        ExtremalRay r;
        r.cls = class_vecs[0];
        r.wall_ids = classes.begin()->second;
        rc.extremal.push_back(std::move(r));
        return rc;
    }

    // Coordinates in a basis of the class span, then extreme rays of the
    // spanned cone via its facet description.
    std::vector<Vec> basis;
    for (const Vec& v : class_vecs) {
        std::vector<Vec> trial = basis;
        trial.push_back(v);
        if (rank_of(trial) > static_cast<int>(basis.size())) basis.push_back(v);
        if (static_cast<int>(basis.size()) == rc.rank) break;
    }
    std::vector<Vec> coords;
    for (const Vec& v : class_vecs) {
        auto sol = solve_rational(basis, v);
        if (!sol) fail(ErrorKind::InternalInvariantViolation, "class outside its own span");
        Int lcm = 1;
        for (const Rat& r : *sol) {
            Int den = r.denominator();
            Int g = boost::multiprecision::gcd(lcm, den);
            lcm = lcm / g * den;
        }
        Vec c(rc.rank);
        for (int i = 0; i < rc.rank; ++i) c[i] = ((*sol)[i] * Rat(lcm)).numerator();
        coords.push_back(c);
    }
    std::vector<Vec> normals = facet_normals(coords);
    std::vector<Vec> extreme_dirs = extreme_rays_from_inequalities(normals, rc.rank);
    for (const Vec& dir : extreme_dirs) {
        bool matched = false;
        for (size_t k = 0; k < coords.size(); ++k) {
            // dir parallel with positive factor to coords[k]?
            if (primitive_vector(coords[k]) != dir) continue;
            ExtremalRay r;
            r.cls = class_vecs[k];
            r.wall_ids = classes[class_vecs[k]];
            rc.extremal.push_back(std::move(r));
            matched = true;
            break;
        }
        if (!matched)
            fail(ErrorKind::InternalInvariantViolation,
                 "extreme direction of the relative cone is not a wall class");
    }
    std::sort(rc.extremal.begin(), rc.extremal.end(),
              [](const ExtremalRay& a, const ExtremalRay& b) { return lex_less(a.cls, b.cls); });
    return rc;
}

ContractionKind classify_contraction(const Fan&, const ExtremalRay& ray) {
    int negatives = 0;
    for (const Int& c : ray.cls)
        if (c < 0) ++negatives;
    if (negatives == 0) return ContractionKind::Fibering;
    if (negatives == 1) return ContractionKind::Divisorial;
    return ContractionKind::Small;
}

std::vector<Vec> fibre_span_of_class(const Fan& f, const ExtremalRay& ray,
                                     const std::vector<Wall>& walls) {
    std::set<Vec> span;
    for (int id : ray.wall_ids) {
        const Wall& w = walls[id];
        for (size_t v = 0; v < w.relation.size(); ++v) {
            if (w.relation[v] < 0)
                fail(ErrorKind::InvalidState, "fibre span of a non-fibre-type class");
            if (w.relation[v] != 0) span.insert(f.rays[v]);
        }
    }
    return {span.begin(), span.end()};
}

DivisorialResult execute_divisorial(const Fan& f, const ExtremalRay& ray,
                                    const std::vector<Wall>& walls) {
    int contracted = -1;
    for (size_t v = 0; v < ray.cls.size(); ++v)
        if (ray.cls[v] < 0) {
            if (contracted >= 0)
                fail(ErrorKind::InvalidState, "divisorial execution on a non-divisorial class");
            contracted = static_cast<int>(v);
        }
    if (contracted < 0) fail(ErrorKind::InvalidState, "divisorial execution without contracted ray");

    // Star cones of the contracted ray, merged across the contracted walls.
    std::vector<int> star;
    for (size_t c = 0; c < f.cones.size(); ++c)
        if (std::find(f.cones[c].begin(), f.cones[c].end(), contracted) != f.cones[c].end())
            star.push_back(static_cast<int>(c));
    std::map<int, int> comp;
    for (int c : star) comp[c] = c;
    std::function<int(int)> find = [&](int c) { return comp[c] == c ? c : comp[c] = find(comp[c]); };
    for (int id : ray.wall_ids) {
        const Wall& w = walls[id];
        if (std::find(w.wall_rays.begin(), w.wall_rays.end(), contracted) == w.wall_rays.end())
            fail(ErrorKind::InternalInvariantViolation, "contracted wall avoids the contracted ray");
        if (!comp.count(w.cone_a) || !comp.count(w.cone_b))
            fail(ErrorKind::InternalInvariantViolation, "contracted wall outside the star");
        comp[find(w.cone_a)] = find(w.cone_b);
    }
    std::map<int, std::set<int>> merged;
    for (int c : star) {
        auto& rays = merged[find(c)];
        for (int i : f.cones[c])
            if (i != contracted) rays.insert(i);
    }
    std::vector<std::vector<int>> new_cones;
    for (size_t c = 0; c < f.cones.size(); ++c)
        if (std::find(star.begin(), star.end(), static_cast<int>(c)) == star.end())
            new_cones.push_back(f.cones[c]);
    for (const auto& [root, rays] : merged) {
        if (static_cast<int>(rays.size()) != f.dim)
            fail(ErrorKind::UnsupportedInput,
                 "divisorial contraction does not produce a simplicial cone");
        new_cones.emplace_back(rays.begin(), rays.end());
    }

    std::vector<Vec> new_rays;
    std::vector<int> old_of_new;
    for (size_t i = 0; i < f.rays.size(); ++i) {
        if (static_cast<int>(i) == contracted) continue;
        new_rays.push_back(f.rays[i]);
        old_of_new.push_back(static_cast<int>(i));
    }
    std::map<int, int> remap;
    for (size_t i = 0; i < old_of_new.size(); ++i) remap[old_of_new[i]] = static_cast<int>(i);
    for (auto& cone : new_cones)
        for (int& i : cone) i = remap.at(i);

    DivisorialResult out;
    out.fan = make_fan(f.dim, new_rays, new_cones);
    out.contracted_ray = contracted;
    out.ray_map.assign(f.rays.size(), -1);
    for (size_t i = 0; i < f.rays.size(); ++i)
        if (static_cast<int>(i) != contracted) out.ray_map[i] = out.fan.ray_index(f.rays[i]);
    return out;
}

Fan execute_flip(const Fan& f, const ExtremalRay& ray, const std::vector<Wall>& walls) {
    if (f.dim == 2) fail(ErrorKind::ImpossibleInDim2, "no flips exist on surfaces");
    if (f.dim != 3) fail(ErrorKind::UnsupportedInput, "flips beyond dimension 3");
    std::set<std::vector<int>> removed;
    std::set<std::vector<int>> added;
    std::set<int> touched;
    for (int id : ray.wall_ids) {
        const Wall& w = walls[id];
        std::vector<int> pos, neg;
        for (size_t v = 0; v < w.relation.size(); ++v) {
            if (w.relation[v] > 0) pos.push_back(static_cast<int>(v));
            if (w.relation[v] < 0) neg.push_back(static_cast<int>(v));
        }
        if (neg.size() != 2 || pos.size() != 2)
            fail(ErrorKind::UnsupportedInput, "flip circuit is not a 4-ray circuit");
        for (int v : pos)
            if (touched.count(v)) fail(ErrorKind::UnsupportedInput, "overlapping flip circuits");
        for (int v : neg)
            if (touched.count(v)) fail(ErrorKind::UnsupportedInput, "overlapping flip circuits");
        for (int v : pos) touched.insert(v);
        for (int v : neg) touched.insert(v);
        // Current cones: {neg, p} for p in pos. New cones: {pos, q} for q in neg.
        for (int p : pos) {
            std::vector<int> c = {neg[0], neg[1], p};
            std::sort(c.begin(), c.end());
            removed.insert(c);
        }
        for (int q : neg) {
            std::vector<int> c = {pos[0], pos[1], q};
            std::sort(c.begin(), c.end());
            added.insert(c);
        }
    }
    std::vector<std::vector<int>> new_cones;
    int hit = 0;
    for (const auto& cone : f.cones) {
        if (removed.count(cone)) {
            ++hit;
            continue;
        }
        new_cones.push_back(cone);
    }
    if (hit != static_cast<int>(removed.size()))
        fail(ErrorKind::UnsupportedInput, "flip circuit cones not present in the fan");
    for (const auto& cone : added) new_cones.push_back(cone);
    Fan out = make_fan(f.dim, f.rays, new_cones);
    if (out.rays != f.rays)
        fail(ErrorKind::InternalInvariantViolation, "flip changed the ray set");
    return out;
}

namespace {

std::string wall_key(const Fan& f, const Wall& w) {
    std::string k;
    for (int i : w.wall_rays) k += vec_str(f.rays[i]) + ";";
    return k;
}

std::string ray_selection_key(const Fan& f, const RelativeCone& rc, const ExtremalRay& r) {
    std::string best;
    for (int id : r.wall_ids) {
        std::string k = wall_key(f, rc.walls[id]);
        if (best.empty() || k < best) best = k;
    }
    return best;
}

} // namespace

MmpRun run_relative_mmp(MmpModel start, const Fan& zfan, const Mat& zproj, const MmpOptions& opt) {
    MmpRun run;
    run.model = std::move(start);
    if (!is_pair_canonical(run.model.fan, run.model.sys))
        fail(ErrorKind::InvalidState, "relative MMP requires a canonical starting pair");

    for (int step = 0;; ++step) {
        if (step >= opt.step_cap)
            fail(ErrorKind::StepCapExceeded,
                 "relative MMP exceeded the step cap of " + std::to_string(opt.step_cap));
        RelativeCone rc = relative_mori_cone(run.model.fan, zproj, zfan);
        std::vector<const ExtremalRay*> negatives;
        for (const ExtremalRay& r : rc.extremal)
            if (pair_degree_on_class(run.model.sys, r.cls).is_negative()) negatives.push_back(&r);

        const ExtremalRay* chosen = nullptr;
        if (step == 0 && opt.first_class) {
            for (const ExtremalRay& r : rc.extremal)
                if (r.cls == *opt.first_class) chosen = &r;
            if (!chosen) fail(ErrorKind::InvalidInput, "forced first ray is not extremal");
            if (!pair_degree_on_class(run.model.sys, chosen->cls).is_negative())
                fail(ErrorKind::NoOpSubdivision,
                     "forced first ray is not negative; the game must use the other ray");
        } else if (negatives.empty()) {
            return run; // relatively minimal
        } else if (opt.scaling) {
            Rat best_ratio(0);
            std::string best_key;
            for (const ExtremalRay* r : negatives) {
                Rat denom = divisor_degree_on_class(*opt.scaling, r->cls);
                if (!denom.is_positive())
                    fail(ErrorKind::InvalidInput, "scaling divisor nonpositive on a negative ray");
                Rat ratio = (Rat(0) - pair_degree_on_class(run.model.sys, r->cls)) / denom;
                std::string key = ray_selection_key(run.model.fan, rc, *r);
                if (!chosen || ratio > best_ratio || (ratio == best_ratio && key < best_key)) {
                    chosen = r;
                    best_ratio = ratio;
                    best_key = key;
                }
            }
        } else {
            std::string best_key;
            for (const ExtremalRay* r : negatives) {
                std::string key = ray_selection_key(run.model.fan, rc, *r);
                if (!chosen || key < best_key) {
                    chosen = r;
                    best_key = key;
                }
            }
        }

        ContractionKind kind = classify_contraction(run.model.fan, *chosen);
        MmpStep rec;
        rec.kind = kind;
        rec.ray_class = chosen->cls;

        if (kind == ContractionKind::Fibering) {
            std::vector<Vec> span = fibre_span_of_class(run.model.fan, *chosen, rc.walls);
            auto [base, proj] = quotient_fibration(run.model.fan, span);
            rec.fan_after = run.model.fan;
            rec.base_after = base;
            rec.projection_after = proj;
            rec.canonical_after = true; // fibering does not change the pair
            run.steps.push_back(rec);
            run.ended_with_fibering = true;
            run.fibration_base = base;
            run.fibration_projection = proj;
            return run;
        }

        size_t rays_before = run.model.fan.rays.size();
        if (kind == ContractionKind::Divisorial) {
            DivisorialResult res = execute_divisorial(run.model.fan, *chosen, rc.walls);
            MonomialLinearSystem sys;
            sys.points = run.model.sys.points;
            sys.scale = run.model.sys.scale;
            sys.reference.assign(res.fan.rays.size(), Rat(0));
            for (size_t i = 0; i < run.model.sys.reference.size(); ++i)
                if (res.ray_map[i] >= 0) sys.reference[res.ray_map[i]] = run.model.sys.reference[i];
            run.model.fan = res.fan;
            run.model.sys = sys;
            run.divisorial_happened = true;
            if (run.model.fan.rays.size() + 1 != rays_before)
                fail(ErrorKind::InternalInvariantViolation, "divisorial step must drop one ray");
        } else {
            run.model.fan = execute_flip(run.model.fan, *chosen, rc.walls);
            if (run.model.fan.rays.size() != rays_before)
                fail(ErrorKind::InternalInvariantViolation, "flip must preserve the ray count");
        }
        rec.canonical_after = is_pair_canonical(run.model.fan, run.model.sys);
        if (!rec.canonical_after)
            fail(ErrorKind::InternalInvariantViolation,
                 "pair stopped being canonical after an MMP step");
        rec.fan_after = run.model.fan;
        run.steps.push_back(rec);

        if (kind == ContractionKind::Divisorial && opt.stop_at_relative_rank_one) {
            RelativeCone after = relative_mori_cone(run.model.fan, zproj, zfan);
            if (after.rank <= 1) return run;
        }
    }
}

MmpRun mmp_with_scaling(MmpModel start, const Fan& zfan, const Mat& zproj,
                        const InvariantDivisor& ample, int step_cap) {
    MmpOptions opt;
    opt.scaling = ample;
    opt.step_cap = step_cap;
    return run_relative_mmp(std::move(start), zfan, zproj, opt);
}

} // namespace sarkisov
