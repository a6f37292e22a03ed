#include "sarkisov/transform.hpp"

#include <algorithm>
#include <set>

#include "sarkisov/errors.hpp"

namespace sarkisov {

ToricBirationalMap make_map(Mat matrix, ToricMoriFibreSpace source, ToricMoriFibreSpace target) {
    if (matrix.rows != target.total.fan.dim || matrix.cols != source.total.fan.dim)
        fail(ErrorKind::InvalidInput, "map matrix shape does not match the lattices");
    if (matrix.rows != matrix.cols || !is_unimodular(matrix))
        fail(ErrorKind::InvalidInput, "birational monomial map must have |det| = 1");
    ToricBirationalMap phi;
    phi.matrix = std::move(matrix);
    phi.source = std::move(source);
    phi.target = std::move(target);
    return phi;
}

Mat unimodular_inverse(const Mat& A) {
    if (!is_unimodular(A)) fail(ErrorKind::InvalidInput, "inverse of a non-unimodular matrix");
    int n = A.rows;
    Int d = det(A);
    Mat inv(n, n);
    // Adjugate via cofactors; n <= 4 at desk scale so this stays cheap.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Mat minor(n - 1, n - 1);
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == i) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == j) continue;
                    minor.at(rr, cc) = A.at(r, c);
                    ++cc;
                }
                ++rr;
            }
            Int cof = det(minor);
            if ((i + j) % 2 == 1) cof = -cof;
            inv.at(j, i) = cof * d; // d = +-1
        }
    return inv;
}

namespace {

bool carries_fan_to_fan(const Mat& A, const Fan& from, const Fan& to) {
    if (from.dim != to.dim) return false;
    if (from.rays.size() != to.rays.size() || from.cones.size() != to.cones.size()) return false;
    std::vector<int> image(from.rays.size());
    for (size_t i = 0; i < from.rays.size(); ++i) {
        int idx = to.ray_index(mat_apply(A, from.rays[i]));
        if (idx < 0) return false;
        image[i] = idx;
    }
    std::set<std::vector<int>> target_cones(to.cones.begin(), to.cones.end());
    for (const auto& cone : from.cones) {
        std::vector<int> img;
        for (int i : cone) img.push_back(image[i]);
        std::sort(img.begin(), img.end());
        if (!target_cones.count(img)) return false;
    }
    return true;
}

} // namespace

bool is_square_isomorphism(const ToricBirationalMap& phi) {
    if (!carries_fan_to_fan(phi.matrix, phi.source.total.fan, phi.target.total.fan)) return false;
    const Fan& s = phi.source.base.fan;
    const Fan& t = phi.target.base.fan;
    if (s.dim != t.dim) return false;
    if (s.dim == 0) return true;
    // Solve A_S * pi = pi' * A; pi surjective, so A_S = (pi' A) pi^+.
    Mat piA = mul(phi.target.projection, phi.matrix);
    Mat a_s = mul(piA, right_inverse(phi.source.projection));
    if (mul(a_s, phi.source.projection) != piA) return false;
    if (!is_unimodular(a_s)) return false;
    return carries_fan_to_fan(a_s, s, t);
}

MonomialLinearSystem total_transform(const MonomialLinearSystem& h_target,
                                     const ToricBirationalMap& phi) {
    const Fan& src = phi.source.total.fan;
    const Fan& tgt = phi.target.total.fan;
    Mat inv = unimodular_inverse(phi.matrix);

    // Transport the target fan to the source lattice and build the common
    // resolution W.
    std::vector<Vec> pulled_rays;
    for (const Vec& r : tgt.rays) pulled_rays.push_back(mat_apply(inv, r));
    Fan pulled = make_fan(tgt.dim, pulled_rays, tgt.cones);
    Fan w = common_refinement(src, pulled);

    // q^* on W: reference coefficient phi_{D'}(A u) at each ray u of W, and
    // monomials pulled back along the dual map.
    Mat dual = transpose(phi.matrix);
    MonomialLinearSystem out;
    out.scale = h_target.scale;
    for (const Vec& m : h_target.points) out.points.push_back(mat_apply(dual, m));
    std::sort(out.points.begin(), out.points.end(), lex_less);

    std::vector<Rat> on_w(w.rays.size());
    for (size_t i = 0; i < w.rays.size(); ++i)
        on_w[i] = pl_evaluate(tgt, h_target.reference, mat_apply(phi.matrix, w.rays[i]));

    // p_*: keep the coefficients at the rays of the source fan.
    out.reference.assign(src.rays.size(), Rat(0));
    for (size_t i = 0; i < src.rays.size(); ++i) {
        int idx = w.ray_index(src.rays[i]);
        if (idx < 0)
            fail(ErrorKind::InternalInvariantViolation, "common refinement lost a source ray");
        out.reference[i] = on_w[idx];
    }
    return out;
}

} // namespace sarkisov
