#pragma once

#include <string>
#include <utility>
#include <vector>

#include "sarkisov/fan.hpp"

namespace sarkisov {

/// Complete toric variety with cached singularity flags.
struct ToricVariety {
    Fan fan;
    bool complete = false;
    bool q_factorial = false;
    bool smooth = false;
    bool terminal = false;

    bool operator==(const ToricVariety& o) const { return fan == o.fan; }
};

ToricVariety make_variety(Fan f);

/// Torus-invariant Q-divisor: one coefficient per fan ray (canonical order).
using InvariantDivisor = std::vector<Rat>;

/// PL evaluation phi_D(w) by barycentric interpolation of ray coefficients.
Rat pl_evaluate(const Fan& f, const InvariantDivisor& d, const Vec& w);

/// Torus-invariant monomial linear system: members are div(chi^m) + reference
/// for m in `points`, scaled by `scale` when used as the boundary of a pair.
struct MonomialLinearSystem {
    std::vector<Vec> points;
    InvariantDivisor reference;
    Rat scale = Rat(1);
};

/// min over members of ord_w = min_m <w, m> + phi_D(w); unscaled.
Rat system_mult(const Fan& f, const MonomialLinearSystem& H, const Vec& w);

/// Coefficients of one member along the fan rays.
InvariantDivisor member_coefficients(const Fan& f, const MonomialLinearSystem& H, size_t member);

/// Fixed part F (per-ray minima) and the mobilized system H - F.
std::pair<MonomialLinearSystem, InvariantDivisor>
fixed_mobile_decomposition(const Fan& f, const MonomialLinearSystem& H);

bool system_is_mobile(const Fan& f, const MonomialLinearSystem& H);

/// Two presentations give the same linear system iff their member coefficient
/// lists agree as sets (points may differ by a lattice translation).
bool systems_equivalent(const Fan& f, const MonomialLinearSystem& a, const MonomialLinearSystem& b);

/// The complete system |D|: all lattice points of the section polytope with
/// reference D. Requires integral D coefficients.
MonomialLinearSystem complete_system_of_divisor(const Fan& f, const InvariantDivisor& d);

/// X -> S with the lattice surjection N_X -> N_S.
struct ToricMoriFibreSpace {
    ToricVariety total;
    ToricVariety base;
    Mat projection;

    bool operator==(const ToricMoriFibreSpace& o) const {
        return total.fan == o.total.fan && base.fan == o.base.fan && projection == o.projection;
    }
};

ToricMoriFibreSpace make_mfs(Fan total, Fan base, Mat projection);

struct InvariantCheck {
    std::string name;
    bool pass;
    std::string detail;
};

/// Every Mori-fibre-space condition, as a named pass/fail list.
std::vector<InvariantCheck> check_mfs(const ToricMoriFibreSpace& x);
void require_valid_mfs(const ToricMoriFibreSpace& x);

int class_group_rank(const Fan& f); // rank Cl = #rays - dim for complete simplicial

/// Curve class of a wall: its primitive relation vector, indexed by rays.
/// Intersection with a divisor is the linear pairing below.
Rat divisor_degree_on_class(const InvariantDivisor& d, const std::vector<Int>& cls);
Rat anticanonical_degree_on_class(const std::vector<Int>& cls);
Rat system_degree_on_class(const MonomialLinearSystem& H, const std::vector<Int>& cls, bool scaled);

/// True iff the wall curve is contracted over the base (its image is a point).
bool wall_is_vertical(const Fan& total, const Mat& projection, const Fan& base, const Wall& w);

/// mu with H + mu K ~ 0 over S: the ratio (H.C)/(-K.C) on any vertical wall
/// curve; asserts independence of the choice.
Rat pseff_threshold_mu(const ToricMoriFibreSpace& x, const MonomialLinearSystem& H);

/// Quotient fibration: collapses the span of the fibre directions `vertical`
/// and assembles the image fan. Returns the base fan and projection.
std::pair<Fan, Mat> quotient_fibration(const Fan& total, const std::vector<Vec>& vertical);

/// Pullback of a base divisor: coefficient at ray v is phi_A(projection(v)).
InvariantDivisor pullback_divisor(const ToricMoriFibreSpace& x, const InvariantDivisor& a_on_base);

/// Sum of all invariant divisors (the default polarization choice; equals -K).
InvariantDivisor boundary_sum_divisor(const Fan& f);

bool divisor_is_ample(const Fan& f, const InvariantDivisor& d);

} // namespace sarkisov
