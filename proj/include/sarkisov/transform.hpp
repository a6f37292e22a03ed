#pragma once

#include "sarkisov/toric.hpp"

namespace sarkisov {

/// Monomial birational map between Mori fibre spaces: a unimodular matrix
/// N_source -> N_target identifying the tori.
struct ToricBirationalMap {
    Mat matrix;
    ToricMoriFibreSpace source;
    ToricMoriFibreSpace target;
};

ToricBirationalMap make_map(Mat matrix, ToricMoriFibreSpace source, ToricMoriFibreSpace target);

Mat unimodular_inverse(const Mat& A);

/// True iff the matrix carries the source fan bijectively onto the target fan
/// and descends to a lattice isomorphism carrying the base fan to the base
/// fan (compatible with both projections).
bool is_square_isomorphism(const ToricBirationalMap& phi);

/// Total transform p_*(q^* H_target) computed through the common refinement W
/// of the source fan and the transported target fan. Result lives on the
/// source model.
MonomialLinearSystem total_transform(const MonomialLinearSystem& h_target,
                                     const ToricBirationalMap& phi);

} // namespace sarkisov
