#pragma once

#include <optional>
#include <vector>

#include "sarkisov/rational.hpp"

namespace sarkisov {

/// Lattice vector: a point of N = Z^n (or of the dual lattice M).
using Vec = std::vector<Int>;

bool is_zero(const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Int& c, const Vec& v);
Int dot(const Vec& a, const Vec& b);
Int content(const Vec& v); // gcd of coordinates, nonnegative; 0 for the zero vector

/// v divided by the gcd of its coordinates. Throws InvalidInput on v = 0.
Vec primitive_vector(const Vec& v);
bool is_primitive(const Vec& v);

/// Coordinatewise lexicographic order; the canonical order used everywhere
/// fan data must be sorted deterministically.
bool lex_less(const Vec& a, const Vec& b);

std::string vec_str(const Vec& v);

/// Dense integer matrix, row major. Maps are column-vector actions: (A v)_i =
/// sum_j A[i][j] v[j], so an n_target x n_source matrix sends N_source to
/// N_target.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<Int> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Int(0)) {}

    Int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Int& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n);
    bool operator==(const Mat& o) const = default;
};

Mat mul(const Mat& A, const Mat& B);
Vec mat_apply(const Mat& A, const Vec& v);
Mat transpose(const Mat& A);
Int det(const Mat& A); // Bareiss fraction-free elimination
int rank_of(const std::vector<Vec>& vectors);

/// Smith normal form: U*A*V = S with U, V unimodular and S diagonal with
/// divisibility d1 | d2 | ... Deterministic pivoting.
struct Smith {
    Mat U, S, V;
};
Smith smith_normal_form(const Mat& A);

/// True iff A: Z^cols -> Z^rows is surjective (rank = rows, all elementary
/// divisors 1).
bool is_surjective_lattice_map(const Mat& A);

/// Integer right inverse of a surjective lattice map (A * R = I).
Mat right_inverse(const Mat& A);

/// |det| = 1 square matrix test.
bool is_unimodular(const Mat& A);

/// Projection Z^n -> Z^(n-r) whose kernel is the saturation of the span of
/// `gens`; r = rank of gens. Deterministic.
Mat quotient_projection(int n, const std::vector<Vec>& gens);

/// Exact solve A x = b over the rationals. Returns nullopt if inconsistent;
/// requires A to have full column rank (unique solution on its span).
std::optional<std::vector<Rat>> solve_rational(const std::vector<Vec>& columns, const Vec& b);

/// Primitive integer kernel vector of a set of vectors spanning a subspace of
/// corank 1 (used for wall relations). Throws if the kernel is not 1-dim.
Vec kernel_vector(const std::vector<Vec>& vectors);

/// Rational nullspace basis of the system {x : <row, x> = 0 for all rows},
/// returned as primitive integer vectors.
std::vector<Vec> integer_nullspace(const std::vector<Vec>& rows);

} // namespace sarkisov
