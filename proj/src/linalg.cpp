#include "sarkisov/linalg.hpp"

#include <algorithm>
#include <sstream>

namespace sarkisov {

namespace {

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

Int gcd_int(Int a, Int b) {
    a = abs_int(a);
    b = abs_int(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec scale(const Int& c, const Vec& v) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
    return r;
}

Int dot(const Vec& a, const Vec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Int content(const Vec& v) {
    Int g = 0;
    for (const Int& x : v) g = gcd_int(g, x);
    return g;
}

Vec primitive_vector(const Vec& v) {
    Int g = content(v);
    if (g == 0) fail(ErrorKind::InvalidInput, "primitive_vector of the zero vector");
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
    return r;
}

bool is_primitive(const Vec& v) { return content(v) == 1; }

bool lex_less(const Vec& a, const Vec& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

std::string vec_str(const Vec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ",";
        os << v[i];
    }
    os << ")";
    return os.str();
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Mat mul(const Mat& A, const Mat& B) {
    if (A.cols != B.rows) fail(ErrorKind::InvalidInput, "matrix product shape mismatch");
    Mat C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            if (A.at(i, k) == 0) continue;
            for (int j = 0; j < B.cols; ++j) C.at(i, j) += A.at(i, k) * B.at(k, j);
        }
    return C;
}

Vec mat_apply(const Mat& A, const Vec& v) {
    if (static_cast<int>(v.size()) != A.cols)
        fail(ErrorKind::InvalidInput, "matrix-vector shape mismatch");
    Vec r(A.rows, Int(0));
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) r[i] += A.at(i, j) * v[j];
    return r;
}

Mat transpose(const Mat& A) {
    Mat T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
    return T;
}

Int det(const Mat& A) {
    if (A.rows != A.cols) fail(ErrorKind::InvalidInput, "det of non-square matrix");
    int n = A.rows;
    if (n == 0) return 1;
    Mat m = A;
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k) == 0) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (m.at(i, k) != 0) {
                    p = i;
                    break;
                }
            if (p < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(p, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
            m.at(i, k) = 0;
        }
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

namespace {

// Row-echelon elimination over the rationals; returns pivot column list.
// `m` is rows x cols of BigRational, modified in place.
std::vector<int> rational_echelon(std::vector<std::vector<BigRational>>& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    size_t rows = m.size(), cols = m[0].size();
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[r], m[p]);
        BigRational piv = m[r][c];
        for (size_t j = c; j < cols; ++j) m[r][j] /= piv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            BigRational f = m[i][c];
            for (size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivots.push_back(static_cast<int>(c));
        ++r;
    }
    return pivots;
}

} // namespace

int rank_of(const std::vector<Vec>& vectors) {
    if (vectors.empty()) return 0;
    std::vector<std::vector<BigRational>> m;
    for (const Vec& v : vectors) {
        std::vector<BigRational> row;
        row.reserve(v.size());
        for (const Int& x : v) row.emplace_back(x);
        m.push_back(std::move(row));
    }
    return static_cast<int>(rational_echelon(m).size());
}

Smith smith_normal_form(const Mat& A) {
    Smith s;
    s.S = A;
    s.U = Mat::identity(A.rows);
    s.V = Mat::identity(A.cols);
    Mat& S = s.S;
    Mat& U = s.U;
    Mat& V = s.V;
    int n = std::min(A.rows, A.cols);

    auto row_swap = [&](int i, int j) {
        for (int c = 0; c < S.cols; ++c) std::swap(S.at(i, c), S.at(j, c));
        for (int c = 0; c < U.cols; ++c) std::swap(U.at(i, c), U.at(j, c));
    };
    auto col_swap = [&](int i, int j) {
        for (int r = 0; r < S.rows; ++r) std::swap(S.at(r, i), S.at(r, j));
        for (int r = 0; r < V.rows; ++r) std::swap(V.at(r, i), V.at(r, j));
    };
    auto row_addmul = [&](int dst, int src, const Int& f) {
        for (int c = 0; c < S.cols; ++c) S.at(dst, c) += f * S.at(src, c);
        for (int c = 0; c < U.cols; ++c) U.at(dst, c) += f * U.at(src, c);
    };
    auto col_addmul = [&](int dst, int src, const Int& f) {
        for (int r = 0; r < S.rows; ++r) S.at(r, dst) += f * S.at(r, src);
        for (int r = 0; r < V.rows; ++r) V.at(r, dst) += f * V.at(r, src);
    };
    auto row_negate = [&](int i) {
        for (int c = 0; c < S.cols; ++c) S.at(i, c) = -S.at(i, c);
        for (int c = 0; c < U.cols; ++c) U.at(i, c) = -U.at(i, c);
    };

    for (int t = 0; t < n; ++t) {
        // Deterministic pivot: smallest |entry| > 0, ties by (row, col).
        int pi = -1, pj = -1;
        Int best = 0;
        for (int i = t; i < S.rows; ++i)
            for (int j = t; j < S.cols; ++j) {
                Int v = S.at(i, j) < 0 ? Int(-S.at(i, j)) : S.at(i, j);
                if (v == 0) continue;
                if (pi < 0 || v < best) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        if (pi != t) row_swap(t, pi);
        if (pj != t) col_swap(t, pj);

        bool again = true;
        while (again) {
            again = false;
            for (int i = t + 1; i < S.rows; ++i) {
                if (S.at(i, t) == 0) continue;
                Int q = S.at(i, t) / S.at(t, t);
                row_addmul(i, t, -q);
                if (S.at(i, t) != 0) {
                    row_swap(t, i);
                    again = true;
                }
            }
            for (int j = t + 1; j < S.cols; ++j) {
                if (S.at(t, j) == 0) continue;
                Int q = S.at(t, j) / S.at(t, t);
                col_addmul(j, t, -q);
                if (S.at(t, j) != 0) {
                    col_swap(t, j);
                    again = true;
                }
            }
        }
        if (S.at(t, t) < 0) row_negate(t);

        // Enforce the divisibility chain d_t | d_{t+1}...
        if (t > 0 && S.at(t, t) % S.at(t - 1, t - 1) != 0) {
            // Fold this diagonal entry back and redo from t-1.
            col_addmul(t - 1, t, Int(1));
            t -= 2;
        }
    }
    return s;
}

bool is_surjective_lattice_map(const Mat& A) {
    if (A.rows == 0) return true;
    Smith s = smith_normal_form(A);
    for (int i = 0; i < A.rows; ++i) {
        if (i >= A.cols) return false;
        if (s.S.at(i, i) != 1 && s.S.at(i, i) != -1) return false;
    }
    return true;
}

Mat right_inverse(const Mat& A) {
    if (!is_surjective_lattice_map(A))
        fail(ErrorKind::InvalidInput, "right inverse of a non-surjective lattice map");
    if (A.rows == 0) return Mat(A.cols, 0);
    Smith s = smith_normal_form(A);
    // U A V = S = [I | 0]; A * (V [I;0] U) = U^-1 [I|0] [I;0] U = I.
    Mat VI(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i) VI.at(i, i) = s.S.at(i, i); // +-1 entries
    return mul(s.V, mul(VI, s.U));
}

bool is_unimodular(const Mat& A) {
    if (A.rows != A.cols) return false;
    Int d = det(A);
    return d == 1 || d == -1;
}

Mat quotient_projection(int n, const std::vector<Vec>& gens) {
    Mat G(n, static_cast<int>(gens.size()));
    for (size_t j = 0; j < gens.size(); ++j)
        for (int i = 0; i < n; ++i) G.at(i, static_cast<int>(j)) = gens[j][i];
    Smith s = smith_normal_form(G);
    int r = 0;
    for (int i = 0; i < std::min(G.rows, G.cols); ++i)
        if (s.S.at(i, i) != 0) ++r;
    Mat P(n - r, n);
    for (int i = 0; i < n - r; ++i)
        for (int j = 0; j < n; ++j) P.at(i, j) = s.U.at(r + i, j);
    return P;
}

std::optional<std::vector<Rat>> solve_rational(const std::vector<Vec>& columns, const Vec& b) {
    size_t n = b.size();
    size_t k = columns.size();
    std::vector<std::vector<BigRational>> m(n, std::vector<BigRational>(k + 1));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < k; ++j) m[i][j] = BigRational(columns[j][i]);
        m[i][k] = BigRational(b[i]);
    }
    std::vector<int> pivots = rational_echelon(m);
    // Inconsistent if a pivot lands in the augmented column.
    if (!pivots.empty() && pivots.back() == static_cast<int>(k)) return std::nullopt;
    std::vector<Rat> x(k, Rat(0));
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = Rat(m[r][k]);
    // Verify (guards against underdetermined systems picking a section).
    for (size_t i = 0; i < n; ++i) {
        BigRational s = 0;
        for (size_t j = 0; j < k; ++j)
            if (!x[j].is_zero()) s += BigRational(columns[j][i]) * x[j].value();
        if (s != BigRational(b[i])) return std::nullopt;
    }
    return x;
}

std::vector<Vec> integer_nullspace(const std::vector<Vec>& rows) {
    if (rows.empty()) fail(ErrorKind::InvalidInput, "nullspace of empty row set");
    size_t n = rows[0].size();
    std::vector<std::vector<BigRational>> m;
    for (const Vec& r : rows) {
        std::vector<BigRational> row;
        for (const Int& x : r) row.emplace_back(x);
        m.push_back(std::move(row));
    }
    std::vector<int> pivots = rational_echelon(m);
    std::vector<bool> is_pivot(n, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<BigRational> x(n, BigRational(0));
        x[f] = 1;
        for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -m[r][f];
        // Clear denominators and primitivize.
        Int lcm = 1;
        for (const auto& q : x) {
            Int d = boost::multiprecision::denominator(q);
            lcm = lcm / gcd_int(lcm, d) * d;
        }
        Vec v(n);
        for (size_t i = 0; i < n; ++i) {
            BigRational scaled = x[i] * BigRational(lcm);
            v[i] = boost::multiprecision::numerator(scaled);
        }
        basis.push_back(primitive_vector(v));
    }
    return basis;
}

Vec kernel_vector(const std::vector<Vec>& vectors) {
    // Kernel of the map e_i -> vectors[i]: relations among the vectors.
    if (vectors.empty()) fail(ErrorKind::InvalidInput, "kernel of empty vector set");
    size_t n = vectors[0].size();
    std::vector<Vec> rows(n, Vec(vectors.size()));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < vectors.size(); ++j) rows[i][j] = vectors[j][i];
    std::vector<Vec> basis = integer_nullspace(rows);
    if (basis.size() != 1)
        fail(ErrorKind::InternalInvariantViolation,
             "expected a one-dimensional relation space, got " + std::to_string(basis.size()));
    return basis[0];
}

} // namespace sarkisov
