#include "stingray/linalg.hpp"

#include <algorithm>

namespace stingray {

Matrix::Matrix(FieldPtr F, size_t rows, size_t cols) : F_(std::move(F)), r_(rows), c_(cols), a_(rows * cols, 0) {}

Matrix Matrix::identity(FieldPtr F, size_t n) {
    Matrix I(std::move(F), n, n);
    for (size_t i = 0; i < n; ++i) I(i, i) = 1;
    return I;
}

Matrix Matrix::from_rows(FieldPtr F, const std::vector<Vec>& rows) {
    size_t c = rows.empty() ? 0 : rows[0].size();
    Matrix M(std::move(F), rows.size(), c);
    for (size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != c) throw std::invalid_argument("Matrix::from_rows: ragged rows");
        for (size_t j = 0; j < c; ++j) {
            if (rows[i][j] >= M.field()->size()) throw std::invalid_argument("Matrix::from_rows: entry outside field");
            M(i, j) = rows[i][j];
        }
    }
    return M;
}

bool Matrix::is_identity() const {
    if (r_ != c_) return false;
    for (size_t i = 0; i < r_; ++i)
        for (size_t j = 0; j < c_; ++j)
            if ((*this)(i, j) != (i == j ? 1u : 0u)) return false;
    return true;
}

Matrix operator*(const Matrix& A, const Matrix& B) {
    if (A.cols() != B.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
    const Field& F = *A.field();
    const size_t n = A.rows(), m = A.cols(), k = B.cols();
    Matrix C(A.field(), n, k);
    if (F.is_prime_field() && F.p() != 2) {
        const uint64_t p = F.p();
        std::vector<uint64_t> acc(k);
        // bounded partial sums: p < 2^24, so 2^15 products fit in 64 bits
        for (size_t i = 0; i < n; ++i) {
            std::fill(acc.begin(), acc.end(), 0);
            const Elem* ar = A.row(i);
            for (size_t t = 0; t < m; ++t) {
                uint64_t a = ar[t];
                if (!a) continue;
                const Elem* br = B.row(t);
                for (size_t j = 0; j < k; ++j) acc[j] += a * br[j];
                if ((t & 0x3fff) == 0x3fff)
                    for (auto& x : acc) x %= p;
            }
            Elem* cr = C.row(i);
            for (size_t j = 0; j < k; ++j) cr[j] = Elem(acc[j] % p);
        }
        return C;
    }
    for (size_t i = 0; i < n; ++i) {
        const Elem* ar = A.row(i);
        Elem* cr = C.row(i);
        for (size_t t = 0; t < m; ++t) {
            Elem a = ar[t];
            if (!a) continue;
            const Elem* br = B.row(t);
            if (a == 1) {
                for (size_t j = 0; j < k; ++j) cr[j] = F.add(cr[j], br[j]);
            } else {
                for (size_t j = 0; j < k; ++j)
                    if (br[j]) cr[j] = F.add(cr[j], F.mul(a, br[j]));
            }
        }
    }
    return C;
}

Matrix operator+(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw std::invalid_argument("matrix sum: dimension mismatch");
    const Field& F = *A.field();
    Matrix C(A.field(), A.rows(), A.cols());
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = 0; j < A.cols(); ++j) C(i, j) = F.add(A(i, j), B(i, j));
    return C;
}

Matrix operator-(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) throw std::invalid_argument("matrix difference: dimension mismatch");
    const Field& F = *A.field();
    Matrix C(A.field(), A.rows(), A.cols());
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = 0; j < A.cols(); ++j) C(i, j) = F.sub(A(i, j), B(i, j));
    return C;
}

Matrix scale(const Matrix& A, Elem s) {
    const Field& F = *A.field();
    Matrix C(A.field(), A.rows(), A.cols());
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = 0; j < A.cols(); ++j) C(i, j) = F.mul(A(i, j), s);
    return C;
}

Matrix transpose(const Matrix& A) {
    Matrix T(A.field(), A.cols(), A.rows());
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = 0; j < A.cols(); ++j) T(j, i) = A(i, j);
    return T;
}

Matrix conjugate(const Matrix& A) {
    const Field& F = *A.field();
    Matrix C = A;
    if (F.u() == 1) return C;
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = 0; j < A.cols(); ++j) C(i, j) = F.conj(A(i, j));
    return C;
}

Vec vec_mul(const Vec& v, const Matrix& M) {
    if (v.size() != M.rows()) throw std::invalid_argument("vec_mul: dimension mismatch");
    const Field& F = *M.field();
    Vec out(M.cols(), 0);
    for (size_t t = 0; t < v.size(); ++t) {
        if (!v[t]) continue;
        const Elem* br = M.row(t);
        for (size_t j = 0; j < M.cols(); ++j)
            if (br[j]) out[j] = F.add(out[j], F.mul(v[t], br[j]));
    }
    return out;
}

Vec vec_add(const Field& F, const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = F.add(a[i], b[i]);
    return out;
}

Vec vec_scale(const Field& F, const Vec& a, Elem s) {
    Vec out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = F.mul(a[i], s);
    return out;
}

bool is_zero_vec(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; });
}

std::vector<size_t> rref_inplace(Matrix& M) {
    const Field& F = *M.field();
    std::vector<size_t> piv;
    size_t r = 0;
    const size_t R = M.rows(), C = M.cols();
    for (size_t c = 0; c < C && r < R; ++c) {
        size_t sel = R;
        for (size_t i = r; i < R; ++i)
            if (M(i, c)) {
                sel = i;
                break;
            }
        if (sel == R) continue;
        if (sel != r)
            for (size_t j = 0; j < C; ++j) std::swap(M(sel, j), M(r, j));
        Elem iv = F.inv(M(r, c));
        if (iv != 1)
            for (size_t j = c; j < C; ++j) M(r, j) = F.mul(M(r, j), iv);
        for (size_t i = 0; i < R; ++i) {
            if (i == r) continue;
            Elem f = M(i, c);
            if (!f) continue;
            Elem nf = F.neg(f);
            for (size_t j = c; j < C; ++j)
                if (M(r, j)) M(i, j) = F.add(M(i, j), F.mul(nf, M(r, j)));
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

size_t rank(const Matrix& M) {
    Matrix T = M;
    return rref_inplace(T).size();
}

Matrix inverse(const Matrix& M) {
    if (!M.is_square()) throw std::invalid_argument("inverse: non-square matrix");
    const size_t n = M.rows();
    Matrix A(M.field(), n, 2 * n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) A(i, j) = M(i, j);
        A(i, n + i) = 1;
    }
    auto piv = rref_inplace(A);
    if (piv.size() < n || piv[n - 1] != n - 1) throw std::domain_error("inverse: singular matrix");
    Matrix I(M.field(), n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) I(i, j) = A(i, n + j);
    return I;
}

bool is_invertible(const Matrix& M) { return M.is_square() && rank(M) == M.rows(); }

Elem determinant(const Matrix& M) {
    if (!M.is_square()) throw std::invalid_argument("determinant: non-square matrix");
    const Field& F = *M.field();
    Matrix A = M;
    const size_t n = A.rows();
    Elem det = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t sel = n;
        for (size_t i = c; i < n; ++i)
            if (A(i, c)) {
                sel = i;
                break;
            }
        if (sel == n) return 0;
        if (sel != c) {
            for (size_t j = 0; j < n; ++j) std::swap(A(sel, j), A(c, j));
            det = F.neg(det);
        }
        det = F.mul(det, A(c, c));
        Elem iv = F.inv(A(c, c));
        for (size_t i = c + 1; i < n; ++i) {
            Elem f = F.mul(A(i, c), iv);
            if (!f) continue;
            Elem nf = F.neg(f);
            for (size_t j = c; j < n; ++j) A(i, j) = F.add(A(i, j), F.mul(nf, A(c, j)));
        }
    }
    return det;
}

Matrix left_kernel(const Matrix& M) {
    // v M = 0  <=>  M^T v^T = 0
    const Field& F = *M.field();
    Matrix T = transpose(M);
    auto piv = rref_inplace(T);
    const size_t n = T.cols();
    std::vector<bool> is_piv(n, false);
    for (size_t c : piv) is_piv[c] = true;
    std::vector<Vec> rows;
    for (size_t f = 0; f < n; ++f) {
        if (is_piv[f]) continue;
        Vec v(n, 0);
        v[f] = 1;
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = F.neg(T(i, f));
        rows.push_back(v);
    }
    if (rows.empty()) return Matrix(M.field(), 0, n);
    return Matrix::from_rows(M.field(), rows);
}

Matrix mat_pow(const Matrix& g, const BigInt& n) {
    if (!g.is_square()) throw std::invalid_argument("mat_pow: non-square matrix");
    if (n < 0) return mat_pow(inverse(g), BigInt(-n));
    Matrix result = Matrix::identity(g.field(), g.rows());
    if (n == 0) return result;
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        result = result * result;
        if (mpz_tstbit(n.get_mpz_t(), i)) result = result * g;
    }
    return result;
}

Matrix block_diag(const Matrix& A, const Matrix& B) {
    Matrix C(A.field() ? A.field() : B.field(), A.rows() + B.rows(), A.cols() + B.cols());
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = 0; j < A.cols(); ++j) C(i, j) = A(i, j);
    for (size_t i = 0; i < B.rows(); ++i)
        for (size_t j = 0; j < B.cols(); ++j) C(A.rows() + i, A.cols() + j) = B(i, j);
    return C;
}

Matrix companion(const Poly& f_in) {
    Poly f = poly_monic(f_in);
    const int n = f.deg();
    if (n < 1) throw std::invalid_argument("companion: degree must be positive");
    const Field& F = *f.F;
    // row convention: e_i -> e_{i+1}, e_{n-1} -> -sum c_j e_j
    Matrix C(f.F, n, n);
    for (int i = 0; i + 1 < n; ++i) C(i, i + 1) = 1;
    for (int j = 0; j < n; ++j) C(n - 1, j) = F.neg(f.c[j]);
    return C;
}

Matrix stack(const Matrix& A, const Matrix& B) {
    if (A.rows() == 0) return B;
    if (B.rows() == 0) return A;
    if (A.cols() != B.cols()) throw std::invalid_argument("stack: column mismatch");
    Matrix C(A.field(), A.rows() + B.rows(), A.cols());
    for (size_t i = 0; i < A.rows(); ++i)
        for (size_t j = 0; j < A.cols(); ++j) C(i, j) = A(i, j);
    for (size_t i = 0; i < B.rows(); ++i)
        for (size_t j = 0; j < B.cols(); ++j) C(A.rows() + i, j) = B(i, j);
    return C;
}

Poly charpoly(const Matrix& M) {
    if (!M.is_square()) throw std::invalid_argument("charpoly: non-square matrix");
    const Field& F = *M.field();
    const size_t n = M.rows();
    Matrix H = M;
    // similarity reduction to upper Hessenberg form
    for (size_t m = 1; m + 1 < n; ++m) {
        size_t sel = n;
        for (size_t i = m; i < n; ++i)
            if (H(i, m - 1)) {
                sel = i;
                break;
            }
        if (sel == n) continue;
        if (sel != m) {
            for (size_t j = 0; j < n; ++j) std::swap(H(sel, j), H(m, j));
            for (size_t i = 0; i < n; ++i) std::swap(H(i, sel), H(i, m));
        }
        Elem piv_inv = F.inv(H(m, m - 1));
        for (size_t j = m + 1; j < n; ++j) {
            Elem u = F.mul(H(j, m - 1), piv_inv);
            if (!u) continue;
            Elem nu = F.neg(u);
            for (size_t c = 0; c < n; ++c) H(j, c) = F.add(H(j, c), F.mul(nu, H(m, c)));
            for (size_t r = 0; r < n; ++r) H(r, m) = F.add(H(r, m), F.mul(u, H(r, j)));
        }
    }
    std::vector<Poly> p(n + 1, Poly(M.field()));
    p[0] = Poly::constant(M.field(), 1);
    for (size_t m = 1; m <= n; ++m) {
        Poly lin(M.field(), {F.neg(H(m - 1, m - 1)), 1});
        Poly acc = poly_mul(lin, p[m - 1]);
        Elem prod = 1;
        for (size_t i = m - 1; i >= 1; --i) {
            prod = F.mul(prod, H(i, i - 1));
            if (!prod) break;
            Elem coef = F.mul(H(i - 1, m - 1), prod);
            if (coef) acc = poly_sub(acc, poly_scale(p[i - 1], coef));
        }
        p[m] = acc;
    }
    return p[n];
}

BigInt element_order(const Matrix& g, const Factorization& bound) {
    struct Ops {
        Matrix pow(const Matrix& x, const BigInt& n) const { return mat_pow(x, n); }
        bool is_one(const Matrix& x) const { return x.is_identity(); }
    };
    return element_order_generic(g, bound, Ops{});
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(FieldPtr F, size_t ambient) : F_(F), d_(ambient), basis_(F, 0, ambient) {}

Subspace Subspace::span(const Matrix& rows) {
    Subspace S(rows.field(), rows.cols());
    Matrix T = rows;
    auto piv = rref_inplace(T);
    Matrix B(rows.field(), piv.size(), rows.cols());
    for (size_t i = 0; i < piv.size(); ++i)
        for (size_t j = 0; j < rows.cols(); ++j) B(i, j) = T(i, j);
    S.basis_ = B;
    S.piv_ = piv;
    return S;
}

Subspace Subspace::full(FieldPtr F, size_t ambient) { return span(Matrix::identity(F, ambient)); }

Vec Subspace::coordinates(const Vec& v) const {
    if (v.size() != d_) throw std::invalid_argument("Subspace::coordinates: dimension mismatch");
    const Field& F = *F_;
    Vec coord(dim());
    Vec rem = v;
    for (size_t i = 0; i < dim(); ++i) {
        Elem c = rem[piv_[i]];
        coord[i] = c;
        if (!c) continue;
        Elem nc = F.neg(c);
        const Elem* b = basis_.row(i);
        for (size_t j = 0; j < d_; ++j)
            if (b[j]) rem[j] = F.add(rem[j], F.mul(nc, b[j]));
    }
    if (!is_zero_vec(rem)) throw std::domain_error("Subspace::coordinates: vector not in subspace");
    return coord;
}

bool Subspace::contains(const Vec& v) const {
    try {
        coordinates(v);
        return true;
    } catch (const std::domain_error&) {
        return false;
    }
}

bool Subspace::contains(const Subspace& W) const {
    for (size_t i = 0; i < W.dim(); ++i)
        if (!contains(W.basis().row_vec(i))) return false;
    return true;
}

Subspace subspace_sum(const Subspace& U, const Subspace& W) {
    if (U.ambient() != W.ambient()) throw std::invalid_argument("subspace_sum: ambient mismatch");
    return Subspace::span(stack(U.basis(), W.basis()));
}

Subspace subspace_intersection(const Subspace& U, const Subspace& W) {
    if (U.ambient() != W.ambient()) throw std::invalid_argument("subspace_intersection: ambient mismatch");
    if (U.dim() == 0 || W.dim() == 0) return Subspace(U.field(), U.ambient());
    // a U = b W  <=>  (a, -b) [U; W] = 0
    Matrix S = stack(U.basis(), W.basis());
    Matrix K = left_kernel(S);
    Matrix rows(U.field(), K.rows(), U.ambient());
    const Field& F = *U.field();
    for (size_t i = 0; i < K.rows(); ++i) {
        Vec a(K.row(i), K.row(i) + U.dim());
        Vec x = vec_mul(a, U.basis());
        for (size_t j = 0; j < U.ambient(); ++j) rows(i, j) = x[j];
    }
    (void)F;
    return Subspace::span(rows);
}

bool intersects_trivially(const Subspace& U, const Subspace& W) {
    if (U.ambient() != W.ambient()) throw std::invalid_argument("intersects_trivially: ambient mismatch");
    return rank(stack(U.basis(), W.basis())) == U.dim() + W.dim();
}

bool is_direct_sum(const Subspace& U, const Subspace& W) {
    if (U.ambient() != W.ambient()) throw std::invalid_argument("is_direct_sum: ambient mismatch");
    return U.dim() + W.dim() == U.ambient() && intersects_trivially(U, W);
}

Subspace image(const Subspace& U, const Matrix& g) {
    if (U.dim() == 0) return U;
    return Subspace::span(U.basis() * g);
}

Subspace fixed_space(const Matrix& g) {
    if (!g.is_square()) throw std::invalid_argument("fixed_space: non-square matrix");
    Matrix K = left_kernel(g - Matrix::identity(g.field(), g.rows()));
    if (K.rows() == 0) return Subspace(g.field(), g.rows());
    return Subspace::span(K);
}

Subspace moved_space(const Matrix& g) {
    if (!g.is_square()) throw std::invalid_argument("moved_space: non-square matrix");
    return Subspace::span(g - Matrix::identity(g.field(), g.rows()));
}

Matrix restrict(const Matrix& g, const Subspace& U) {
    const size_t k = U.dim();
    Matrix R(g.field(), k, k);
    Matrix img = U.basis() * g;
    for (size_t i = 0; i < k; ++i) {
        Vec c;
        try {
            c = U.coordinates(img.row_vec(i));
        } catch (const std::domain_error&) {
            throw std::invalid_argument("restrict: subspace is not invariant");
        }
        for (size_t j = 0; j < k; ++j) R(i, j) = c[j];
    }
    return R;
}

Matrix adapted_basis(const Subspace& U) {
    const size_t d = U.ambient();
    std::vector<bool> is_piv(d, false);
    for (size_t c : U.pivots()) is_piv[c] = true;
    Matrix B(U.field(), d, d);
    size_t r = 0;
    for (size_t i = 0; i < U.dim(); ++i, ++r)
        for (size_t j = 0; j < d; ++j) B(r, j) = U.basis()(i, j);
    for (size_t j = 0; j < d; ++j)
        if (!is_piv[j]) B(r++, j) = 1;
    return B;
}

}  // namespace stingray
