#pragma once

#include <vector>

#include "stingray/gf.hpp"

namespace stingray {

using Vec = std::vector<Elem>;

// Dense row-major matrix over a finite field. Vectors are rows and groups
// act on the right.
class Matrix {
public:
    Matrix() = default;
    Matrix(FieldPtr F, size_t rows, size_t cols);
    static Matrix identity(FieldPtr F, size_t n);
    static Matrix from_rows(FieldPtr F, const std::vector<Vec>& rows);

    size_t rows() const { return r_; }
    size_t cols() const { return c_; }
    const FieldPtr& field() const { return F_; }
    Elem operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }
    Elem& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
    const Elem* row(size_t i) const { return a_.data() + i * c_; }
    Elem* row(size_t i) { return a_.data() + i * c_; }
    Vec row_vec(size_t i) const { return Vec(row(i), row(i) + c_); }
    const std::vector<Elem>& data() const { return a_; }
    bool is_square() const { return r_ == c_; }
    bool is_identity() const;
    bool operator==(const Matrix& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

private:
    FieldPtr F_;
    size_t r_ = 0, c_ = 0;
    std::vector<Elem> a_;
};

Matrix operator*(const Matrix& A, const Matrix& B);
Matrix operator+(const Matrix& A, const Matrix& B);
Matrix operator-(const Matrix& A, const Matrix& B);
Matrix scale(const Matrix& A, Elem s);
Matrix transpose(const Matrix& A);
Matrix conjugate(const Matrix& A);  // entrywise x -> x^q (u = 2), else copy
Vec vec_mul(const Vec& v, const Matrix& M);
Vec vec_add(const Field& F, const Vec& a, const Vec& b);
Vec vec_scale(const Field& F, const Vec& a, Elem s);
bool is_zero_vec(const Vec& v);

// reduced row echelon form in place; returns pivot columns
std::vector<size_t> rref_inplace(Matrix& M);
size_t rank(const Matrix& M);
Matrix inverse(const Matrix& M);  // throws std::domain_error when singular
bool is_invertible(const Matrix& M);
Elem determinant(const Matrix& M);
// rows spanning { v : v M = 0 }
Matrix left_kernel(const Matrix& M);
Matrix mat_pow(const Matrix& g, const BigInt& n);  // negative n uses the inverse
Matrix block_diag(const Matrix& A, const Matrix& B);
Matrix companion(const Poly& f);
Matrix stack(const Matrix& A, const Matrix& B);
Poly charpoly(const Matrix& M);
BigInt element_order(const Matrix& g, const Factorization& bound);

class Subspace {
public:
    Subspace() = default;
    Subspace(FieldPtr F, size_t ambient);  // zero subspace
    static Subspace span(const Matrix& rows);
    static Subspace full(FieldPtr F, size_t ambient);

    size_t dim() const { return basis_.rows(); }
    size_t ambient() const { return d_; }
    const Matrix& basis() const { return basis_; }
    const std::vector<size_t>& pivots() const { return piv_; }
    const FieldPtr& field() const { return F_; }
    bool contains(const Vec& v) const;
    bool contains(const Subspace& W) const;
    // coordinates of v in the echelon basis; throws if v is not in the subspace
    Vec coordinates(const Vec& v) const;
    bool operator==(const Subspace& o) const { return d_ == o.d_ && basis_ == o.basis_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

private:
    FieldPtr F_;
    size_t d_ = 0;
    Matrix basis_;
    std::vector<size_t> piv_;
};

Subspace subspace_sum(const Subspace& U, const Subspace& W);
Subspace subspace_intersection(const Subspace& U, const Subspace& W);
bool is_direct_sum(const Subspace& U, const Subspace& W);
bool intersects_trivially(const Subspace& U, const Subspace& W);
Subspace image(const Subspace& U, const Matrix& g);
Subspace fixed_space(const Matrix& g);
Subspace moved_space(const Matrix& g);
Matrix restrict(const Matrix& g, const Subspace& U);
// basis change with U's echelon rows first, completed by unit vectors
Matrix adapted_basis(const Subspace& U);

}  // namespace stingray
