#include "doctest.h"
#include "stingray/linalg.hpp"

using namespace stingray;

namespace {

Matrix random_invertible(const FieldPtr& F, size_t n, Rng& rng) {
    Matrix g(F, n, n);
    do {
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) g(i, j) = Elem(rng.below(F->size()));
    } while (!is_invertible(g));
    return g;
}

Subspace random_subspace(const FieldPtr& F, size_t d, size_t k, Rng& rng) {
    Matrix m(F, k, d);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < d; ++j) m(i, j) = Elem(rng.below(F->size()));
    return Subspace::span(m);
}

Subspace unit_span(const FieldPtr& F, size_t d, std::vector<size_t> idx) {
    Matrix m(F, idx.size(), d);
    for (size_t i = 0; i < idx.size(); ++i) m(i, idx[i]) = 1;
    return Subspace::span(m);
}

}  // namespace

TEST_CASE("charpoly examples") {
    auto F2 = Field::create(2, 1);
    Poly t1(F2, {1, 1});
    CHECK(charpoly(Matrix::identity(F2, 3)) == poly_mul(t1, poly_mul(t1, t1)));
    Poly f(F2, {1, 1, 1});
    CHECK(charpoly(companion(f)) == f);
    Matrix g = block_diag(companion(f), Matrix::identity(F2, 2));
    CHECK(charpoly(g) == poly_mul(f, poly_mul(t1, t1)));
}

TEST_CASE("fixed and moved spaces") {
    auto F2 = Field::create(2, 1);
    auto I = Matrix::identity(F2, 4);
    CHECK(fixed_space(I).dim() == 4);
    CHECK(moved_space(I).dim() == 0);
    Matrix g = block_diag(companion(Poly(F2, {1, 1, 1})), Matrix::identity(F2, 2));
    CHECK(fixed_space(g) == unit_span(F2, 4, {2, 3}));
    CHECK(moved_space(g) == unit_span(F2, 4, {0, 1}));
    Matrix t = Matrix::identity(F2, 3);
    t(0, 2) = 1;
    CHECK(fixed_space(t).dim() == 2);
    CHECK(moved_space(t).dim() == 1);
    CHECK(fixed_space(t).contains(moved_space(t)));
    CHECK_FALSE(is_direct_sum(moved_space(t), fixed_space(t)));
}

TEST_CASE("is_direct_sum") {
    auto F2 = Field::create(2, 1);
    CHECK(is_direct_sum(unit_span(F2, 4, {0, 1}), unit_span(F2, 4, {2, 3})));
    CHECK_FALSE(is_direct_sum(unit_span(F2, 3, {0}), unit_span(F2, 3, {0, 1})));
    CHECK_THROWS_AS(is_direct_sum(unit_span(F2, 3, {0}), unit_span(F2, 4, {0})), std::invalid_argument);
    Rng rng(5);
    auto F3 = Field::create(3, 1);
    for (int i = 0; i < 1000; ++i) {
        const FieldPtr& F = (i % 2) ? F2 : F3;
        size_t d = 2 + rng.below(5), k = 1 + rng.below(d - 1);
        Subspace U = random_subspace(F, d, k, rng), W = random_subspace(F, d, d - k, rng);
        bool oracle = U.dim() + W.dim() == d && rank(stack(U.basis(), W.basis())) == d;
        CHECK(is_direct_sum(U, W) == oracle);
        CHECK(subspace_intersection(U, W).dim() + subspace_sum(U, W).dim() == U.dim() + W.dim());
    }
}

TEST_CASE("restrict") {
    auto F2 = Field::create(2, 1);
    Subspace U = unit_span(F2, 4, {0, 1});
    CHECK(restrict(Matrix::identity(F2, 4), U).is_identity());
    Poly f(F2, {1, 1, 1});
    Matrix g = block_diag(companion(f), Matrix::identity(F2, 2));
    CHECK(restrict(g, U) == companion(f));
    Matrix h = Matrix::identity(F2, 4);
    h(0, 3) = 1;
    CHECK_THROWS_AS(restrict(h, unit_span(F2, 4, {0})), std::invalid_argument);
    // restrict respects multiplication on a common invariant subspace
    Rng rng(9);
    auto F3 = Field::create(3, 1);
    for (int i = 0; i < 50; ++i) {
        Matrix a = random_invertible(F3, 2, rng), b = random_invertible(F3, 3, rng);
        Matrix c = random_invertible(F3, 2, rng), d = random_invertible(F3, 3, rng);
        Matrix x = random_invertible(F3, 5, rng), xi = inverse(x);
        Matrix g1 = xi * block_diag(a, b) * x, g2 = xi * block_diag(c, d) * x;
        Matrix sel(F3, 2, 5);
        sel(0, 0) = sel(1, 1) = 1;
        Subspace W = Subspace::span(sel * x);
        CHECK(restrict(g1 * g2, W) == restrict(g1, W) * restrict(g2, W));
        CHECK(charpoly(restrict(g1, W)) == charpoly(a));
    }
}

TEST_CASE("linear algebra invariants on random matrices") {
    Rng rng(21);
    for (auto F : {Field::create(2, 1), Field::create(3, 1), Field::create(2, 2), Field::create(3, 1, 2)}) {
        for (int i = 0; i < 40; ++i) {
            size_t d = 1 + rng.below(7);
            Matrix g = random_invertible(F, d, rng);
            Matrix I = Matrix::identity(F, d);
            CHECK(fixed_space(g).dim() + rank(g - I) == d);
            CHECK((g * inverse(g)).is_identity());
            Matrix x = random_invertible(F, d, rng);
            CHECK(charpoly(g) == charpoly(inverse(x) * g * x));
            CHECK(charpoly(g).deg() == int(d));
            CHECK(mat_pow(g, 0).is_identity());
            CHECK(mat_pow(g, 1) == g);
            CHECK(mat_pow(g, 5) == g * g * g * g * g);
            CHECK((mat_pow(g, -2) * g * g).is_identity());
            CHECK(determinant(g * x) == F->mul(determinant(g), determinant(x)));
            // block structure over (moved, fixed) iff direct sum
            Subspace M = moved_space(g), Fx = fixed_space(g);
            bool ds = is_direct_sum(M, Fx);
            bool blocks = false;
            if (M.dim() + Fx.dim() == d) {
                Matrix B = stack(M.basis(), Fx.basis());
                if (is_invertible(B)) {
                    Matrix h = B * g * inverse(B);
                    blocks = true;
                    for (size_t r = 0; r < d; ++r)
                        for (size_t c = 0; c < d; ++c) {
                            bool top = r < M.dim(), left = c < M.dim();
                            if (top != left && h(r, c) != 0) blocks = false;
                            if (!top && !left && h(r, c) != (r == c ? 1u : 0u)) blocks = false;
                        }
                }
            }
            CHECK(ds == blocks);
        }
    }
}

TEST_CASE("mat_pow order property in GL4(3)") {
    auto F3 = Field::create(3, 1);
    Rng rng(4);
    Factorization bound = factor_power_minus_one(3, 4);
    for (auto& [p, k] : factor_power_minus_one(3, 3)) bound[p] = std::max(bound[p], k);
    bound[3] = 2;
    for (int i = 0; i < 100; ++i) {
        Matrix g = random_invertible(F3, 4, rng);
        BigInt o = element_order(g, bound);
        CHECK(mat_pow(g, o).is_identity());
    }
}

TEST_CASE("subspaces are canonical") {
    auto F3 = Field::create(3, 1);
    Rng rng(8);
    for (int i = 0; i < 100; ++i) {
        Subspace U = random_subspace(F3, 5, 3, rng);
        Matrix x = random_invertible(F3, U.dim(), rng);
        if (U.dim() == 0) continue;
        CHECK(Subspace::span(x * U.basis()) == U);
        for (size_t r = 0; r < U.dim(); ++r) CHECK(U.contains(U.basis().row_vec(r)));
        Matrix A = adapted_basis(U);
        CHECK(is_invertible(A));
    }
}
