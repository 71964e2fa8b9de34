#include "doctest.h"
#include "stingray/gf.hpp"
#include "stingray/linalg.hpp"

using namespace stingray;

namespace {

// all monic polynomials of degree exactly n over F, by index
Poly nth_monic(const FieldPtr& F, unsigned n, uint64_t idx) {
    std::vector<Elem> c(n + 1);
    for (unsigned i = 0; i < n; ++i) {
        c[i] = Elem(idx % F->size());
        idx /= F->size();
    }
    c[n] = 1;
    return Poly(F, c);
}

bool irreducible_by_trial_division(const Poly& f) {
    const FieldPtr& F = f.F;
    for (unsigned k = 1; 2 * k <= unsigned(f.deg()); ++k) {
        uint64_t count = 1;
        for (unsigned i = 0; i < k; ++i) count *= F->size();
        for (uint64_t idx = 0; idx < count; ++idx)
            if (poly_mod(f, nth_monic(F, k, idx)).is_zero()) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("field creation and defining polynomials") {
    auto F2 = Field::create(2, 1);
    CHECK(F2->size() == 2);
    CHECK(F2->defining_poly() == std::vector<unsigned>{0, 1});
    auto F4 = Field::create(2, 2);
    CHECK(F4->defining_poly() == std::vector<unsigned>{1, 1, 1});
    auto F9 = Field::create(3, 1, 2);
    CHECK(F9->size() == 9);
    CHECK(F9->q() == 3);
    CHECK(F9->u() == 2);
    auto F8 = Field::create(2, 3);
    CHECK(F8->defining_poly() == std::vector<unsigned>{1, 1, 0, 1});
    CHECK(Field::create(2, 2) == F4);
    CHECK_THROWS_AS(Field::create(4, 1), std::invalid_argument);
    CHECK_THROWS_AS(Field::create(2, 0), std::invalid_argument);
}

TEST_CASE("field axioms on small fields") {
    for (auto [p, a, u] : {std::tuple{2u, 1u, 1u}, {2u, 2u, 1u}, {3u, 1u, 2u}, {5u, 1u, 1u}, {3u, 2u, 1u}, {2u, 3u, 2u}}) {
        auto F = Field::create(p, a, u);
        const uint32_t Q = F->size();
        for (Elem x = 0; x < Q; ++x) {
            CHECK(F->add(x, F->neg(x)) == 0);
            if (x) CHECK(F->mul(x, F->inv(x)) == 1);
            CHECK(F->conj(F->conj(x)) == x);
            for (Elem y = 0; y < Q; y += 1 + Q / 7) {
                CHECK(F->add(x, y) == F->add(y, x));
                CHECK(F->mul(x, y) == F->mul(y, x));
                for (Elem z = 0; z < Q; z += 1 + Q / 5)
                    CHECK(F->mul(x, F->add(y, z)) == F->add(F->mul(x, y), F->mul(x, z)));
            }
            // conj is a field automorphism fixing GF(q)
            if (u == 2) CHECK(F->conj(F->mul(x, 3 % Q)) == F->mul(F->conj(x), F->conj(3 % Q)));
        }
    }
}

TEST_CASE("is_irreducible examples") {
    auto F2 = Field::create(2, 1);
    CHECK(is_irreducible(Poly(F2, {1, 1, 1})));
    CHECK_FALSE(is_irreducible(Poly(F2, {1, 0, 1})));
    CHECK(is_irreducible(Poly(F2, {1, 1, 0, 0, 1})));
    CHECK_THROWS_AS(is_irreducible(Poly(F2)), std::invalid_argument);
}

TEST_CASE("is_irreducible agrees with trial division up to degree 6") {
    for (unsigned p : {2u, 3u}) {
        auto F = Field::create(p, 1);
        for (unsigned n = 1; n <= 6; ++n) {
            uint64_t count = 1;
            for (unsigned i = 0; i < n; ++i) count *= p;
            unsigned agree = 0;
            for (uint64_t idx = 0; idx < count; ++idx) {
                Poly f = nth_monic(F, n, idx);
                agree += is_irreducible(f) == irreducible_by_trial_division(f);
            }
            CHECK(agree == count);
        }
    }
}

TEST_CASE("polynomial factorization reconstructs the input") {
    Rng rng(7);
    for (auto [p, a] : {std::pair{2u, 1u}, {3u, 1u}, {2u, 2u}, {5u, 1u}, {3u, 2u}}) {
        auto F = Field::create(p, a);
        for (int trial = 0; trial < 40; ++trial) {
            unsigned n = 1 + unsigned(rng.below(14));
            Poly f = nth_monic(F, n, rng.next());
            // force some repeated factors
            if (trial % 3 == 0) f = poly_mul(f, poly_mul(f, Poly(F, {1, 1})));
            auto fac = factor_poly(f);
            Poly prod = Poly::constant(F, 1);
            for (auto& pf : fac) {
                CHECK(is_irreducible(pf.f));
                CHECK(pf.f.lead() == 1);
                for (unsigned k = 0; k < pf.mult; ++k) prod = poly_mul(prod, pf.f);
            }
            CHECK(prod == f);
        }
    }
}

TEST_CASE("factor_integer") {
    CHECK(factor_integer(1).empty());
    CHECK(factor_integer(63) == Factorization{{3, 2}, {7, 1}});
    CHECK(factor_integer(1023) == Factorization{{3, 1}, {11, 1}, {31, 1}});
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        BigInt n = BigInt(std::to_string(1 + rng.below(1000000000)));
        auto f = factor_integer(n);
        CHECK(factorization_value(f) == n);
        for (auto& [pr, k] : f) CHECK(is_prime(pr));
    }
    // composite with two factors above 10^6 exercises Pollard rho
    BigInt big = BigInt("1000003") * BigInt("1000033") * BigInt("999983");
    auto f = factor_integer(big);
    CHECK(f.size() == 3);
    CHECK(factorization_value(f) == big);
    CHECK(factorization_value(factor_integer(pow_big(2, 64) - 1)) == pow_big(2, 64) - 1);
}

TEST_CASE("ppd_set examples") {
    CHECK(ppd_set(2, 6).empty());
    CHECK(ppd_set(7, 2).empty());
    CHECK(ppd_set(2, 4) == std::vector<BigInt>{5});
    CHECK(ppd_set(3, 6) == std::vector<BigInt>{7});
    CHECK(ppd_set(3, 2).empty());
    CHECK(ppd_set(2, 1).empty());
    CHECK(ppd_set(4, 3) == std::vector<BigInt>{7});
}

TEST_CASE("ppd_set invariants") {
    for (unsigned Q : {2u, 3u, 4u, 5u, 7u, 8u, 9u}) {
        for (unsigned e = 1; e <= 12; ++e) {
            for (const BigInt& r : ppd_set(Q, e)) {
                CHECK(is_prime(r));
                CHECK((pow_big(Q, e) - 1) % r == 0);
                for (unsigned i = 1; i < e; ++i) CHECK((pow_big(Q, i) - 1) % r != 0);
                CHECK((r - 1) % e == 0);
                CHECK(r > e);
            }
        }
    }
}

TEST_CASE("element_order") {
    auto F4 = Field::create(2, 2);
    CHECK(element_order(Elem(1), *F4, Factorization{{3, 1}}) == 1);
    CHECK(element_order(F4->primitive(), *F4, Factorization{{3, 1}}) == 3);
    auto F2 = Field::create(2, 1);
    Matrix C = companion(Poly(F2, {1, 1, 0, 0, 1}));
    CHECK(element_order(C, factor_power_minus_one(2, 4)) == 15);
    CHECK(element_order(Matrix::identity(F2, 3), Factorization{{7, 1}}) == 1);
    CHECK_THROWS_AS(element_order(C, Factorization{{7, 1}}), std::invalid_argument);
    // property: x^ord = 1 and x^(ord/l) != 1
    auto F3 = Field::create(3, 1);
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        Matrix g(F3, 4, 4);
        do {
            for (size_t i = 0; i < 4; ++i)
                for (size_t j = 0; j < 4; ++j) g(i, j) = Elem(rng.below(3));
        } while (!is_invertible(g));
        Factorization exp_bound = factor_power_minus_one(3, 4);
        for (auto& [pr, k] : factor_power_minus_one(3, 3)) exp_bound[pr] = std::max(exp_bound[pr], k);
        exp_bound[3] = 2;
        exp_bound[2] = std::max(exp_bound[2], 4u);
        BigInt o = element_order(g, exp_bound);
        CHECK(mat_pow(g, o).is_identity());
        for (auto& [pr, k] : factor_integer(o)) CHECK_FALSE(mat_pow(g, o / pr).is_identity());
    }
}
