#include <cmath>
#include <map>
#include <sstream>

#include "doctest.h"
#include "stingray/classical.hpp"

using namespace stingray;

namespace {

Matrix from_bits(const FieldPtr& F2, size_t n, uint64_t bits) {
    Matrix m(F2, n, n);
    for (size_t i = 0; i < n * n; ++i) m(i / n, i % n) = (bits >> i) & 1;
    return m;
}

uint64_t to_bits(const Matrix& m) {
    uint64_t b = 0;
    for (size_t i = 0; i < m.rows() * m.cols(); ++i) b |= uint64_t(m(i / m.cols(), i % m.cols())) << i;
    return b;
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

TEST_CASE("group orders against exhaustive counts") {
    CHECK(group_order(GroupType::L, 1, 7) == 6);
    CHECK(group_order(GroupType::L, 4, 2) == 20160);
    CHECK(group_order(GroupType::Sp, 4, 2) == 720);
    auto F2 = Field::create(2, 1);
    Form sp = standard_form(GroupType::Sp, 4, 2);
    uint64_t inv = 0, pres = 0;
    for (uint64_t b = 0; b < (1u << 16); ++b) {
        Matrix m = from_bits(F2, 4, b);
        if (!is_invertible(m)) continue;
        ++inv;
        pres += preserves_form(m, sp);
    }
    CHECK(inv == 20160);
    CHECK(pres == 720);
    CHECK_THROWS_AS(group_order(GroupType::Sp, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(group_order(GroupType::Ocirc, 5, 2), std::invalid_argument);
    CHECK_THROWS_AS(group_order(GroupType::L, 3, 6), std::invalid_argument);
}

TEST_CASE("standard forms") {
    auto sp = standard_form(GroupType::Sp, 2, 5);
    CHECK(sp.gram(0, 1) == 1);
    CHECK(sp.gram(1, 0) == 4);
    CHECK(sp.gram(0, 0) == 0);
    auto op = standard_form(GroupType::Oplus, 2, 3);
    CHECK(op.Q({1, 0}) == 0);
    CHECK(op.Q({0, 1}) == 0);
    CHECK(op.Q({1, 1}) == 1);
    auto om = standard_form(GroupType::Ominus, 2, 2);
    unsigned singular = 0;
    for (Vec v : {Vec{1, 0}, Vec{0, 1}, Vec{1, 1}}) singular += om.Q(v) == 0;
    CHECK(singular == 0);
    CHECK(om.Q({1, 1}) == 1);  // x^2 + xy + y^2
    auto u = standard_form(GroupType::U, 3, 2);
    CHECK(u.gram == Matrix::identity(u.F, 3));
    CHECK(u.F->size() == 4);
}

TEST_CASE("generators give the right group orders for q^n <= 2^16") {
    for (auto t : {GroupType::L, GroupType::U, GroupType::Sp, GroupType::Oplus, GroupType::Ominus, GroupType::Ocirc})
        for (uint64_t q : {2, 3, 4, 5, 7, 8, 9, 11, 13, 16})
            for (size_t n = 1; n <= 16; ++n) {
                try {
                    check_parameters(t, n, q);
                } catch (const std::invalid_argument&) {
                    continue;
                }
                double qn = std::pow(double(q), double(n));
                double Qn = t == GroupType::U ? qn * qn : qn;
                if (qn > 65536 || Qn > double(MatrixBSGS::kMaxPoints)) continue;
                auto G = ClassicalGroup::create(t, n, q);
                INFO(G.describe());
                for (auto& g : G.gens) CHECK(preserves_form(g, G.form));
                for (auto& g : G.omega_gens) {
                    CHECK(preserves_form(g, G.form));
                    CHECK(in_omega(g, G));
                }
                CHECK(schreier_sims_order(G.gens, G.F, n) == G.order());
                CHECK(schreier_sims_order(G.omega_gens, G.F, n) == G.omega_order());
            }
}

TEST_CASE("omega membership agrees with Schreier-Sims on small groups") {
    for (auto [t, n, q] : {std::tuple{GroupType::Oplus, 4u, 3u}, {GroupType::Ominus, 4u, 3u}, {GroupType::Ocirc, 3u, 5u},
                           {GroupType::Oplus, 4u, 2u}, {GroupType::Ominus, 6u, 2u}, {GroupType::U, 3u, 3u}, {GroupType::L, 3u, 4u}}) {
        auto G = ClassicalGroup::create(t, n, q);
        INFO(G.describe());
        auto omega = MatrixBSGS::build(G.omega_gens, G.F, n);
        REQUIRE(omega.order() == G.omega_order());
        Sampler S(G, Sampler::Mode::Full, 17);
        unsigned inside = 0;
        for (int i = 0; i < 200; ++i) {
            Matrix g = S.sample();
            CHECK(preserves_form(g, G.form));
            bool mem = omega.contains(g);
            CHECK(mem == in_omega(g, G));
            inside += mem;
        }
        CHECK(inside > 0);
        CHECK(inside < 200);
        Sampler So(G, Sampler::Mode::Omega, 18);
        for (int i = 0; i < 50; ++i) CHECK(omega.contains(So.sample()));
    }
}

TEST_CASE("subspace_type examples") {
    auto op = standard_form(GroupType::Oplus, 4, 2);
    auto F2 = op.F;
    CHECK(subspace_type(unit_span(F2, 4, {0, 1}), op) == SubspaceType::Plus);
    CHECK(subspace_type(unit_span(F2, 4, {0, 2}), op) == SubspaceType::Degenerate);
    auto sp = standard_form(GroupType::Sp, 4, 2);
    CHECK(subspace_type(unit_span(F2, 4, {0}), sp) == SubspaceType::Degenerate);
    CHECK(subspace_type(unit_span(F2, 4, {2, 3}), sp) == SubspaceType::Nondegenerate);
    auto om = standard_form(GroupType::Ominus, 6, 2);
    CHECK(subspace_type(Subspace::full(F2, 6), om) == SubspaceType::Minus);
    CHECK(subspace_type(unit_span(F2, 6, {4, 5}), om) == SubspaceType::Minus);
    CHECK(subspace_type(unit_span(F2, 6, {0, 1, 2}), om) == SubspaceType::Degenerate);
    CHECK(subspace_type(unit_span(F2, 6, {0, 1, 4}), om) == SubspaceType::Circ);  // polar radical spanned by a nonsingular vector
    auto oc = standard_form(GroupType::Ocirc, 5, 3);
    CHECK(subspace_type(unit_span(oc.F, 5, {0, 1, 4}), oc) == SubspaceType::Circ);
    CHECK_THROWS_AS(subspace_type(Subspace(F2, 4), op), std::invalid_argument);
    CHECK_THROWS_AS(subspace_type(unit_span(F2, 4, {0}), standard_form(GroupType::L, 4, 2)), std::invalid_argument);
}

TEST_CASE("subspace_type: discriminant and Arf agree with singular-vector counts") {
    Rng rng(31);
    for (auto [t, n, q] : {std::tuple{GroupType::Oplus, 8u, 2u}, {GroupType::Ominus, 8u, 2u}, {GroupType::Oplus, 6u, 3u},
                           {GroupType::Ominus, 6u, 3u}, {GroupType::Ocirc, 7u, 3u}, {GroupType::Ominus, 6u, 4u}, {GroupType::Oplus, 4u, 5u}}) {
        Form f = standard_form(t, n, q);
        unsigned checked = 0;
        for (int i = 0; i < 300; ++i) {
            Subspace U = random_subspace(f.F, n, 2 * (1 + rng.below(n / 2)), rng);
            if (U.dim() % 2) continue;
            auto by_count = subspace_type_by_count(U, f);
            CHECK(subspace_type(U, f) == by_count);
            if (by_count == SubspaceType::Degenerate) continue;
            ++checked;
            CHECK(structural_type(restrict_form(f, U)) == by_count);
        }
        CHECK(checked > 20);
    }
}

TEST_CASE("perp") {
    Rng rng(3);
    for (auto [t, n, q] : {std::tuple{GroupType::Sp, 6u, 3u}, {GroupType::U, 4u, 2u}, {GroupType::Oplus, 6u, 2u}, {GroupType::Ominus, 6u, 3u}}) {
        Form f = standard_form(t, n, q);
        CHECK(perp(Subspace::full(f.F, n), f).dim() == 0);
        for (int i = 0; i < 50; ++i) {
            Subspace U = random_subspace(f.F, n, 1 + rng.below(n - 1), rng);
            Subspace P = perp(U, f);
            CHECK(P.dim() + U.dim() == n);
            // odd-dimensional subspaces in even characteristic keep a polar radical
            bool polar_rad = f.orthogonal() && f.F->p() == 2 && U.dim() % 2;
            if (subspace_type(U, f) != SubspaceType::Degenerate && !polar_rad) {
                CHECK(perp(P, f) == U);
                CHECK(is_direct_sum(U, P));
            }
        }
    }
    CHECK_THROWS_AS(perp(Subspace::full(Field::create(2, 1), 2), standard_form(GroupType::L, 2, 2)), std::invalid_argument);
}

TEST_CASE("invariant_quadratic_form") {
    auto sp = standard_form(GroupType::Sp, 4, 2);
    auto Om = ClassicalGroup::create(GroupType::Ominus, 4, 2);
    REQUIRE(Om.form.gram == sp.gram);
    auto f = invariant_quadratic_form(Om.gens, sp);
    REQUIRE(f.has_value());
    CHECK(f->type == GroupType::Ominus);
    CHECK(subspace_type(Subspace::full(sp.F, 4), *f) == SubspaceType::Minus);
    CHECK(f->quad == Om.form.quad);
    for (auto& g : Om.gens) CHECK(preserves_form(g, *f));
    auto Sp = ClassicalGroup::create(GroupType::Sp, 4, 2);
    CHECK_FALSE(invariant_quadratic_form(Sp.gens, sp).has_value());
    auto empty = invariant_quadratic_form({}, sp);
    REQUIRE(empty.has_value());
    CHECK(empty->gram == sp.gram);
    CHECK(empty->type == GroupType::Oplus);
    CHECK_THROWS_AS(invariant_quadratic_form({}, standard_form(GroupType::Sp, 4, 3)), std::invalid_argument);
    // over GF(4) as well
    auto sp4 = standard_form(GroupType::Sp, 6, 4);
    auto Op = ClassicalGroup::create(GroupType::Oplus, 6, 4);
    auto g = invariant_quadratic_form(Op.gens, sp4);
    REQUIRE(g.has_value());
    CHECK(g->type == GroupType::Oplus);
    CHECK(g->quad == Op.form.quad);
}

TEST_CASE("generator tables round trip") {
    auto G = ClassicalGroup::create(GroupType::U, 3, 3);
    std::stringstream ss;
    write_generators(ss, G);
    auto tabs = read_generators(ss);
    REQUIRE(tabs.size() == 2);
    CHECK(tabs[0].role == "full");
    CHECK(tabs[0].type == GroupType::U);
    CHECK(tabs[0].mats == G.gens);
    CHECK(tabs[1].mats == G.omega_gens);
    std::stringstream bad("Sp 4 2 full\n1 0 0 0\n0 1 0\n");
    CHECK_THROWS_AS(read_generators(bad), std::invalid_argument);
}

TEST_CASE("exact GL sampler is uniform on GL4(2)") {
    auto G = ClassicalGroup::create(GroupType::L, 4, 2);
    Sampler S(G, Sampler::Mode::Full, 2024);
    std::map<uint64_t, unsigned> freq;
    const unsigned per = 50;
    for (unsigned i = 0; i < 20160 * per; ++i) ++freq[to_bits(S.sample_exact())];
    CHECK(freq.size() == 20160);
    double sigma = std::sqrt(double(per));
    unsigned outside = 0;
    for (auto& [k, c] : freq) outside += std::abs(double(c) - per) > 5 * sigma;
    CHECK(outside == 0);
}

TEST_CASE("product replacement on Sp4(2)") {
    auto G = ClassicalGroup::create(GroupType::Sp, 4, 2);
    Sampler S(G, Sampler::Mode::Full, 99);
    std::map<uint64_t, unsigned> freq;
    const unsigned per = 50;
    for (unsigned i = 0; i < 720 * per; ++i) {
        Matrix g = S.sample();
        if (i < 2000) CHECK(preserves_form(g, G.form));
        ++freq[to_bits(g)];
    }
    CHECK(freq.size() == 720);
    // chi-square statistic within 5 sigma of its mean (df = 719)
    double chi = 0;
    for (auto& [k, c] : freq) chi += (double(c) - per) * (double(c) - per) / per;
    CHECK(std::abs(chi - 719) < 5 * std::sqrt(2 * 719.0));
    // determinism
    Sampler A(G, Sampler::Mode::Full, 5), B(G, Sampler::Mode::Full, 5);
    for (int i = 0; i < 20; ++i) CHECK(A.sample() == B.sample());
}
