#include <cmath>
#include <map>

#include "doctest.h"
#include "stingray/altgrp.hpp"
#include "stingray/counting.hpp"

using namespace stingray;

namespace {

// 1-based cycles to a 0-based permutation of degree n
Perm from_cycles(size_t n, const std::vector<std::vector<uint32_t>>& cs) {
    Perm g = perm_identity(n);
    for (auto& c : cs)
        for (size_t i = 0; i < c.size(); ++i) g[c[i] - 1] = c[(i + 1) % c.size()] - 1;
    return g;
}

CycleCert cert(size_t n, std::vector<uint32_t> c) {
    auto s = pcycle_scan(from_cycles(n, {c}), unsigned(c.size()), unsigned(c.size()));
    REQUIRE(s);
    return *s;
}

bool within(const MCEstimate& m, const Rat& exact, double sigmas) {
    double e = exact.get_d();
    double se = std::sqrt(e * (1 - e) / double(m.trials));
    return std::abs(m.point - e) <= sigmas * se;
}

}  // namespace

TEST_CASE("cycles and parity") {
    Perm g = from_cycles(10, {{1, 2, 3, 4, 5}, {6, 7}, {8, 9, 10}});
    CHECK(cycles(g).size() == 3);
    CHECK_FALSE(is_even(g));
    CHECK(is_even(from_cycles(5, {{1, 2, 3}})));
    CHECK(is_permutation(g));
    CHECK_FALSE(is_permutation(Perm{0, 0, 1}));
}

TEST_CASE("p-cycle scan") {
    CHECK_FALSE(pcycle_scan(perm_identity(10), 3, 7));
    Perm g = from_cycles(10, {{1, 2, 3, 4, 5}, {6, 7}, {8, 9, 10}});
    auto c = pcycle_scan(g, 5, 5);
    REQUIRE(c);
    CHECK(c->p == 5);
    CHECK(c->power == 6);
    CHECK(c->support == std::vector<uint32_t>{0, 1, 2, 3, 4});  // 6 = 1 mod 5
    CHECK(c->perm == perm_pow(g, 6));
    CHECK_FALSE(pcycle_scan(from_cycles(10, {{1, 2, 3, 4, 5}, {6, 7, 8, 9, 10}}), 5, 5));
    // a 3-cycle next to a 6-cycle does not count: 3 divides 6
    CHECK_FALSE(pcycle_scan(from_cycles(9, {{1, 2, 3}, {4, 5, 6, 7, 8, 9}}), 3, 3));
    // smallest prime first
    auto d = pcycle_scan(from_cycles(12, {{1, 2, 3}, {4, 5, 6, 7, 8}}), 3, 7);
    REQUIRE(d);
    CHECK(d->p == 3);
    CHECK_THROWS_AS(pcycle_scan(g, 2, 5), std::invalid_argument);
    CHECK_THROWS_AS(pcycle_scan(g, 5, 4), std::invalid_argument);
}

TEST_CASE("natural embedding check") {
    // 5-cycle and 7-cycle on 11 points sharing one point
    auto g = cert(11, {1, 2, 3, 4, 5});
    auto h = cert(11, {5, 6, 7, 8, 9, 10, 11});
    auto v = natural_embed_check(g, h);
    CHECK(v.tag == AltVerdictTag::Ak);
    CHECK(v.k == 11);
    CHECK(v.embedding_hypotheses);
    CHECK(v.order == 19958400);
    CHECK(v.name() == "A11");

    auto a = cert(8, {1, 2, 3});
    auto b = cert(8, {4, 5, 6, 7, 8});
    auto w = natural_embed_check(a, b);
    CHECK(w.tag == AltVerdictTag::CpxCr);
    CHECK(w.order == 15);
    CHECK(w.k == 8);

    CycleCert bad = a;
    bad.p = 5;
    CHECK_THROWS_AS(natural_embed_check(bad, b), std::invalid_argument);
}

TEST_CASE("two 7-cycles on 9 points can generate PSL(2,8)") {
    auto g = cert(9, {1, 2, 3, 4, 5, 6, 7});
    Rng rng(7);
    bool found = false;
    for (int t = 0; t < 20000 && !found; ++t) {
        Perm x = random_alt(9, rng);
        Perm hx = perm_mul(perm_mul(perm_inv(x), g.perm), x);
        CycleCert h{hx, 7, cycles(hx).at(0), 1};
        auto v = natural_embed_check(g, h);
        if (v.k != 9) continue;
        CHECK_FALSE(v.embedding_hypotheses);  // k = p + 2 < p + 3
        if (v.tag == AltVerdictTag::Other && v.order == 504) found = true;
    }
    CHECK(found);
}

TEST_CASE("disjoint supports never give A_k") {
    Rng rng(11);
    for (unsigned n : {10u, 13u, 16u}) {
        for (int t = 0; t < 50; ++t) {
            Perm x = random_alt(n, rng);
            auto g = cert(n, {1, 2, 3});
            auto h = cert(n, {4, 5, 6, 7, 8, 9, 10});
            Perm gx = perm_mul(perm_mul(perm_inv(x), g.perm), x);
            Perm hx = perm_mul(perm_mul(perm_inv(x), h.perm), x);
            auto v = natural_embed_check(CycleCert{gx, 3, cycles(gx).at(0), 1}, CycleCert{hx, 7, cycles(hx).at(0), 1});
            CHECK(v.k == 10);
            CHECK(v.tag == AltVerdictTag::CpxCr);
        }
    }
}

TEST_CASE("uniform alternating sampler") {
    Rng rng(3);
    std::map<Perm, int> seen;
    for (int t = 0; t < 12000; ++t) {
        Perm x = random_alt(4, rng);
        CHECK(is_even(x));
        ++seen[x];
    }
    CHECK(seen.size() == 12);
    for (auto& [x, c] : seen) CHECK(std::abs(c - 1000) < 150);
}

TEST_CASE("step 3 search") {
    auto g = cert(30, {1, 2, 3});
    auto h = cert(30, {4, 5, 6, 7, 8});
    auto s = step3_search(g, h, 100, 1);
    REQUIRE(s);
    CHECK(s->attempts <= 100);
    CHECK(s->verdict.tag == AltVerdictTag::Ak);
    CHECK(s->verdict.k == 7);
    CHECK(s->verdict.order == 2520);
    CHECK_FALSE(step3_search(g, h, 0, 1));
    auto g3 = cert(20, {1, 2, 3}), h3 = cert(20, {4, 5, 6});
    CHECK_THROWS_AS(step3_search(g3, h3, 10, 1), std::invalid_argument);
    auto g21 = cert(21, {1, 2, 3}), h21 = cert(21, {4, 5, 6});
    auto s21 = step3_search(g21, h21, 200, 2);
    REQUIRE(s21);
    CHECK(s21->verdict.tag == AltVerdictTag::Ak);
    CHECK(s21->verdict.k == 5);
    CHECK_THROWS_AS(step3_search(g, cert(30, {3, 9, 10}), 10, 1), std::invalid_argument);
}

TEST_CASE("overlap proportion, exhaustive") {
    CHECK(exhaustive_overlap(7, 3, 3) == Rat(18, 35));
    for (unsigned n = 7; n <= 9; ++n)
        for (unsigned p : {3u, 5u, 7u})
            for (unsigned r : {3u, 5u, 7u}) {
                if (p > r || p + r >= n) continue;
                CHECK(exhaustive_overlap(n, p, r) == alt_overlap_proportion(n, p, r));
            }
    CHECK_THROWS_AS(exhaustive_overlap(11, 3, 5), std::invalid_argument);
}

TEST_CASE("overlap proportion, Monte Carlo") {
    auto a = mc_overlap(7, 3, 3, 100000, 1);
    CHECK(within(a, Rat(18, 35), 4));
    CHECK(a.wilson.first <= a.point);
    CHECK(a.point <= a.wilson.second);
    auto b = mc_overlap(30, 3, 5, 100000, 2);
    CHECK(within(b, Rat(75, 203), 4));
    auto z = mc_overlap(7, 3, 3, 0, 1);
    CHECK(z.wilson.first == 0);
    CHECK(z.wilson.second == 1);
    // same seed, any thread count
    auto c1 = mc_overlap(12, 3, 5, 5000, 9, 1);
    auto c4 = mc_overlap(12, 3, 5, 5000, 9, 4);
    CHECK(c1.successes == c4.successes);
    CHECK_THROWS_AS(mc_overlap(7, 3, 5, 10, 1), std::invalid_argument);
}

TEST_CASE("prime window and the full procedure") {
    auto [lo, hi] = alt_prime_window(64);
    CHECK(lo == 5);
    CHECK(hi == 7);
    auto w20 = alt_prime_window(20);
    CHECK(w20.first == 3);
    auto r = alt_embed(200, 400, 5);
    CHECK(r.success);
    REQUIRE(r.h);
    CHECK(r.verdict.tag == AltVerdictTag::Ak);
    CHECK(r.verdict.k <= r.g->p + r.h->p - 1);
    auto r2 = alt_embed(200, 400, 5);
    CHECK(r2.samples == r.samples);
    CHECK(r2.conjugations == r.conjugations);
    CHECK_FALSE(alt_embed(200, 0, 5).success);
}
