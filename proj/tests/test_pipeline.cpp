#include <cmath>

#include "doctest.h"
#include "stingray/counting.hpp"
#include "stingray/oracle.hpp"
#include "stingray/pipeline.hpp"

using namespace stingray;

TEST_CASE("wilson interval") {
    auto w = wilson95(0, 0);
    CHECK(w.first == 0);
    CHECK(w.second == 1);
    auto a = wilson95(50, 100);
    CHECK(a.first == doctest::Approx(0.4038).epsilon(1e-3));
    CHECK(a.second == doctest::Approx(0.5962).epsilon(1e-3));
    auto one = make_estimate(1, 1, 0);
    CHECK(one.wilson.second - one.wilson.first > 0.75);
    auto all = make_estimate(20, 20, 0);
    CHECK(all.wilson.first <= all.point);
    CHECK(all.point <= all.wilson.second);
    CHECK(all.standard_error() == 0);
    CHECK_THROWS_AS(make_estimate(3, 2, 0), std::invalid_argument);
}

TEST_CASE("parallel loop") {
    std::vector<int> v(1000, 0);
    parallel_for(v.size(), 4, [&](uint64_t i) { v[i] = int(i) * 2; });
    for (size_t i = 0; i < v.size(); ++i) CHECK(v[i] == int(i) * 2);
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](uint64_t i) {
                                     if (i == 7) throw std::runtime_error("x");
                                 }),
                    std::runtime_error);
    CHECK(resolve_threads(3) >= 1);
}

TEST_CASE("rho_gen on GL4(2) agrees with the exhaustive scan") {
    auto r = mc_rho_gen(GroupType::L, 4, 2, 2, 2, 2000, 11);
    CHECK(r.estimate.trials <= 2000);
    CHECK(r.estimate.trials > 1900);
    double exact = 9.0 / 64;
    double se = std::sqrt(exact * (1 - exact) / double(r.estimate.trials));
    CHECK(std::abs(r.estimate.point - exact) <= 4 * se);
    CHECK_FALSE(r.bound);  // d <= 8
    CHECK(r.unverified == 0);
    uint64_t total = 0;
    for (auto& [k, v] : r.by_verdict) total += v;
    CHECK(total == r.estimate.trials);
    CHECK(r.attempts == r.rejected + r.estimate.trials);
}

TEST_CASE("rho_gen is reproducible and thread independent") {
    auto a = mc_rho_gen(GroupType::L, 4, 2, 2, 2, 300, 5, 1);
    auto b = mc_rho_gen(GroupType::L, 4, 2, 2, 2, 300, 5, 3);
    CHECK(a.estimate.successes == b.estimate.successes);
    CHECK(a.attempts == b.attempts);
    for (size_t i = 0; i < a.trials.size(); ++i) CHECK(a.trials[i].verdict == b.trials[i].verdict);
    auto c = mc_rho_gen(GroupType::L, 4, 2, 2, 2, 300, 6, 1);
    CHECK(c.attempts != a.attempts);
}

TEST_CASE("rho_gen at d > 8 against the bound") {
    auto o = mc_rho_gen(GroupType::Ominus, 10, 2, 8, 2, 100, 1);
    REQUIRE(o.bound);
    CHECK(*o.bound == rho_gen_lower_bound(GroupType::Ominus, 10, 2, 8, 2));
    CHECK(o.bound->get_d() == doctest::Approx(0.98554).epsilon(1e-4));
    CHECK(o.pass);

    auto l = mc_rho_gen(GroupType::L, 9, 2, 5, 4, 200, 1);
    REQUIRE(l.bound);
    CHECK(*l.bound == rat_from_decimal("0.24828125"));
    CHECK(l.pass);
    REQUIRE(l.irreducible_bound);
    CHECK(l.irreducible_bound->get_d() > 0.998);
    CHECK(l.irreducible_duos > 0);
    CHECK(l.irreducible_pass);
    // every non-generating duo is logged with its witness
    for (auto& t : l.trials)
        if (t.accepted && t.tag == VerdictTag::ProperSubgroup) CHECK_FALSE(t.verdict.empty());
}

TEST_CASE("rho_gen preconditions") {
    CHECK_THROWS_AS(mc_rho_gen(GroupType::U, 10, 3, 7, 3, 10, 1), GuardError);
    CHECK_THROWS_AS(mc_rho_gen(GroupType::L, 9, 2, 5, 3, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(mc_rho_gen(GroupType::Sp, 4, 3, 2, 2, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(mc_rho_gen(GroupType::Sp, 8, 2, 5, 3, 10, 1), std::invalid_argument);
    auto z = mc_rho_gen(GroupType::L, 4, 2, 2, 2, 0, 1);
    CHECK(z.estimate.trials == 0);
}

TEST_CASE("embedding window") {
    auto w = embed_window(GroupType::L, 64);
    CHECK(w.alpha == 1);
    CHECK(w.n0 == 64);
    CHECK(w.lo == doctest::Approx(4.1589).epsilon(1e-4));
    CHECK(w.e_lo == 5);
    CHECK(w.e_hi == 8);
    auto s = embed_window(GroupType::Sp, 40);
    CHECK(s.alpha == 2);
    CHECK(s.n0 == 20);
    CHECK(s.e_lo == 6);
    CHECK(s.e_hi == 11);
    auto b2 = embed_window(GroupType::L, 64, 2.0);
    CHECK(b2.e_lo == 7);
    CHECK(b2.e_hi == 12);
}

TEST_CASE("embed L 64 2") {
    auto r = embed(GroupType::L, 64, 2, 60, 1);
    REQUIRE(r);
    CHECK(r->success);
    CHECK(r->verdict.tag == VerdictTag::ContainsOmega);
    CHECK(r->d > 2 * std::log(64.0));
    CHECK(r->d <= 4 * std::log(64.0));
    CHECK(r->fixed_dim == 64 - r->d);
    CHECK(r->samples <= 60);
    REQUIRE(r->duo);
    CHECK(r->duo->cert1.e + r->duo->cert2.e == r->d);
    auto again = embed(GroupType::L, 64, 2, 60, 1);
    REQUIRE(again);
    CHECK(again->samples == r->samples);
    CHECK(again->duo->cert1.element == r->duo->cert1.element);
    CHECK_FALSE(embed(GroupType::L, 64, 2, 0, 1));
    CHECK_THROWS_AS(embed(GroupType::L, 8, 2, 10, 1), std::invalid_argument);
}

TEST_CASE("embed Sp 40 2 lands in an orthogonal group") {
    auto r = embed(GroupType::Sp, 40, 2, 80, 2);
    REQUIRE(r);
    CHECK(r->success);
    CHECK(r->verdict.tag == VerdictTag::OrthogonalInSp);
    CHECK((r->target == "O+" || r->target == "O-"));
    CHECK(r->fixed_dim == 40 - r->d);
}

TEST_CASE("single pair success rates") {
    auto a = embed_success_rate(GroupType::L, 16, 2, 2, 120, 3);
    auto b = embed_success_rate(GroupType::L, 64, 2, 2, 120, 3);
    CHECK(a.successes > 0);
    CHECK(b.successes > 0);
    auto a4 = embed_success_rate(GroupType::L, 16, 2, 2, 120, 3, 4);
    CHECK(a4.successes == a.successes);
    auto one = embed_success_rate(GroupType::L, 16, 2, 2, 1, 3);
    CHECK(one.wilson.second - one.wilson.first > 0.75);
}
