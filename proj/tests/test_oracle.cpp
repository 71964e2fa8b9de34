#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "json.hpp"
#include "stingray/oracle.hpp"

using namespace stingray;

namespace {

Rat R(long a, long b = 1) {
    Rat r(a, b);
    r.canonicalize();
    return r;
}

std::string extra(const OracleResult& r, const std::string& key) {
    for (auto& [k, v] : r.extra)
        if (k == key) return v;
    return "";
}

}  // namespace

TEST_CASE("subspace enumeration") {
    auto F2 = Field::create(2, 1), F3 = Field::create(3, 1);
    CHECK(count_subspaces(F2, 4, 2) == 35);
    CHECK(count_subspaces(F2, 3, 1) == 7);
    CHECK(count_subspaces(F3, 2, 1) == 4);
    CHECK(count_subspaces(F2, 5, 0) == 1);
    CHECK(count_subspaces(F2, 5, 5) == 1);
    std::set<std::vector<Elem>> seen;
    size_t n = 0;
    enumerate_subspaces(F3, 4, 2, [&](const Matrix& B) {
        ++n;
        CHECK(rank(B) == 2);
        seen.insert(Subspace::span(B).basis().data());
    });
    CHECK(n == 130);
    CHECK(seen.size() == n);
    CHECK_THROWS_AS(enumerate_subspaces(F2, 30, 15, [](const Matrix&) {}), GuardError);
    CHECK_THROWS_AS(count_subspaces(F2, 2, 3), std::invalid_argument);
}

TEST_CASE("nondegenerate subspace counts") {
    CHECK(count_nondegenerate(GroupType::Sp, 4, 2, 2).value == 20);
    CHECK(count_nondegenerate(GroupType::L, 4, 2, 2).value == 35);
    CHECK(count_nondegenerate(GroupType::Sp, 4, 2, 4).value == 1);
    CHECK(count_nondegenerate(GroupType::Ominus, 6, 2, 2).value == 120);
    auto m = count_nondegenerate(GroupType::Oplus, 6, 2, 2, SubspaceType::Minus);
    CHECK(m.value == oracle_num_subspaces(GroupType::Oplus, 6, 2, 2).value);
    CHECK(m.enumerated == m.expected_universe);
    CHECK(extra(m, "filter") == subspace_type_name(SubspaceType::Minus));
    // singletons of the unitary 2-space over GF(4): 5 points, 3 isotropic
    CHECK(count_nondegenerate(GroupType::U, 2, 2, 1).value == 2);
    CHECK(count_nondegenerate(GroupType::U, 2, 2, 1, SubspaceType::Nondegenerate).value == 2);
}

TEST_CASE("complement pairs and k") {
    auto L = count_complement_pairs(GroupType::L, 4, 2, 2);
    CHECK(L.value == 560);
    auto S = count_complement_pairs(GroupType::Sp, 4, 2, 2);
    CHECK(S.value == 200);
    CHECK(*S.ratio == R(1, 2));
    CHECK(*S.ratio >= R(1, 4));
    CHECK(*S.ratio < 1);
    CHECK_THROWS(count_complement_pairs(GroupType::Sp, 2, 2, 1));
    // the graph method and the double loop agree where both apply
    auto O = count_complement_pairs(GroupType::Ominus, 6, 2, 2);
    CHECK(*O.ratio > R(1, 4));
    CHECK(*O.ratio < 1);
}

TEST_CASE("centralizers and class counts") {
    CHECK(oracle_centralizer_order(GroupType::L, 4, 2, 3).value == 7);
    CHECK(oracle_centralizer_order(GroupType::Sp, 4, 2, 2).value == 18);
    auto G = ClassicalGroup::create(GroupType::L, 4, 2);
    auto g = reference_stingray(G, 2);
    CHECK(g.U.dim() == 2);
    CHECK(g.F.dim() == 2);
    CHECK(exhaustive_class_count(G, g.U, g.F, 2, g.factor) == 2);
    CHECK(exhaustive_class_count(G, g.U, g.F, 2) == 2);
    CHECK(exhaustive_centralizer(G, g.element) == 18);
    auto C = commutant_basis(g.element);
    CHECK(C.size() == 6);  // GF(4) on U and M_2(GF(2)) on F
    for (auto& c : C) CHECK(c * g.element == g.element * c);
}

TEST_CASE("no stingray elements where the prime set is empty") {
    auto U = ClassicalGroup::create(GroupType::U, 4, 2);
    CHECK_THROWS_AS(reference_stingray(U, 3), std::invalid_argument);
    auto S = ClassicalGroup::create(GroupType::Sp, 4, 3);
    CHECK_THROWS_AS(reference_stingray(S, 2), std::invalid_argument);
    CHECK_THROWS(exhaustive_rho_gen(S, 2, 2));
}

TEST_CASE("exhaustive generation proportions") {
    auto G = ClassicalGroup::create(GroupType::L, 4, 2);
    auto r = exhaustive_rho_gen(G, 2, 2);
    CHECK(r.duos == 512);
    CHECK(r.generating == 72);
    CHECK(r.rho_gen == R(9, 64));
    CHECK(r.rho_gen + r.rho_nongen == 1);
    CHECK(r.unverified == 0);

    auto S = ClassicalGroup::create(GroupType::Sp, 4, 2);
    auto s = exhaustive_rho_gen(S, 2, 2);
    CHECK(s.duos == 20);
    CHECK(s.rho_gen == R(9, 10));
    CHECK(s.proper == 2);
    CHECK(s.reducible == 2);
    CHECK(s.reducible_not_perp == 0);

    auto O = ClassicalGroup::create(GroupType::Ominus, 4, 2);
    auto o = exhaustive_rho_gen(O, 2, 2);
    CHECK(o.duos == 6);
    CHECK(o.rho_gen == 1);
}

TEST_CASE("reducible proper duos are perpendicular" * doctest::timeout(600)) {
    auto S = ClassicalGroup::create(GroupType::Sp, 6, 2);
    auto s = exhaustive_rho_gen(S, 4, 2);
    CHECK(s.duos == 272);
    CHECK(s.generating == 240);
    CHECK(s.proper == 32);
    CHECK(s.unverified == 0);
    CHECK(s.reducible_not_perp == 0);
    // irreducible proper overgroups occur at this size and need not be perpendicular
    CHECK(s.proper_not_perp == 30);
    CHECK(s.proper - s.reducible == 30);

    auto O = ClassicalGroup::create(GroupType::Ominus, 6, 2);
    auto o = exhaustive_rho_gen(O, 4, 2);
    CHECK(o.duos == 80);
    CHECK(o.rho_gen == 1);
}

TEST_CASE("conjugate count identity") {
    auto G = ClassicalGroup::create(GroupType::L, 4, 2);
    auto g = reference_stingray(G, 2);
    auto c = conjugate_count_identity(G, g);
    CHECK(c.M_order == 72);
    CHECK(c.centralizer_G == 18);
    CHECK(c.centralizer_M == 18);
    // number of conjugates of M containing g equals |C_G(g)| / |C_M(g)| times the class fusion
    CHECK(c.conjugates_containing * c.centralizer_M == c.centralizer_G);
    CHECK_THROWS_AS(conjugate_count_identity(ClassicalGroup::create(GroupType::Sp, 4, 2), g), std::invalid_argument);
}

TEST_CASE("formula grid, small dimensions") {
    auto rows = oracle_grid(4, {2, 3});
    CHECK(rows.size() > 20);
    std::set<std::string> quantities;
    for (auto& g : rows) {
        quantities.insert(g.quantity);
        INFO(g.quantity, " ", type_name(g.type), " d=", g.d, " q=", g.q, " e=", g.e, " formula=", g.formula_value,
             " oracle=", g.oracle_value);
        CHECK(g.ok);
    }
    CHECK(quantities.count("num_subspaces"));
    CHECK(quantities.count("k"));
    CHECK(quantities.count("class_size_per_subspace"));
    CHECK(quantities.count("centralizer_order"));
    CHECK(quantities.count("duo_partner_count"));
}

TEST_CASE("oracle cache") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "stingray_oracle_cache_test";
    fs::remove_all(dir);
    auto a = evaluate_oracle("subspaces", {"4", "2", "2"}, dir.string());
    CHECK(a.value == 35);
    size_t files = 0;
    fs::path file;
    for (auto& e : fs::directory_iterator(dir)) {
        ++files;
        file = e.path();
    }
    REQUIRE(files == 1);
    auto b = evaluate_oracle("subspaces", {"4", "2", "2"}, dir.string());
    CHECK(b.value == a.value);
    CHECK(b.seconds == a.seconds);  // served from the cache
    CHECK(b.params == a.params);

    // a stale entry from other oracle code is recomputed
    nlohmann::ordered_json j;
    {
        std::ifstream in(file);
        j = nlohmann::ordered_json::parse(in);
    }
    CHECK(j["code_version"] == oracle_code_version());
    j["code_version"] = "stale";
    j["value"] = "999";
    {
        std::ofstream out(file);
        out << j.dump();
    }
    CHECK(evaluate_oracle("subspaces", {"4", "2", "2"}, dir.string()).value == 35);

    auto k = evaluate_oracle("complement_pairs", {"4", "2", "2", "Sp"}, dir.string());
    auto k2 = evaluate_oracle("complement_pairs", {"4", "2", "2", "Sp"}, dir.string());
    REQUIRE(k2.ratio);
    CHECK(*k2.ratio == *k.ratio);
    fs::remove_all(dir);
}

TEST_CASE("oracle front end") {
    CHECK(oracle_names().size() == 8);
    CHECK(evaluate_oracle("num_subspaces", {"4", "2", "2", "Sp"}).value == 20);
    CHECK(evaluate_oracle("count_nondegenerate", {"6", "2", "2", "O+", "minus"}).value ==
          evaluate_oracle("num_subspaces", {"6", "2", "2", "O+"}).value);
    CHECK(evaluate_oracle("centralizer_order", {"4", "2", "3", "L"}).value == 7);
    auto r = evaluate_oracle("rho_gen", {"Sp", "4", "2", "2", "2"});
    CHECK(*r.ratio == R(9, 10));
    CHECK(extra(r, "duos") == "20");
    CHECK_THROWS_AS(evaluate_oracle("nope", {}), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_oracle("subspaces", {"4", "2"}), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_oracle("subspaces", {"4", "x", "2"}), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_oracle("centralizer_order", {"4", "2", "3", "U"}), std::invalid_argument);
}
