#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "stingray/classical.hpp"
#include "stingray/cli.hpp"

using namespace stingray;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream o, e;
    int c = cli_run(args, o, e);
    return {c, o.str(), e.str()};
}

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("stingray_cli_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("ppd") {
    auto r = run({"ppd", "2", "6"});
    REQUIRE(r.code == 0);
    auto j = parse(r);
    CHECK(j["schema"] == "stingray-lab/1");
    CHECK(j["ppd"].empty());
    auto s = parse(run({"ppd", "2", "4"}));
    REQUIRE(s["ppd"].size() == 1);
    CHECK(s["ppd"][0] == "5");
    CHECK(run({"ppd", "2", "x"}).code == 1);
}

TEST_CASE("count") {
    auto r = run({"count", "delta", "2", "4", "2", "+"});
    REQUIRE(r.code == 0);
    CHECK(parse(r)["exact"] == "35/16");
    CHECK(run({"count", "nosuch", "1"}).code == 1);
}

TEST_CASE("usage errors and help") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"ppd", "2"}).code == 1);
    CHECK(run({"--format", "xml", "ppd", "2", "6"}).code == 1);
    CHECK(run({"--format", "csv", "ppd", "2", "6"}).code == 1);
    CHECK(run({"--seed", "banana", "ppd", "2", "6"}).code == 1);
    CHECK(run({"--log-base", "1", "ppd", "2", "6"}).code == 1);
    auto h = run({"--help"});
    CHECK(h.code == 0);
    CHECK(h.out.find("duo-mc") != std::string::npos);
}

TEST_CASE("guard errors exit 1") {
    auto r = run({"duo-mc", "U", "10", "3", "7", "3", "--trials", "5"});
    CHECK(r.code == 1);
    CHECK(r.err.find("guard") != std::string::npos);
}

TEST_CASE("duo-mc output does not depend on thread count") {
    auto a = run({"--threads", "1", "duo-mc", "L", "4", "2", "2", "2", "--trials", "150"});
    auto b = run({"--threads", "4", "duo-mc", "L", "4", "2", "2", "2", "--trials", "150"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto c = run({"--seed", "7", "duo-mc", "L", "4", "2", "2", "2", "--trials", "150"});
    CHECK(c.out != a.out);
    auto j = parse(a);
    CHECK(j["seed"] == kDefaultSeed);
    CHECK(j["accepted_duos"].get<int>() > 140);
}

TEST_CASE("csv trial log") {
    auto r = run({"--format", "csv", "duo-mc", "L", "4", "2", "2", "2", "--trials", "20"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "trial,attempts,accepted,verdict,generating,order,irreducible,note");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 20);
}

TEST_CASE("out file") {
    auto dir = scratch("out");
    auto f = (dir / "b.json").string();
    auto r = run({"--out", f, "bounds", "O-", "10", "2", "8", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(f);
    auto j = nlohmann::json::parse(in);
    CHECK(j["per_class"].size() == 9);
    CHECK(j["rho_gen_lower_bound_decimal"].get<std::string>().substr(0, 6) == "0.9855");
}

TEST_CASE("alt overlap") {
    auto r = run({"alt", "overlap", "9", "3", "5", "--trials", "5000"});
    REQUIRE(r.code == 0);
    auto j = parse(r);
    CHECK(j["exact"] == j["exhaustive"]);
    CHECK(j["within_4_sigma"] == true);
}

TEST_CASE("oracle front end") {
    auto r = run({"oracle", "num_subspaces", "4", "2", "2", "Sp"});
    REQUIRE(r.code == 0);
    CHECK(parse(r)["value"] == "20");
    CHECK(run({"oracle", "grid", "4"}).code == 1);
    auto g = run({"oracle", "grid", "--max-d", "3", "--qs", "2"});
    CHECK(g.code == 0);
    CHECK(parse(g)["mismatches"] == 0);
}

TEST_CASE("generator tables round-trip through a data directory") {
    auto dir = scratch("gens");
    auto printed = run({"gens", "Sp", "4", "2"});
    REQUIRE(printed.code == 0);
    {
        std::ofstream f(dir / "sp4.gens");
        f << printed.out;
    }
    auto again = run({"--data-dir", dir.string(), "gens", "Sp", "4", "2"});
    CHECK(again.code == 0);
    CHECK(again.out == printed.out);
    {
        std::ofstream f(dir / "zz.gens");
        f << "# stingray generator tables v1\nSp 4 2 full\n1 0 0 0\n0 1 0 0\n0 0 1 0\n1 0 0 1\n\n";
    }
    CHECK(run({"--data-dir", dir.string(), "gens", "Sp", "4", "2"}).code == 1);
    CHECK(run({"--data-dir", (dir / "missing").string(), "ppd", "2", "3"}).code == 1);
    clear_generator_tables();
}
