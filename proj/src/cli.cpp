#include "stingray/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stingray/report.hpp"

namespace stingray {

namespace {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

uint64_t parse_u64(const std::string& s, const char* what) {
    size_t pos = 0;
    unsigned long long v = 0;
    try {
        if (!s.empty() && s[0] == '-') throw std::invalid_argument("");
        v = std::stoull(s, &pos, 0);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (s.empty() || pos != s.size()) throw UsageError(std::string("bad ") + what + ": " + s);
    return v;
}

double parse_log_base(const std::string& s) {
    if (s == "e") return 0;
    size_t pos = 0;
    double b = 0;
    try {
        b = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || !(b > 0) || b == 1) throw UsageError("log base must be e or a positive number other than 1: " + s);
    return b;
}

void load_data_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw UsageError("data directory not found: " + dir);
    std::vector<fs::path> files;
    for (auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && (e.path().extension() == ".gens" || e.path().extension() == ".txt")) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<GeneratorTable> all;
    for (auto& f : files) {
        std::ifstream in(f);
        auto t = read_generators(in);
        all.insert(all.end(), t.begin(), t.end());
    }
    install_generator_tables(all);
}

struct Output {
    std::string text;
    int code = 0;
};

// copies the fields of a record into the envelope
void merge(Json& j, const Json& rec) {
    for (auto it = rec.begin(); it != rec.end(); ++it) j[it.key()] = it.value();
}

Output json_out(const Json& j, int code = 0) { return {j.dump(2) + "\n", code}; }

unsigned to_unsigned(const std::string& s, const char* what) {
    uint64_t v = parse_u64(s, what);
    if (v > 1'000'000'000) throw UsageError(std::string(what) + " too large: " + s);
    return unsigned(v);
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"stingray-lab: stingray elements and duos in finite classical groups"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    std::string seed_s = "0xC0FFEE", log_s = "e";
    unsigned threads_opt = 1;
    app.add_option("--out", cfg.out, "write output to this file instead of stdout");
    app.add_option("--format", cfg.format, "json, or csv for Monte Carlo trial logs")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--log-base", log_s, "logarithm base for window computations (e or a number)");
    app.add_option("--threads", threads_opt, "worker threads (STINGRAY_THREADS overrides)")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed_s, "master seed (decimal or 0x hex)");
    app.add_option("--data-dir", cfg.data_dir, "directory of generator tables (*.gens) replacing the built-in generators");
    app.add_option("--cache-dir", cfg.cache_dir, "cache directory for brute-force oracle results");

    // ppd
    std::string ppd_Q, ppd_e;
    auto* ppd = app.add_subcommand("ppd", "primitive prime divisors of Q^e - 1");
    ppd->add_option("Q", ppd_Q)->required();
    ppd->add_option("e", ppd_e)->required();

    // scan
    std::string X_s, n_s, q_s;
    uint64_t budget = 0;
    unsigned e_lo = 0, e_hi = 0;
    auto* scan = app.add_subcommand("scan", "stingray certificates of random elements");
    scan->add_option("X", X_s)->required();
    scan->add_option("n", n_s)->required();
    scan->add_option("q", q_s)->required();
    scan->add_option("--budget", budget, "elements to draw")->default_val(20);
    scan->add_option("--e-lo", e_lo, "smallest e (default 2)")->default_val(2);
    scan->add_option("--e-hi", e_hi, "largest e (default n)")->default_val(0);

    // duo-mc
    std::string d_s, e1_s, e2_s;
    uint64_t trials = 0;
    auto* mc = app.add_subcommand("duo-mc", "Monte Carlo proportion of generating stingray duos");
    mc->add_option("X", X_s)->required();
    mc->add_option("d", d_s)->required();
    mc->add_option("q", q_s)->required();
    mc->add_option("e1", e1_s)->required();
    mc->add_option("e2", e2_s)->required();
    mc->add_option("--trials", trials, "accepted duos to aim for")->default_val(1000);

    // count and oracle
    std::string formula;
    std::vector<std::string> fargs;
    auto* count = app.add_subcommand("count", "evaluate a counting formula exactly");
    count->add_option("formula", formula)->required();
    count->add_option("params", fargs);
    auto* oracle = app.add_subcommand("oracle", "brute-force value of a counting formula, or 'grid'");
    oracle->add_option("formula", formula)->required();
    oracle->add_option("params", fargs);
    unsigned max_d = 6;
    std::vector<uint64_t> grid_qs{2, 3};
    oracle->add_option("--max-d", max_d, "grid: largest dimension")->default_val(6);
    oracle->add_option("--qs", grid_qs, "grid: field sizes")->delimiter(',');

    // embed
    auto* emb = app.add_subcommand("embed", "find a generating stingray duo in a large classical group");
    emb->add_option("X", X_s)->required();
    emb->add_option("n", n_s)->required();
    emb->add_option("q", q_s)->required();
    emb->add_option("--budget", budget, "elements to draw")->default_val(60);

    // alt
    auto* alt = app.add_subcommand("alt", "alternating-group analogue");
    alt->require_subcommand(1);
    std::string p_s, r_s;
    auto* ovl = alt->add_subcommand("overlap", "share of conjugates with support overlap 1");
    ovl->add_option("n", n_s)->required();
    ovl->add_option("p", p_s)->required();
    ovl->add_option("r", r_s)->required();
    ovl->add_option("--trials", trials, "Monte Carlo trials")->default_val(100000);
    auto* aemb = alt->add_subcommand("embed", "p-cycle steps 1-3 in A_n");
    aemb->add_option("n", n_s)->required();
    aemb->add_option("--budget", budget, "random elements per step")->default_val(1000);

    // bounds
    auto* bnd = app.add_subcommand("bounds", "generation bound with its per-class breakdown");
    bnd->add_option("X", X_s)->required();
    bnd->add_option("d", d_s)->required();
    bnd->add_option("q", q_s)->required();
    bnd->add_option("e1", e1_s)->required();
    bnd->add_option("e2", e2_s)->required();

    // gens
    auto* gens = app.add_subcommand("gens", "print the generator table of a classical group");
    gens->add_option("X", X_s)->required();
    gens->add_option("n", n_s)->required();
    gens->add_option("q", q_s)->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, r;
        int code = app.exit(e, o, r);
        out << o.str();
        err << r.str();
        return code == 0 ? 0 : 1;
    }

    Output result;
    try {
        cfg.seed = parse_u64(seed_s, "seed");
        cfg.log_base = parse_log_base(log_s);
        cfg.threads = resolve_threads(threads_opt);
        if (!cfg.data_dir.empty()) load_data_dir(cfg.data_dir);
        auto csv_only_for_mc = [&] {
            if (cfg.format == "csv") throw UsageError("--format csv is only available for duo-mc trial logs");
        };

        if (*ppd) {
            csv_only_for_mc();
            cfg.command = "ppd";
            BigInt Q(ppd_Q, 10);
            unsigned e = to_unsigned(ppd_e, "e");
            if (Q < 2 || e < 1) throw UsageError("need Q >= 2 and e >= 1");
            Json j = envelope("ppd");
            j["Q"] = ppd_Q;
            j["e"] = e;
            Json list = Json::array();
            for (auto& r : ppd_set(Q, e)) list.push_back(to_string(r));
            j["ppd"] = list;
            result = json_out(j);
        } else if (*scan) {
            csv_only_for_mc();
            GroupType X = parse_group_type(X_s);
            unsigned n = to_unsigned(n_s, "n");
            uint64_t q = parse_u64(q_s, "q");
            auto G = ClassicalGroup::create(X, n, q);
            Sampler S(G, Sampler::Mode::Full, cfg.seed);
            unsigned hi = e_hi ? e_hi : n;
            Json j = envelope("scan");
            j["group"] = G.describe();
            j["seed"] = cfg.seed;
            j["budget"] = budget;
            j["e_range"] = {e_lo, hi};
            Json certs = Json::array();
            for (uint64_t s = 0; s < budget; ++s)
                for (auto& c : stingray_scan_all(S.sample(), G, e_lo, hi)) {
                    Json cj = certificate_json(c);
                    cj["sample"] = s;
                    certs.push_back(cj);
                }
            j["found"] = certs.size();
            j["certificates"] = certs;
            result = json_out(j);
        } else if (*mc) {
            GroupType X = parse_group_type(X_s);
            auto r = mc_rho_gen(X, to_unsigned(d_s, "d"), parse_u64(q_s, "q"), to_unsigned(e1_s, "e1"),
                                to_unsigned(e2_s, "e2"), trials, cfg.seed, cfg.threads);
            int code = r.pass && r.irreducible_pass ? 0 : 2;
            if (cfg.format == "csv") {
                result = {rho_trials_csv(r), code};
            } else {
                Json j = envelope("duo-mc");
                j["seed"] = cfg.seed;
                merge(j, rho_json(r));
                result = json_out(j, code);
            }
        } else if (*count) {
            csv_only_for_mc();
            Json j = envelope("count");
            merge(j, count_json(evaluate_formula(formula, fargs)));
            result = json_out(j);
        } else if (*oracle) {
            csv_only_for_mc();
            Json j = envelope("oracle");
            if (formula == "grid") {
                if (!fargs.empty()) throw UsageError("oracle grid takes --max-d and --qs, not positional parameters");
                auto rows = oracle_grid(max_d, grid_qs, cfg.cache_dir);
                Json arr = Json::array();
                size_t bad = 0;
                for (auto& g : rows) {
                    arr.push_back(grid_row_json(g));
                    bad += !g.ok;
                }
                j["max_d"] = max_d;
                j["qs"] = grid_qs;
                j["rows"] = arr;
                j["mismatches"] = bad;
                result = json_out(j, bad ? 2 : 0);
            } else {
                merge(j, oracle_json(evaluate_oracle(formula, fargs, cfg.cache_dir)));
                result = json_out(j);
            }
        } else if (*emb) {
            csv_only_for_mc();
            GroupType X = parse_group_type(X_s);
            unsigned n = to_unsigned(n_s, "n");
            uint64_t q = parse_u64(q_s, "q");
            Json j = envelope("embed");
            j["seed"] = cfg.seed;
            j["budget"] = budget;
            auto r = embed(X, n, q, budget, cfg.seed, cfg.log_base);
            j["found"] = bool(r);
            if (r)
                merge(j, embed_json(*r));
            else
                j["window"] = {{"e_lo", embed_window(X, n, cfg.log_base).e_lo}, {"e_hi", embed_window(X, n, cfg.log_base).e_hi}};
            result = json_out(j);
        } else if (*ovl) {
            csv_only_for_mc();
            unsigned n = to_unsigned(n_s, "n"), p = to_unsigned(p_s, "p"), r = to_unsigned(r_s, "r");
            Rat exact = alt_overlap_proportion(n, p, r);
            Rat lb = alt_overlap_lower_bound(n, p, r);
            auto m = mc_overlap(n, p, r, trials, cfg.seed, cfg.threads);
            double e = exact.get_d();
            double se = trials ? std::sqrt(e * (1 - e) / double(trials)) : 0;
            bool consistent = trials == 0 || std::abs(m.point - e) <= 4 * se;
            Json j = envelope("alt overlap");
            j["n"] = n;
            j["p"] = p;
            j["r"] = r;
            j["exact"] = rat_json(exact);
            j["exact_decimal"] = decimal_string(exact);
            j["lower_bound"] = rat_json(lb);
            j["exact_exceeds_bound"] = exact > lb;
            if (n <= 9) j["exhaustive"] = rat_json(exhaustive_overlap(n, p, r));
            j["estimate"] = estimate_json(m);
            j["within_4_sigma"] = consistent;
            result = json_out(j, consistent && exact > lb ? 0 : 2);
        } else if (*aemb) {
            csv_only_for_mc();
            Json j = envelope("alt embed");
            unsigned n = to_unsigned(n_s, "n");
            j["n"] = n;
            j["seed"] = cfg.seed;
            j["budget"] = budget;
            merge(j, alt_embed_json(alt_embed(n, budget, cfg.seed, cfg.log_base)));
            result = json_out(j);
        } else if (*bnd) {
            csv_only_for_mc();
            GroupType X = parse_group_type(X_s);
            unsigned d = to_unsigned(d_s, "d"), e1 = to_unsigned(e1_s, "e1"), e2 = to_unsigned(e2_s, "e2");
            uint64_t q = parse_u64(q_s, "q");
            Rat b = rho_gen_lower_bound(X, d, q, e1, e2);
            Json j = envelope("bounds");
            j["X"] = type_name(X);
            j["d"] = d;
            j["q"] = q;
            j["e1"] = e1;
            j["e2"] = e2;
            j["lambda"] = rat_json(lambda_X(X));
            j["kappa"] = rat_json(kappa_X(X, q, d, e2));
            j["rho_gen_lower_bound"] = rat_json(b);
            j["rho_gen_lower_bound_decimal"] = decimal_string(b);
            Json per = Json::array();
            Rat sum = 0;
            for (unsigned i = 1; i <= 9; ++i) {
                Rat p = prob_i_upper(i, X, q, d, e1, e2);
                sum += p;
                per.push_back({{"class", i}, {"p_constant", rat_json(p_constant(i, X, q, d, e2))}, {"prob_upper", rat_json(p)}});
            }
            sum.canonicalize();
            j["per_class"] = per;
            j["sum_prob_upper"] = rat_json(sum);
            j["one_minus_sum"] = rat_json(1 - sum);
            result = json_out(j);
        } else if (*gens) {
            csv_only_for_mc();
            auto G = ClassicalGroup::create(parse_group_type(X_s), to_unsigned(n_s, "n"), parse_u64(q_s, "q"));
            std::ostringstream os;
            write_generators(os, G);
            result = {os.str(), 0};
        }
    } catch (const GuardError& e) {
        err << "guard: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    if (cfg.out.empty()) {
        out << result.text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << cfg.out << "\n";
            return 1;
        }
        f << result.text;
    }
    return result.code;
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_run(args, std::cout, std::cerr);
}

}  // namespace stingray
