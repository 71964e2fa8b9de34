#include "stingray/pipeline.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "stingray/counting.hpp"
#include "stingray/oracle.hpp"

namespace stingray {

namespace {

void check_rho_params(GroupType X, unsigned d, uint64_t q, unsigned e1, unsigned e2) {
    check_parameters(X, d, q);
    if (X == GroupType::Ocirc) throw std::invalid_argument("odd-dimensional orthogonal groups have no stingray duos");
    if (e1 + e2 != d) throw std::invalid_argument("need d = e1 + e2");
    if (e2 < 2 || e2 > e1) throw std::invalid_argument("need 2 <= e2 <= e1");
    if (!parity_ok(X, e1) || !parity_ok(X, e2)) throw std::invalid_argument("e1, e2 have the wrong parity for " + type_name(X));
    for (unsigned e : {e1, e2})
        if (stingray_primes(X, q, e).empty())
            throw std::invalid_argument("no " + std::to_string(e) + "-stingray elements in " + type_name(X) + "(" +
                                        std::to_string(d) + "," + std::to_string(q) + ")");
    BigInt Q = X == GroupType::U ? BigInt(q * q) : BigInt(q);
    if (pow_big(Q, d) > MatrixBSGS::kMaxPoints) throw GuardError("q^d beyond the recognition guard 2^20");
}

double log_in(double x, double base) { return base > 0 ? std::log(x) / std::log(base) : std::log(x); }

}  // namespace

RhoGenReport mc_rho_gen(GroupType X, unsigned d, uint64_t q, unsigned e1, unsigned e2, uint64_t trials, uint64_t seed,
                        unsigned threads) {
    if (e2 > e1) std::swap(e1, e2);
    check_rho_params(X, d, q, e1, e2);
    auto G = ClassicalGroup::create(X, d, q);
    // fixed reference classes, the same ones the exhaustive scan uses
    const auto g1 = reference_stingray(G, e1, 1);
    const auto g2 = reference_stingray(G, e2, 2);

    RhoGenReport rep;
    rep.X = X;
    rep.d = d;
    rep.q = q;
    rep.e1 = e1;
    rep.e2 = e2;
    rep.requested = trials;
    rep.trials.resize(trials);
    parallel_for(trials, threads, [&](uint64_t i) {
        Rng rng = Rng::derive(seed, i);
        Sampler S(G, Sampler::Mode::Full, rng.next());
        TrialRecord& t = rep.trials[i];
        t.index = i;
        while (t.attempts < kAttemptsPerTrial) {
            ++t.attempts;
            Matrix x = S.sample(), y = S.sample();
            auto D = form_duo(conjugate_certificate(g1, x, inverse(x)), conjugate_certificate(g2, y, inverse(y)), G);
            if (!D) continue;
            Verdict v = generation_verdict(*D, G, rng.next());
            t.accepted = true;
            t.tag = v.tag;
            t.verdict = v.name();
            t.order = v.order;
            t.irreducible = v.irreducible;
            t.note = v.note;
            break;
        }
    });

    uint64_t accepted = 0, gen = 0, irr = 0, irr_gen = 0;
    std::map<std::string, uint64_t> tally;
    for (auto& t : rep.trials) {
        rep.attempts += t.attempts;
        if (!t.accepted) {
            rep.rejected += t.attempts;
            continue;
        }
        rep.rejected += t.attempts - 1;
        ++accepted;
        ++tally[t.verdict];
        bool g = t.tag == VerdictTag::ContainsOmega || t.tag == VerdictTag::OrthogonalInSp;
        gen += g;
        if (t.tag == VerdictTag::Unverified) ++rep.unverified;
        if (t.irreducible) {
            ++irr;
            irr_gen += g;
        }
    }
    if (trials > 0 && accepted == 0)
        throw std::runtime_error("no duo formed within " + std::to_string(kAttemptsPerTrial) + " attempts per trial");
    for (auto& [k, v] : tally) rep.by_verdict.emplace_back(k, v);
    rep.estimate = make_estimate(gen, accepted, seed);
    rep.irreducible = make_estimate(irr_gen, irr, seed);
    rep.irreducible_duos = irr;
    std::vector<std::pair<std::string, std::string>> meta = {{"X", type_name(X)}, {"d", std::to_string(d)}, {"q", std::to_string(q)},
                                                             {"e1", std::to_string(e1)}, {"e2", std::to_string(e2)}};
    rep.estimate.metadata = meta;
    rep.irreducible.metadata = meta;
    if (d > 8) {
        rep.bound = rho_gen_lower_bound(X, d, q, e1, e2);
        rep.pass = rep.estimate.point + 3 * rep.estimate.standard_error() >= rep.bound->get_d();
        if (X == GroupType::L) {
            Rat b = 1 - kappa_X(X, q, d, e2) * pow_rat(Rat(long(q)), 3 - long(d));
            b.canonicalize();
            rep.irreducible_bound = b;
            rep.irreducible_pass = irr > 0 && rep.irreducible.point + 3 * rep.irreducible.standard_error() >= kIrreducibleFloor;
        }
    }
    return rep;
}

EmbedWindow embed_window(GroupType X, unsigned n, double log_base) {
    EmbedWindow w;
    bool small = X == GroupType::L || X == GroupType::U;
    w.alpha = small ? 1 : 2;
    w.n0 = small ? n : n / 2;
    if (w.n0 < 2) throw std::invalid_argument("embed: n too small for the window");
    double L = log_in(double(w.n0), log_base);
    w.lo = w.alpha * L;
    w.hi = 2 * w.alpha * L;
    w.e_lo = std::max(2u, unsigned(std::floor(w.lo)) + 1);
    w.e_hi = unsigned(std::floor(w.hi));
    return w;
}

std::optional<EmbedResult> embed(GroupType X, unsigned n, uint64_t q, uint64_t budget, uint64_t seed, double log_base) {
    if (n <= 8) throw std::invalid_argument("embed needs n > 8");
    check_parameters(X, n, q);
    auto G = ClassicalGroup::create(X, n, q);
    EmbedResult res;
    res.X = X;
    res.n = n;
    res.q = q;
    res.window = embed_window(X, n, log_base);
    if (budget == 0 || res.window.e_lo > res.window.e_hi) return std::nullopt;
    Sampler S(G, Sampler::Mode::Full, seed);
    struct Found {
        StingrayCertificate cert;
        uint64_t sample;
    };
    std::vector<Found> found;
    for (uint64_t s = 0; s < budget; ++s) {
        ++res.samples;
        auto certs = stingray_scan_all(S.sample(), G, res.window.e_lo, res.window.e_hi);
        for (auto& c : certs) {
            if (!parity_ok(X, c.e)) continue;
            StingrayCertificate p = power_to_omega(c, G);
            ++res.certificates;
            for (auto& f : found) {
                if (f.sample == s) continue;  // powers of one element commute
                ++res.pairs_tried;
                auto D = form_duo(f.cert, p, G);
                if (!D) continue;
                Verdict v = generation_verdict(*D, G, seed ^ res.pairs_tried);
                if (!v.generating() && v.tag != VerdictTag::Unverified) continue;
                res.duo = *D;
                res.verdict = v;
                res.d = unsigned(D->d);
                res.target = v.tag == VerdictTag::Unverified ? D->target.name() : type_name(v.target);
                res.fixed_dim = unsigned(subspace_intersection(fixed_space(D->cert1.element), fixed_space(D->cert2.element)).dim());
                res.success = v.generating();
                return res;
            }
            found.push_back({std::move(p), s});
        }
    }
    return std::nullopt;
}

MCEstimate embed_success_rate(GroupType X, unsigned n, uint64_t q, uint64_t pair_budget, uint64_t runs, uint64_t seed,
                              unsigned threads, double log_base) {
    std::vector<uint8_t> ok(runs, 0);
    parallel_for(runs, threads, [&](uint64_t i) {
        auto r = embed(X, n, q, pair_budget, Rng::derive(seed, i).next(), log_base);
        ok[i] = r && r->success;
    });
    uint64_t s = 0;
    for (auto v : ok) s += v;
    MCEstimate m = make_estimate(s, runs, seed);
    m.metadata = {{"X", type_name(X)}, {"n", std::to_string(n)}, {"q", std::to_string(q)},
                  {"pair_budget", std::to_string(pair_budget)}};
    return m;
}

}  // namespace stingray
