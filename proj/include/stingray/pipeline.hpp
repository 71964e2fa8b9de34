#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stingray/recognize.hpp"

namespace stingray {

// Monte Carlo generation proportions and the embedding procedure.

struct TrialRecord {
    uint64_t index = 0;
    uint64_t attempts = 0;  // conjugate pairs drawn until a duo formed
    bool accepted = false;
    VerdictTag tag = VerdictTag::Unverified;
    std::string verdict;
    BigInt order;
    bool irreducible = false;
    std::string note;
};

struct RhoGenReport {
    GroupType X;
    unsigned d = 0, e1 = 0, e2 = 0;
    uint64_t q = 0;
    MCEstimate estimate;      // generating duos among accepted duos
    uint64_t requested = 0;   // trials asked for
    uint64_t attempts = 0;    // conjugate pairs drawn in total
    uint64_t rejected = 0;    // pairs that did not form a duo
    uint64_t unverified = 0;
    MCEstimate irreducible;   // generating among irreducible duos
    uint64_t irreducible_duos = 0;
    std::vector<std::pair<std::string, uint64_t>> by_verdict;
    std::optional<Rat> bound;  // rho_gen_lower_bound, d > 8 only
    bool pass = true;          // rho + 3 SE >= bound
    std::optional<Rat> irreducible_bound;  // 1 - kappa_L(q) q^{3-d}, X = L and d > 8
    bool irreducible_pass = true;          // rho_irr + 3 SE >= kIrreducibleFloor
    std::vector<TrialRecord> trials;
};

// floor for the conditional-on-irreducible test for L; the bound itself is above 0.998
constexpr double kIrreducibleFloor = 0.99;
constexpr uint64_t kAttemptsPerTrial = 100;

// rho_gen for GX_d(q) with d = e1 + e2: fixed reference stingray elements conjugated by
// two sampled elements per attempt, retried until they form a duo, then recognised.
// Trial i uses Rng::derive(seed, i), so results do not depend on the thread count.
RhoGenReport mc_rho_gen(GroupType X, unsigned d, uint64_t q, unsigned e1, unsigned e2, uint64_t trials,
                        uint64_t seed, unsigned threads = 1);

struct EmbedWindow {
    unsigned alpha = 1;
    unsigned n0 = 0;
    double lo = 0, hi = 0;        // e in (lo, hi]
    unsigned e_lo = 0, e_hi = 0;  // integer range of the window
};
// alpha = 1, n0 = n for L and U; alpha = 2, n0 = floor(n/2) for Sp and O. log_base 0 is natural log.
EmbedWindow embed_window(GroupType X, unsigned n, double log_base = 0);

struct EmbedResult {
    GroupType X;
    unsigned n = 0;
    uint64_t q = 0;
    uint64_t samples = 0;       // elements drawn
    uint64_t certificates = 0;  // stingray certificates found
    uint64_t pairs_tried = 0;   // certificate pairs passed to form_duo
    EmbedWindow window;
    std::optional<DuoReport> duo;
    Verdict verdict;
    unsigned d = 0;
    std::string target;
    unsigned fixed_dim = 0;     // dim of the common fixed space of both generators
    bool success = false;
};
// first generating duo among the certificates of up to budget random elements, each certificate
// powered into Omega; beyond the recognition guard the first duo is returned with an unverified verdict
std::optional<EmbedResult> embed(GroupType X, unsigned n, uint64_t q, uint64_t budget, uint64_t seed,
                                 double log_base = 0);

// fraction of independent runs (run i seeded by Rng::derive(seed, i)) in which embed with
// pair_budget elements returns a generating duo
MCEstimate embed_success_rate(GroupType X, unsigned n, uint64_t q, uint64_t pair_budget, uint64_t runs,
                              uint64_t seed, unsigned threads = 1, double log_base = 0);

}  // namespace stingray
