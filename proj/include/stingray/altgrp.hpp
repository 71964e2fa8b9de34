#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stingray/bsgs.hpp"
#include "stingray/common.hpp"

namespace stingray {

// Alternating groups: p-cycles, support overlaps and natural A_k subgroups.

struct CycleCert {
    Perm perm;
    unsigned p = 0;
    std::vector<uint32_t> support;  // the cycle, starting at its smallest point
    BigInt power = 1;               // exponent that produced perm from the scanned element
};

std::vector<std::vector<uint32_t>> cycles(const Perm& g);  // nontrivial cycles only
bool is_even(const Perm& g);
bool is_permutation(const Perm& g);

// throws std::invalid_argument unless c is a single odd prime cycle on its support
void check_cycle_cert(const CycleCert& c);

// exactly one cycle of prime length p in [lo, hi] and no other cycle length divisible by p;
// the smallest such p wins
std::optional<CycleCert> pcycle_scan(const Perm& g, unsigned lo, unsigned hi);

enum class AltVerdictTag { Ak, CpxCr, Other };
struct AltVerdict {
    AltVerdictTag tag = AltVerdictTag::Other;
    unsigned k = 0;  // |supp g ∪ supp h|
    BigInt order;
    bool embedding_hypotheses = false;
    std::string name() const;
};
// A_k when max{p+3, r} <= k <= min{p+r-1, n} (order checked to be k!/2 by Schreier-Sims),
// CpxCr when the supports are disjoint, otherwise Other with the computed order
AltVerdict natural_embed_check(const CycleCert& g, const CycleCert& h);

// uniform element of A_n: Fisher-Yates, then a fixed transposition when odd
Perm random_alt(size_t n, Rng& rng);

struct Step3Result {
    CycleCert conjugate;  // g^x
    Perm x;
    uint64_t attempts = 0;
    AltVerdict verdict;
};
// random x in A_n until |supp(g^x) ∩ supp h| = 1; none when the budget runs out.
// Needs disjoint supports, p + r < n, and n > 20 when p = r = 3.
std::optional<Step3Result> step3_search(const CycleCert& g, const CycleCert& h, uint64_t budget, uint64_t seed);

// |{x in A_n : |Δ^x ∩ Δ'| = 1}| / |A_n| by Monte Carlo with |Δ| = p, |Δ'| = r disjoint
MCEstimate mc_overlap(unsigned n, unsigned p, unsigned r, uint64_t trials, uint64_t seed, unsigned threads = 1);
// the same proportion by running over all of A_n (n <= 9)
Rat exhaustive_overlap(unsigned n, unsigned p, unsigned r);

// Steps 1-3: p-cycle powers with p in [log n, (log n)^{log log n}], then a conjugate with overlap 1
struct AltEmbedResult {
    bool success = false;
    uint64_t samples = 0;      // random elements drawn in step 1
    uint64_t conjugations = 0; // random conjugators tried in step 3
    unsigned lo = 0, hi = 0;   // prime window
    std::optional<CycleCert> g, h, gx;
    AltVerdict verdict;
    std::string stage;         // "step2", "step3" or why it stopped
};
// log_base 0 means natural logarithm
AltEmbedResult alt_embed(unsigned n, uint64_t budget, uint64_t seed, double log_base = 0);
std::pair<unsigned, unsigned> alt_prime_window(unsigned n, double log_base = 0);

}  // namespace stingray
