#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stingray/classical.hpp"

namespace stingray {

// prod_{i=k}^{d} (1 - (sign q)^-i)
Rat omega(unsigned k, unsigned d, uint64_t q, int sign);
// omega(k+1,d) / omega(1,d-k)
Rat delta(unsigned k, unsigned d, uint64_t q, int sign);
// 1 - (q^{-e1/2} + eps q^{-e2/2}) / (1 + eps q^{-d/2}), e1, e2 even
Rat gamma_eps(unsigned e1, unsigned e2, uint64_t q, int eps);

BigInt gaussian_binomial(unsigned d, unsigned e, uint64_t q);

// e-parity rules for stingray duos: L any, U odd, Sp and O even
bool parity_ok(GroupType X, unsigned e);
void check_count_params(GroupType X, unsigned d, uint64_t q, unsigned e);

// |U(d,q^u,e,X)|: e-subspaces (L), nondegenerate ones (U, Sp), minus-type ones (O)
BigInt num_subspaces(unsigned d, uint64_t q, unsigned e, GroupType X);
// |T| of the torus through an e-stingray element
BigInt torus_order(unsigned e, uint64_t q, GroupType X);
// ppd(q^u, e) primes dividing the torus order; empty means no e-stingray elements
// (for U this is ppd(q, 2e), so U with q = 2, e = 3 has none although ppd(4,3) = {7})
std::vector<BigInt> stingray_primes(GroupType X, uint64_t q, unsigned e);
// stingray elements of one class with a given moved space (L: given (U,F))
BigInt class_size_per_subspace(unsigned d, uint64_t q, unsigned e, GroupType X);
BigInt centralizer_order(unsigned d, uint64_t q, unsigned e, GroupType X);
BigInt class_size(unsigned d, uint64_t q, unsigned e, GroupType X);
// the isometry group of the complement F
BigInt complement_group_order(unsigned d, uint64_t q, unsigned e, GroupType X);

struct PartnerCount {
    std::optional<BigInt> exact;  // L only
    Rat lower, upper;             // X != L: (1 - 3/(2q^u)) |U| c and |U| c, upper strict
    std::optional<Rat> ratio;     // |C_G(g1)| / N, L only
};
PartnerCount duo_partner_count(unsigned d, uint64_t q, unsigned e1, GroupType X);
// N = k |U(d,q^u,e2,X)| c(e2) for a known complement proportion k (X != L has no closed form)
BigInt duo_partner_count_given_k(unsigned d, uint64_t q, unsigned e1, GroupType X, const Rat& k);

// a(q,X), b(q,X)
std::pair<Rat, Rat> subspace_bound_constants(GroupType X, uint64_t q);

// constants for the generation bound, kept as data
enum class ConstKind { Lambda, Kappa, P };
struct ConstRow {
    ConstKind kind;
    unsigned cls = 0;      // Aschbacher class for P rows
    GroupType type;
    uint64_t q_lo = 2, q_hi = 0;  // q_hi = 0: unbounded
    unsigned e2 = 0;       // 0: any
    unsigned d = 0;        // 0: any
    std::vector<uint64_t> q_in;   // empty: any
    std::vector<unsigned> d_mod8; // empty: any
    const char* value;
    const char* source;
};
const std::vector<ConstRow>& constant_table();
Rat lookup_constant(ConstKind kind, unsigned cls, GroupType X, uint64_t q, unsigned d, unsigned e2);

Rat lambda_X(GroupType X);
Rat kappa_X(GroupType X, uint64_t q, unsigned d, unsigned e2);
// 1 - lambda (q^-1 + q^-2) - kappa q^{-d+3}; d > 8
Rat rho_gen_lower_bound(GroupType X, unsigned d, uint64_t q, unsigned e1, unsigned e2);
Rat p_constant(unsigned i, GroupType X, uint64_t q, unsigned d, unsigned e2);
// per-class share of the non-generation probability
Rat prob_i_upper(unsigned i, GroupType X, uint64_t q, unsigned d, unsigned e1, unsigned e2);

// alternating groups: share of x in A_n with |supp(g)^x ∩ supp(h)| = 1
Rat alt_overlap_proportion(unsigned n, unsigned p, unsigned r);
Rat alt_overlap_lower_bound(unsigned n, unsigned p, unsigned r);

struct CountReport {
    std::string formula;
    std::vector<std::pair<std::string, std::string>> params;
    std::optional<Rat> exact;
    std::optional<std::pair<Rat, Rat>> bounds;
    std::vector<std::pair<std::string, Rat>> extra;
};
// evaluate a formula by name with string arguments (the CLI `count` entry point)
CountReport evaluate_formula(const std::string& name, const std::vector<std::string>& args);
std::vector<std::string> formula_names();

}  // namespace stingray
