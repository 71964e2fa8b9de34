#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stingray/counting.hpp"
#include "stingray/recognize.hpp"

namespace stingray {

// Brute-force ground truth for small parameters.

struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr uint64_t kSubspaceGuard = 10'000'000;   // Gaussian binomial limit for subspace enumeration
constexpr uint64_t kElementGuard = 2'000'000;     // group order limit for element scans
constexpr uint64_t kCommutantGuard = 1ull << 22;  // commutant size limit for direct enumeration
constexpr uint64_t kPairGuard = 2'000'000;        // double loop limit for complement pairs
constexpr uint64_t kGraphGuard = 500'000'000;     // complements of a fixed subspace

struct OracleResult {
    std::string formula;
    std::vector<std::pair<std::string, std::string>> params;
    BigInt value;                 // the measured count
    std::optional<Rat> ratio;     // measured k for complement pairs, rho for exhaustive scans
    BigInt enumerated;            // size of what was enumerated
    BigInt expected_universe;     // its theoretical size (0 when not applicable)
    std::string method;
    double seconds = 0;
    std::vector<std::pair<std::string, std::string>> extra;
};

// each e-subspace of GF(Q)^d once, as an echelon basis
void enumerate_subspaces(FieldPtr F, size_t d, size_t e, const std::function<void(const Matrix&)>& fn);
BigInt count_subspaces(FieldPtr F, size_t d, size_t e);

// subspaces in U(d,q^u,e,X): all (L), nondegenerate (U, Sp), minus type (O)
bool in_subspace_family(const Subspace& U, const Form& f, GroupType X);

OracleResult count_nondegenerate(GroupType X, size_t d, uint64_t q, size_t e,
                                 std::optional<SubspaceType> filter = std::nullopt);
// count_nondegenerate, falling back to |G| / |stabilizer| with Schreier-Sims orders beyond the guard
OracleResult oracle_num_subspaces(GroupType X, size_t d, uint64_t q, size_t e);
// |D| and k = |D| / (|U_e| |U_{d-e}|)
OracleResult count_complement_pairs(GroupType X, size_t d, uint64_t q, size_t e);

// elements of the group generated by gens, by transversal products
void for_each_group_element(const std::vector<Matrix>& gens, FieldPtr F, size_t d, const BigInt& order,
                            const std::function<void(const Matrix&)>& fn);
BigInt exhaustive_centralizer(const ClassicalGroup& G, const Matrix& g);
// e-stingray elements with moved space U and fixed space F, optionally of a given class
BigInt exhaustive_class_count(const ClassicalGroup& G, const Subspace& U, const Subspace& F, unsigned e,
                              const std::optional<Poly>& cls = std::nullopt);
// commutant of g in M_d(GF(Q)) as a basis of matrices
std::vector<Matrix> commutant_basis(const Matrix& g);

// a reference e-stingray element of GX_d(q)
StingrayCertificate reference_stingray(const ClassicalGroup& G, unsigned e, uint64_t seed = 1);

OracleResult oracle_class_size_per_subspace(GroupType X, uint64_t q, unsigned e);
OracleResult oracle_centralizer_order(GroupType X, size_t d, uint64_t q, unsigned e);
OracleResult oracle_duo_partner_count(GroupType X, size_t d, uint64_t q, unsigned e1);

struct ExhaustiveRho {
    BigInt generating, duos;
    Rat rho_gen, rho_nongen;
    BigInt proper;               // ProperSubgroup verdicts
    BigInt proper_not_perp;      // of those, duos with U2 != perp(U1) (X != L)
    BigInt reducible;            // ProperSubgroup verdicts with a reducible pair
    BigInt reducible_not_perp;   // of those, U2 != perp(U1) (X != L); 0 expected
    BigInt unverified;
    std::vector<std::pair<std::string, BigInt>> by_verdict;
};
ExhaustiveRho exhaustive_rho_gen(const ClassicalGroup& G, unsigned e1, unsigned e2, uint64_t seed = 1);

// conjugates of M = stabilizer of the unordered pair {U_g, F_g} (GL, e = d/2) that contain g,
// counted directly, with |C_G(g)| and |C_M(g)| by element scans
struct ConjugateCount {
    BigInt conjugates_containing, centralizer_G, centralizer_M, M_order;
};
ConjugateCount conjugate_count_identity(const ClassicalGroup& G, const StingrayCertificate& g);

// the full comparison grid: every valid (X, d <= max_d, q, e)
struct GridRow {
    std::string quantity;
    GroupType type;
    size_t d;
    uint64_t q;
    unsigned e;
    std::string formula_value;
    std::string oracle_value;
    std::string method;
    bool ok = false;
};
std::vector<GridRow> oracle_grid(size_t max_d, const std::vector<uint64_t>& qs, const std::string& cache_dir = "",
                                 const std::function<void(const GridRow&)>& progress = {});

// CLI entry: oracle by formula name with string arguments, cached when cache_dir is set
OracleResult evaluate_oracle(const std::string& name, const std::vector<std::string>& args,
                             const std::string& cache_dir = "");
std::vector<std::string> oracle_names();
std::string oracle_code_version();

}  // namespace stingray
