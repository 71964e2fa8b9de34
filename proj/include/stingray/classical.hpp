#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stingray/bsgs.hpp"
#include "stingray/linalg.hpp"

namespace stingray {

enum class GroupType { L, U, Sp, Oplus, Ominus, Ocirc };

GroupType parse_group_type(const std::string& s);
std::string type_name(GroupType t);
bool is_orthogonal(GroupType t);
inline unsigned field_u(GroupType t) { return t == GroupType::U ? 2 : 1; }

// q = p^a; throws std::invalid_argument when q is not a prime power
std::pair<unsigned, unsigned> prime_power(uint64_t q);
// validates (type, n, q) and throws std::invalid_argument if inconsistent
void check_parameters(GroupType t, size_t n, uint64_t q);

// |GX_n(q)| (omega = false) or |ΩX_n(q)| (omega = true)
BigInt group_order(GroupType t, size_t n, uint64_t q, bool omega = false);

// Bilinear, sesquilinear or quadratic form on F^n with F = GF(q^u).
// For orthogonal types gram is the polar form B(x,y) = Q(x+y)-Q(x)-Q(y)
// and quad holds the upper triangular coefficients of Q.
struct Form {
    GroupType type = GroupType::L;
    FieldPtr F;
    size_t n = 0;
    Matrix gram;
    Matrix quad;

    bool has_form() const { return type != GroupType::L; }
    bool orthogonal() const { return is_orthogonal(type); }
    Elem B(const Vec& x, const Vec& y) const;
    Elem Q(const Vec& x) const;
};

Form standard_form(GroupType t, size_t n, uint64_t q);
// form restricted to U, in the basis rows of U
Form restrict_form(const Form& f, const Subspace& U);

enum class SubspaceType { Degenerate, Nondegenerate, Plus, Minus, Circ };
std::string subspace_type_name(SubspaceType s);

// type of the form restricted to U (U nonzero)
SubspaceType subspace_type(const Subspace& U, const Form& f);
// same, by exhaustive singular-vector count (only for q^dim <= 2^20, even dim)
SubspaceType subspace_type_by_count(const Subspace& U, const Form& f);
// plus/minus/circ of a nondegenerate orthogonal form by discriminant (odd q)
// or Arf invariant (even q)
SubspaceType structural_type(const Form& r);
Subspace perp(const Subspace& U, const Form& f);
bool preserves_form(const Matrix& g, const Form& f);
// Sp with q even: a quadratic form polarizing to the symplectic form and
// fixed by every generator; std::nullopt when none exists
std::optional<Form> invariant_quadratic_form(const std::vector<Matrix>& gens, const Form& sp);

struct ClassicalGroup {
    GroupType type = GroupType::L;
    size_t n = 0;
    uint64_t q = 0;
    FieldPtr F;  // GF(q^u)
    Form form;
    std::vector<Matrix> gens;        // generate GX_n(q)
    std::vector<Matrix> omega_gens;  // generate ΩX_n(q)

    static ClassicalGroup create(GroupType t, size_t n, uint64_t q);
    BigInt order() const { return group_order(type, n, q, false); }
    BigInt omega_order() const { return group_order(type, n, q, true); }
    std::string describe() const;
};

// membership of a form-preserving g in ΩX (determinant, spinor norm, or
// the parity of rank(g - I) for even q orthogonal groups)
bool in_omega(const Matrix& g, const ClassicalGroup& G);
bool in_omega(const Matrix& g, const Form& f);

// plain-text generator tables: header "X n q role", then n rows of integers
void write_generators(std::ostream& os, const ClassicalGroup& G);
struct GeneratorTable {
    GroupType type;
    size_t n;
    uint64_t q;
    std::string role;  // "full" or "omega"
    std::vector<Matrix> mats;
};
std::vector<GeneratorTable> read_generators(std::istream& is);
// tables that replace the built-in generators in ClassicalGroup::create; each matrix is checked
// against the standard form (and Omega membership for the omega role)
void install_generator_tables(const std::vector<GeneratorTable>& tables);
void clear_generator_tables();

// product replacement with accumulator
class Sampler {
public:
    enum class Mode { Full, Omega };
    Sampler(const ClassicalGroup& G, Mode mode, uint64_t seed);
    Matrix sample();
    // exact uniform element of GL (Full) or SL (Omega); type L only
    Matrix sample_exact();
    uint64_t steps_taken() const { return steps_; }

    static constexpr unsigned kSlots = 12, kBurnIn = 200, kStepsPerSample = 10;

private:
    void step();
    const ClassicalGroup* G_;
    Mode mode_;
    Rng rng_;
    std::vector<Matrix> slots_, inv_;
    Matrix acc_;
    uint64_t steps_ = 0;
};

}  // namespace stingray
