#pragma once

#include <string>
#include <vector>

#include "stingray/stingray.hpp"

namespace stingray {

enum class VerdictTag { ContainsOmega, OrthogonalInSp, ProperSubgroup, Unverified };
std::string verdict_name(VerdictTag t);

struct Verdict {
    VerdictTag tag = VerdictTag::Unverified;
    GroupType target = GroupType::L;  // Y, or the orthogonal type for OrthogonalInSp
    BigInt order;                     // order of the restricted pair (0 when unverified)
    BigInt target_order;              // |ΩY_d(q)|
    bool order_certified = false;     // reached a known upper bound or passed the deterministic test
    bool irreducible = false;
    std::string note;

    bool generating() const { return tag == VerdictTag::ContainsOmega || tag == VerdictTag::OrthogonalInSp; }
    std::string name() const;
};

// smallest subspace containing U and invariant under gens
Subspace spin(const Subspace& U, const std::vector<Matrix>& gens);
// exact for a duo: a proper invariant subspace either lies in F1 and F2 or
// contains U1 or U2, so it is enough to look at F1 ∩ F2 and the spins of U1, U2
bool duo_irreducible(const DuoReport& D);

Verdict generation_verdict(const DuoReport& D, const ClassicalGroup& G, uint64_t seed = 0x5c4e1e75ULL);

}  // namespace stingray
