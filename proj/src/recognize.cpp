#include "stingray/recognize.hpp"

namespace stingray {

std::string verdict_name(VerdictTag t) {
    switch (t) {
        case VerdictTag::ContainsOmega: return "ContainsOmega";
        case VerdictTag::OrthogonalInSp: return "OrthogonalInSp";
        case VerdictTag::ProperSubgroup: return "ProperSubgroup";
        case VerdictTag::Unverified: return "Unverified";
    }
    return "?";
}

std::string Verdict::name() const {
    switch (tag) {
        case VerdictTag::ContainsOmega: return "ContainsOmega(" + type_name(target) + ")";
        case VerdictTag::OrthogonalInSp:
            return std::string("OrthogonalInSp(") + (target == GroupType::Oplus ? "+" : "-") + ")";
        default: return verdict_name(tag);
    }
}

Subspace spin(const Subspace& U, const std::vector<Matrix>& gens) {
    Subspace S = U;
    std::vector<Vec> queue;
    for (size_t i = 0; i < U.dim(); ++i) queue.push_back(U.basis().row_vec(i));
    while (!queue.empty()) {
        Vec v = queue.back();
        queue.pop_back();
        for (auto& g : gens) {
            Vec w = vec_mul(v, g);
            if (S.contains(w)) continue;
            S = subspace_sum(S, Subspace::span(Matrix::from_rows(U.field(), {w})));
            queue.push_back(w);
            if (S.dim() == S.ambient()) return S;
        }
    }
    return S;
}

bool duo_irreducible(const DuoReport& D) {
    if (subspace_intersection(fixed_space(D.r1), fixed_space(D.r2)).dim() != 0) return false;
    std::vector<Matrix> gens{D.r1, D.r2};
    if (spin(moved_space(D.r1), gens).dim() != D.d) return false;
    if (spin(moved_space(D.r2), gens).dim() != D.d) return false;
    return true;
}

Verdict generation_verdict(const DuoReport& D, const ClassicalGroup& G, uint64_t seed) {
    Verdict v;
    const Field& K = *G.F;
    size_t d = D.d;
    v.target = D.target.type;
    if (pow_big(BigInt(K.size()), d) > MatrixBSGS::kMaxPoints) {
        v.tag = VerdictTag::Unverified;
        v.note = "q^d beyond the recognition guard";
        return v;
    }
    v.irreducible = duo_irreducible(D);
    if (!v.irreducible) {
        v.tag = VerdictTag::ProperSubgroup;
        v.note = "reducible";
        if (D.target.type == GroupType::L || !D.target.orthogonal_unresolved)
            v.target_order = group_order(D.target.type, d, G.q, true);
        return v;
    }
    std::vector<Matrix> gens{D.r1, D.r2};
    MatrixBSGS::Options opt;
    opt.seed = seed;
    if (D.target.orthogonal_unresolved) {
        // Sp with q even: an invariant quadratic form puts the pair in GO^eps
        if (auto qf = invariant_quadratic_form(gens, D.form)) {
            GroupType eps = qf->type;
            v.target = eps;
            v.target_order = group_order(eps, d, G.q, true);
            bool in = in_omega(D.r1, *qf) && in_omega(D.r2, *qf);
            opt.stop_at = in ? v.target_order : group_order(eps, d, G.q, false);
            auto B = MatrixBSGS::build(gens, G.F, d, opt);
            v.order = B.order();
            v.order_certified = B.exact() || v.order == opt.stop_at;
            v.tag = v.order % v.target_order == 0 ? VerdictTag::OrthogonalInSp : VerdictTag::ProperSubgroup;
            v.note = std::string("invariant quadratic form of ") + (eps == GroupType::Oplus ? "plus" : "minus") + " type";
            return v;
        }
        v.target = GroupType::Sp;
    }
    v.target_order = group_order(v.target, d, G.q, true);
    bool in = in_omega(D.r1, D.form) && in_omega(D.r2, D.form);
    opt.stop_at = in ? v.target_order : group_order(v.target, d, G.q, false);
    auto B = MatrixBSGS::build(gens, G.F, d, opt);
    v.order = B.order();
    v.order_certified = B.exact() || v.order == opt.stop_at;
    v.tag = v.order % v.target_order == 0 ? VerdictTag::ContainsOmega : VerdictTag::ProperSubgroup;
    return v;
}

}  // namespace stingray
