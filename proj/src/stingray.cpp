#include "stingray/stingray.hpp"

#include <stdexcept>

namespace stingray {

namespace {

BigInt smallest_ppd_dividing(const BigInt& Q, unsigned e, const BigInt& order) {
    for (const BigInt& r : ppd_set(Q, e))
        if (order % r == 0) return r;
    return 0;
}

}  // namespace

std::optional<StingrayCertificate> classify_stingray(const Matrix& g, const ClassicalGroup& G) {
    if (!is_invertible(g)) throw std::invalid_argument("classify_stingray: element not invertible");
    Subspace U = moved_space(g), F = fixed_space(g);
    unsigned e = unsigned(U.dim());
    if (e == 0 || !is_direct_sum(U, F)) return std::nullopt;
    Matrix h = restrict(g, U);
    Poly f = charpoly(h);
    if (!is_irreducible(f)) return std::nullopt;
    BigInt Q = G.F->size();
    BigInt ord = element_order(h, factor_power_minus_one(Q, e));
    BigInt r = smallest_ppd_dividing(Q, e, ord);
    if (r == 0) return std::nullopt;
    StingrayCertificate c;
    c.element = g;
    c.e = e;
    c.r = r;
    c.order = ord;
    c.U = std::move(U);
    c.F = std::move(F);
    c.factor = std::move(f);
    return c;
}

namespace {

std::optional<StingrayCertificate> scan_one(const Matrix& g, const ClassicalGroup& G, const std::vector<PolyFactor>& fac,
                                            unsigned e) {
    const Field& K = *G.F;
    BigInt Q = K.size();
    if (ppd_set(Q, e).empty()) return std::nullopt;
    unsigned count = 0;
    for (auto& pf : fac)
        if (pf.f.deg() == int(e)) count += pf.mult;
    if (count != 1) return std::nullopt;
    // M kills the unipotent part and every other semisimple block
    size_t d = g.rows();
    BigInt M = 1;
    while (M < d) M *= K.p();
    BigInt L = 1;
    for (auto& pf : fac) {
        int dd = pf.f.deg();
        if (dd == int(e)) continue;
        if (dd == 1 && pf.f.c[0] == K.neg(1)) continue;  // t - 1
        BigInt x = pow_big(Q, dd) - 1;
        mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), x.get_mpz_t());
    }
    M *= L;
    Matrix h = mat_pow(g, M);
    if (h.is_identity()) return std::nullopt;
    Factorization bound = factor_power_minus_one(Q, e);
    if (!mat_pow(h, factorization_value(bound)).is_identity()) return std::nullopt;
    BigInt o = element_order(h, bound);
    BigInt r = smallest_ppd_dividing(Q, e, o);
    if (r == 0) return std::nullopt;
    h = mat_pow(h, o / r);
    return classify_stingray(h, G);
}

}  // namespace

std::optional<StingrayCertificate> stingray_scan(const Matrix& g, const ClassicalGroup& G, unsigned e_lo, unsigned e_hi) {
    if (e_lo < 2) throw std::invalid_argument("stingray_scan: e_lo must be at least 2");
    if (e_hi > g.rows()) e_hi = unsigned(g.rows());
    if (e_lo > e_hi) return std::nullopt;
    auto fac = factor_poly(charpoly(g));
    for (unsigned e = e_lo; e <= e_hi; ++e) {
        bool present = false;
        for (auto& pf : fac) present |= pf.f.deg() == int(e);
        if (!present) continue;
        if (auto c = scan_one(g, G, fac, e)) return c;
    }
    return std::nullopt;
}

std::vector<StingrayCertificate> stingray_scan_all(const Matrix& g, const ClassicalGroup& G, unsigned e_lo, unsigned e_hi) {
    if (e_lo < 2) throw std::invalid_argument("stingray_scan: e_lo must be at least 2");
    std::vector<StingrayCertificate> out;
    if (e_hi > g.rows()) e_hi = unsigned(g.rows());
    auto fac = factor_poly(charpoly(g));
    for (unsigned e = e_lo; e <= e_hi; ++e) {
        bool present = false;
        for (auto& pf : fac) present |= pf.f.deg() == int(e);
        if (!present) continue;
        if (auto c = scan_one(g, G, fac, e)) out.push_back(std::move(*c));
    }
    return out;
}

unsigned omega_power(const ClassicalGroup& G) {
    switch (G.type) {
        case GroupType::L: return unsigned(G.q - 1);
        case GroupType::U: return unsigned(G.q + 1);
        case GroupType::Sp: return 1;
        default: return 2;
    }
}

StingrayCertificate power_to_omega(const StingrayCertificate& c, const ClassicalGroup& G) {
    BigInt m = omega_power(G);
    Matrix h = mat_pow(c.element, m);
    BigInt g = gcd(c.order, m);
    BigInt o = c.order / g;
    if (o % c.r != 0) throw std::logic_error("power_to_omega: ppd lost by powering");
    h = mat_pow(h, o / c.r);
    auto out = classify_stingray(h, G);
    if (!out) throw std::logic_error("power_to_omega: power is not a stingray element");
    return *out;
}

StingrayCertificate conjugate_certificate(const StingrayCertificate& c, const Matrix& x, const Matrix& xinv) {
    StingrayCertificate o = c;
    o.element = xinv * c.element * x;
    o.U = image(c.U, x);
    o.F = image(c.F, x);
    return o;
}

std::optional<DuoReport> form_duo(const StingrayCertificate& c1_in, const StingrayCertificate& c2_in, const ClassicalGroup& G) {
    if (c1_in.element.rows() != G.n || c2_in.element.rows() != G.n || c1_in.element.field() != G.F ||
        c2_in.element.field() != G.F)
        throw std::invalid_argument("form_duo: certificates from a different group");
    const StingrayCertificate* a = &c1_in;
    const StingrayCertificate* b = &c2_in;
    if (a->e < b->e) std::swap(a, b);
    if (!intersects_trivially(a->U, b->U)) return std::nullopt;
    DuoReport D;
    D.cert1 = *a;
    D.cert2 = *b;
    D.Vd = subspace_sum(a->U, b->U);
    D.d = D.Vd.dim();
    Target t;
    t.type = G.type;
    if (G.form.has_form()) {
        SubspaceType st = subspace_type(D.Vd, G.form);
        if (st == SubspaceType::Degenerate) return std::nullopt;
        if (G.form.orthogonal()) t.type = st == SubspaceType::Plus ? GroupType::Oplus : st == SubspaceType::Minus ? GroupType::Ominus : GroupType::Ocirc;
        if (G.type == GroupType::Sp && G.F->p() == 2) t.orthogonal_unresolved = true;
        D.form = restrict_form(G.form, D.Vd);
        D.form.type = t.type;
    } else {
        D.form.type = GroupType::L;
        D.form.F = G.F;
        D.form.n = D.d;
    }
    D.target = t;
    D.r1 = restrict(a->element, D.Vd);
    D.r2 = restrict(b->element, D.Vd);
    return D;
}

}  // namespace stingray
