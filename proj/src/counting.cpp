#include "stingray/counting.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace stingray {

namespace {

Rat qpow(uint64_t q, long e) { return pow_rat(Rat(BigInt(std::to_string(q))), e); }

BigInt as_integer(const Rat& r, const char* what) {
    Rat c = r;
    c.canonicalize();
    if (c.get_den() != 1) throw std::logic_error(std::string(what) + ": non-integral value " + c.get_str());
    return c.get_num();
}

bool is_O(GroupType X) { return X == GroupType::Oplus || X == GroupType::Ominus; }
int eps_of(GroupType X) { return X == GroupType::Ominus ? -1 : 1; }

void need_prime_power(uint64_t q) {
    if (q < 2) throw std::invalid_argument("q must be a prime power >= 2");
    prime_power(q);
}

}  // namespace

Rat omega(unsigned k, unsigned d, uint64_t q, int sign) {
    if (k < 1 || k > d) throw std::invalid_argument("omega: need 1 <= k <= d");
    if (q < 2) throw std::invalid_argument("omega: need q >= 2");
    if (sign != 1 && sign != -1) throw std::invalid_argument("omega: sign must be +1 or -1");
    Rat tq = Rat(BigInt(std::to_string(q))) * sign;
    Rat r = 1;
    for (unsigned i = k; i <= d; ++i) r *= 1 - pow_rat(tq, -long(i));
    r.canonicalize();
    return r;
}

Rat delta(unsigned k, unsigned d, uint64_t q, int sign) {
    if (k < 1 || k >= d) throw std::invalid_argument("delta: need 1 <= k < d");
    Rat r = omega(k + 1, d, q, sign) / omega(1, d - k, q, sign);
    r.canonicalize();
    return r;
}

Rat gamma_eps(unsigned e1, unsigned e2, uint64_t q, int eps) {
    if (e1 % 2 || e2 % 2) throw std::invalid_argument("gamma_eps: e1 and e2 must be even");
    if (eps != 1 && eps != -1) throw std::invalid_argument("gamma_eps: eps must be +1 or -1");
    if (q < 2) throw std::invalid_argument("gamma_eps: need q >= 2");
    unsigned d = e1 + e2;
    Rat r = 1 - (qpow(q, -long(e1 / 2)) + eps * qpow(q, -long(e2 / 2))) / (1 + eps * qpow(q, -long(d / 2)));
    r.canonicalize();
    return r;
}

BigInt gaussian_binomial(unsigned d, unsigned e, uint64_t q) {
    if (e > d) return 0;
    BigInt Q(std::to_string(q)), num = 1, den = 1;
    for (unsigned i = 0; i < e; ++i) {
        num *= pow_big(Q, d - i) - 1;
        den *= pow_big(Q, i + 1) - 1;
    }
    return num / den;
}

bool parity_ok(GroupType X, unsigned e) {
    switch (X) {
        case GroupType::L: return true;
        case GroupType::U: return e % 2 == 1;
        case GroupType::Sp:
        case GroupType::Oplus:
        case GroupType::Ominus: return e % 2 == 0;
        default: return false;
    }
}

void check_count_params(GroupType X, unsigned d, uint64_t q, unsigned e) {
    need_prime_power(q);
    if (X == GroupType::Ocirc) throw std::invalid_argument("odd-dimensional orthogonal groups have no stingray duos");
    if (e < 1 || e >= d) throw std::invalid_argument("need 1 <= e <= d-1");
    if (!parity_ok(X, e)) throw std::invalid_argument("e has the wrong parity for " + type_name(X));
    if ((X == GroupType::Sp || is_O(X)) && d % 2) throw std::invalid_argument(type_name(X) + " needs even d");
}

BigInt num_subspaces(unsigned d, uint64_t q, unsigned e, GroupType X) {
    check_count_params(X, d, q, e);
    unsigned e1 = e, e2 = d - e;
    Rat v;
    switch (X) {
        case GroupType::L: return gaussian_binomial(d, e, q);
        case GroupType::U: v = qpow(q, 2L * e1 * e2) * delta(e1, d, q, -1); break;
        case GroupType::Sp: v = qpow(q, long(e1) * e2) * delta(e1 / 2, d / 2, q * q, 1); break;
        default:
            v = qpow(q, long(e1) * e2) * Rat(1, 2) * delta(e1 / 2, d / 2, q * q, 1) * gamma_eps(e1, e2, q, eps_of(X));
    }
    return as_integer(v, "num_subspaces");
}

BigInt torus_order(unsigned e, uint64_t q, GroupType X) {
    BigInt Q(std::to_string(q));
    switch (X) {
        case GroupType::L: return pow_big(Q, e) - 1;
        case GroupType::U: return pow_big(Q, e) + 1;
        default: return pow_big(Q, e / 2) + 1;
    }
}

std::vector<BigInt> stingray_primes(GroupType X, uint64_t q, unsigned e) {
    BigInt Q(std::to_string(X == GroupType::U ? q * q : q));
    BigInt T = torus_order(e, q, X);
    std::vector<BigInt> out;
    for (auto& r : ppd_set(Q, e))
        if (T % r == 0) out.push_back(r);
    return out;
}

namespace {

void need_ppd(GroupType X, uint64_t q, unsigned e) {
    if (stingray_primes(X, q, e).empty())
        throw std::invalid_argument("no primitive prime divisor of q^(ue)-1 divides the torus order for e=" + std::to_string(e));
}

}  // namespace

BigInt class_size_per_subspace(unsigned d, uint64_t q, unsigned e, GroupType X) {
    check_count_params(X, d, q, e);
    need_ppd(X, q, e);
    BigInt top = is_O(X) ? group_order(GroupType::Ominus, e, q) : group_order(X, e, q);
    return top / torus_order(e, q, X);
}

BigInt complement_group_order(unsigned d, uint64_t q, unsigned e, GroupType X) {
    check_count_params(X, d, q, e);
    if (is_O(X)) return group_order(X == GroupType::Oplus ? GroupType::Ominus : GroupType::Oplus, d - e, q);
    return group_order(X, d - e, q);
}

BigInt centralizer_order(unsigned d, uint64_t q, unsigned e, GroupType X) {
    check_count_params(X, d, q, e);
    need_ppd(X, q, e);
    return torus_order(e, q, X) * complement_group_order(d, q, e, X);
}

BigInt class_size(unsigned d, uint64_t q, unsigned e, GroupType X) {
    BigInt c = centralizer_order(d, q, e, X);
    BigInt g = group_order(X, d, q);
    if (g % c != 0) throw std::logic_error("class_size: centralizer order does not divide the group order");
    return g / c;
}

PartnerCount duo_partner_count(unsigned d, uint64_t q, unsigned e1, GroupType X) {
    if (e1 >= d) throw std::invalid_argument("need e1 < d");
    unsigned e2 = d - e1;
    check_count_params(X, d, q, e1);
    check_count_params(X, d, q, e2);
    PartnerCount out;
    BigInt c2 = class_size_per_subspace(d, q, e2, X);
    if (X == GroupType::L) {
        BigInt N = pow_big(BigInt(std::to_string(q)), 2ul * e1 * e2) * c2;
        out.exact = N;
        out.lower = out.upper = Rat(N);
        Rat ratio = Rat((pow_big(BigInt(std::to_string(q)), e1) - 1) * (pow_big(BigInt(std::to_string(q)), e2) - 1)) /
                    qpow(q, 2L * e1 * e2);
        ratio.canonicalize();
        out.ratio = ratio;
        return out;
    }
    // partners U' of a fixed U range over U(d, q, e2, X); this equals |U(e1)| except for O-
    uint64_t Qu = X == GroupType::U ? q * q : q;
    Rat base = Rat(num_subspaces(d, q, e2, X) * c2);
    out.lower = (1 - Rat(3, 2 * Qu)) * base;
    out.upper = base;
    out.lower.canonicalize();
    return out;
}

BigInt duo_partner_count_given_k(unsigned d, uint64_t q, unsigned e1, GroupType X, const Rat& k) {
    if (e1 >= d) throw std::invalid_argument("need e1 < d");
    unsigned e2 = d - e1;
    check_count_params(X, d, q, e1);
    check_count_params(X, d, q, e2);
    Rat N = k * Rat(num_subspaces(d, q, e2, X) * class_size_per_subspace(d, q, e2, X));
    N.canonicalize();
    if (N.get_den() != 1) throw std::invalid_argument("k |U(e2)| c(e2) is not an integer");
    return N.get_num();
}

std::pair<Rat, Rat> subspace_bound_constants(GroupType X, uint64_t q) {
    switch (X) {
        case GroupType::L: return q == 2 ? std::pair{Rat(1), Rat(4)} : std::pair{Rat(1), Rat(9, 5)};
        case GroupType::U: return q == 2 ? std::pair{Rat(5, 8), Rat(1)} : std::pair{Rat(20, 27), Rat(1)};
        case GroupType::Sp: return q == 2 ? std::pair{Rat(1), Rat(16, 11)} : std::pair{Rat(1), Rat(8, 7)};
        case GroupType::Ominus:
            if (q == 2) return {Rat(1, 2), Rat(12, 11)};
            if (q == 3) return {Rat(1, 2), Rat(54, 71)};
            return {Rat(1, 2), Rat(160, 239)};
        case GroupType::Oplus:
            if (q == 2) return {Rat(5, 22), Rat(8, 11)};
            if (q == 3) return {Rat(20, 61), Rat(81, 142)};
            return {Rat(47, 128), Rat(128, 239)};
        default: throw std::invalid_argument("no subspace bound constants for " + type_name(X));
    }
}

// ---- constants for the generation bound ----

const std::vector<ConstRow>& constant_table() {
    using G = GroupType;
    using K = ConstKind;
    // more specific rows first; lookup takes the first match
    static const std::vector<ConstRow> rows = {
        {K::Lambda, 0, G::L, 2, 0, 0, 0, {}, {}, "1", "lambda L"},
        {K::Lambda, 0, G::U, 2, 0, 0, 0, {}, {}, "0", "lambda U"},
        {K::Lambda, 0, G::Sp, 2, 0, 0, 0, {}, {}, "0", "lambda Sp"},
        {K::Lambda, 0, G::Oplus, 2, 0, 0, 0, {}, {}, "0", "lambda O+"},
        {K::Lambda, 0, G::Ominus, 2, 0, 0, 0, {}, {}, "0", "lambda O-"},

        {K::Kappa, 0, G::L, 2, 2, 0, 0, {}, {}, "0.11", "kappa L q=2"},
        {K::Kappa, 0, G::L, 3, 0, 0, 0, {}, {}, "0.06", "kappa L q>=3"},
        {K::Kappa, 0, G::U, 2, 2, 0, 0, {}, {}, "5.3e-6", "kappa U q=2"},
        {K::Kappa, 0, G::U, 3, 0, 0, 0, {}, {}, "1.6e-8", "kappa U q>=3"},
        {K::Kappa, 0, G::Sp, 3, 0, 2, 0, {}, {}, "8.42", "kappa Sp e2=2 q>=3"},
        {K::Kappa, 0, G::Sp, 2, 2, 0, 0, {}, {}, "1.15", "kappa Sp q=2"},
        {K::Kappa, 0, G::Sp, 3, 0, 0, 0, {}, {}, "1.52", "kappa Sp q>=3"},
        {K::Kappa, 0, G::Oplus, 2, 2, 2, 0, {}, {}, "14.61", "kappa O+ e2=2 q=2"},
        {K::Kappa, 0, G::Oplus, 3, 0, 2, 32, {11, 13, 17}, {}, "10.43", "kappa O+ e2=2 d=32 q in {11,13,17}"},
        {K::Kappa, 0, G::Oplus, 3, 0, 2, 0, {}, {}, "3.53", "kappa O+ e2=2 q>=3"},
        {K::Kappa, 0, G::Oplus, 2, 2, 0, 0, {}, {}, "2.08", "kappa O+ q=2"},
        {K::Kappa, 0, G::Oplus, 3, 0, 0, 0, {}, {}, "1.54", "kappa O+ q>=3"},
        {K::Kappa, 0, G::Ominus, 2, 2, 0, 0, {}, {}, "1.85", "kappa O- q=2"},
        {K::Kappa, 0, G::Ominus, 3, 0, 0, 0, {}, {}, "3.02", "kappa O- q>=3"},

        // class 1
        {K::P, 1, G::L, 2, 2, 0, 0, {}, {}, "0", "AC1 L q=2"},
        {K::P, 1, G::L, 3, 0, 0, 0, {}, {}, "0", "AC1 L q>=3"},
        {K::P, 1, G::U, 2, 2, 0, 0, {}, {}, "7.5e-11", "AC1 U q=2"},
        {K::P, 1, G::U, 3, 0, 0, 0, {}, {}, "3.3e-17", "AC1 U q>=3"},
        {K::P, 1, G::Sp, 2, 2, 0, 0, {}, {}, "0.008", "AC1 Sp q=2"},
        {K::P, 1, G::Sp, 3, 0, 0, 0, {}, {}, "1.02e-4", "AC1 Sp q>=3"},
        {K::P, 1, G::Oplus, 2, 2, 0, 0, {}, {}, "0.035", "AC1 O+ q=2"},
        {K::P, 1, G::Oplus, 3, 0, 0, 0, {}, {}, "3.1e-4", "AC1 O+ q>=3"},
        {K::P, 1, G::Ominus, 2, 0, 0, 0, {}, {}, "0", "AC1 O-"},
        // class 2
        {K::P, 2, G::L, 2, 2, 0, 0, {}, {}, "0", "AC2 L q=2"},
        {K::P, 2, G::L, 3, 0, 0, 0, {}, {}, "1.4e-6", "AC2 L q>=3"},
        {K::P, 2, G::U, 2, 2, 0, 0, {}, {}, "9.9e-7", "AC2 U q=2"},
        {K::P, 2, G::U, 3, 0, 0, 0, {}, {}, "1.3e-10", "AC2 U q>=3"},
        {K::P, 2, G::Sp, 2, 0, 0, 0, {}, {}, "0", "AC2 Sp"},
        {K::P, 2, G::Oplus, 2, 2, 0, 0, {}, {}, "0", "AC2 O+ q=2"},
        {K::P, 2, G::Oplus, 3, 0, 0, 0, {}, {}, "0.18", "AC2 O+ q>=3"},
        {K::P, 2, G::Ominus, 2, 2, 0, 0, {}, {}, "0", "AC2 O- q=2"},
        {K::P, 2, G::Ominus, 3, 0, 0, 0, {}, {}, "0.18", "AC2 O- q>=3"},
        // class 3
        {K::P, 3, G::L, 2, 2, 0, 0, {}, {}, "0.0081", "AC3 L q=2"},
        {K::P, 3, G::L, 3, 0, 0, 0, {}, {}, "0.00032", "AC3 L q>=3"},
        {K::P, 3, G::U, 2, 2, 0, 0, {}, {}, "4.3e-6", "AC3 U q=2"},
        {K::P, 3, G::U, 3, 0, 0, 0, {}, {}, "1.5e-8", "AC3 U q>=3"},
        {K::P, 3, G::Sp, 2, 2, 0, 0, {}, {}, "0.074", "AC3 Sp q=2"},
        {K::P, 3, G::Sp, 3, 0, 0, 0, {}, {}, "0.6", "AC3 Sp q>=3"},
        {K::P, 3, G::Oplus, 2, 2, 2, 0, {}, {}, "12.81", "AC3 O+ e2=2 q=2 (dagger)"},
        {K::P, 3, G::Oplus, 4, 0, 2, 0, {}, {}, "2.005", "AC3 O+ e2=2 q>=4 (dagger)"},
        {K::P, 3, G::Oplus, 2, 2, 0, 0, {}, {}, "0.279", "AC3 O+ q=2"},
        {K::P, 3, G::Oplus, 3, 0, 0, 0, {}, {}, "0.017", "AC3 O+ q>=3"},
        {K::P, 3, G::Ominus, 2, 2, 0, 0, {}, {}, "0.086", "AC3 O- q=2"},
        {K::P, 3, G::Ominus, 3, 0, 0, 0, {}, {}, "0.006", "AC3 O- q>=3"},
        // class 5
        {K::P, 5, G::L, 2, 2, 0, 0, {}, {}, "0", "AC5 L q=2"},
        {K::P, 5, G::L, 3, 0, 0, 0, {}, {}, "0.016", "AC5 L q>=3"},
        {K::P, 5, G::U, 2, 2, 0, 0, {}, {}, "0", "AC5 U q=2"},
        {K::P, 5, G::U, 3, 0, 0, 0, {}, {}, "6e-14", "AC5 U q>=3"},
        {K::P, 5, G::Sp, 2, 2, 0, 0, {}, {}, "0", "AC5 Sp q=2"},
        {K::P, 5, G::Sp, 3, 0, 0, 0, {}, {}, "0.91", "AC5 Sp q>=3"},
        {K::P, 5, G::Oplus, 2, 2, 0, 0, {}, {}, "0", "AC5 O+ q=2"},
        {K::P, 5, G::Oplus, 3, 0, 0, 0, {}, {}, "1.24", "AC5 O+ q>=3"},
        {K::P, 5, G::Ominus, 2, 2, 0, 0, {}, {}, "0", "AC5 O- q=2"},
        {K::P, 5, G::Ominus, 3, 0, 0, 0, {}, {}, "2.73", "AC5 O- q>=3"},
        // class 6
        {K::P, 6, G::L, 2, 2, 0, 0, {}, {}, "0", "AC6 L q=2"},
        {K::P, 6, G::L, 3, 0, 0, 0, {}, {}, "2.1e-26", "AC6 L q>=3"},
        {K::P, 6, G::U, 2, 0, 0, 0, {}, {}, "0", "AC6 U"},
        {K::P, 6, G::Sp, 2, 2, 0, 0, {}, {}, "0", "AC6 Sp q=2"},
        {K::P, 6, G::Sp, 3, 0, 2, 32, {11, 13, 17}, {}, "6.9", "AC6 Sp d=32 e2=2 q in {11,13,17} (dagger)"},
        {K::P, 6, G::Sp, 3, 0, 0, 0, {}, {}, "0.0053", "AC6 Sp q>=3"},
        {K::P, 6, G::Oplus, 2, 2, 0, 0, {}, {}, "0", "AC6 O+ q=2"},
        {K::P, 6, G::Oplus, 3, 0, 2, 32, {11, 13, 17}, {}, "6.9", "AC6 O+ d=32 e2=2 q in {11,13,17} (dagger)"},
        {K::P, 6, G::Oplus, 3, 0, 0, 0, {}, {}, "0.0053", "AC6 O+ q>=3"},
        {K::P, 6, G::Ominus, 2, 0, 0, 0, {}, {}, "0", "AC6 O-"},
        // class 8
        {K::P, 8, G::L, 2, 2, 0, 0, {}, {}, "0.092", "AC8 L q=2"},
        {K::P, 8, G::L, 3, 0, 0, 0, {}, {}, "0.04", "AC8 L q>=3"},
        {K::P, 8, G::U, 2, 0, 0, 0, {}, {}, "0", "AC8 U"},
        {K::P, 8, G::Sp, 2, 0, 0, 0, {}, {}, "0", "AC8 Sp"},
        {K::P, 8, G::Oplus, 2, 0, 0, 0, {}, {}, "0", "AC8 O+"},
        {K::P, 8, G::Ominus, 2, 0, 0, 0, {}, {}, "0", "AC8 O-"},
        // class 9
        {K::P, 9, G::L, 2, 0, 0, 0, {}, {}, "0", "AC9 L"},
        {K::P, 9, G::U, 2, 0, 0, 0, {}, {}, "0", "AC9 U"},
        {K::P, 9, G::Sp, 2, 2, 0, 0, {}, {}, "0.399", "AC9 Sp q=2"},
        {K::P, 9, G::Sp, 3, 0, 0, 0, {}, {}, "0", "AC9 Sp q>=3"},
        {K::P, 9, G::Oplus, 2, 2, 0, 0, {}, {2, 4}, "0", "AC9 O+ q=2 d = 2,4 mod 8 (dagger)"},
        {K::P, 9, G::Oplus, 2, 2, 0, 0, {}, {}, "1.76", "AC9 O+ q=2 (dagger)"},
        {K::P, 9, G::Oplus, 3, 0, 0, 0, {}, {}, "0.102", "AC9 O+ q>=3"},
        {K::P, 9, G::Ominus, 2, 2, 0, 0, {}, {0, 6}, "0", "AC9 O- q=2 d = 0,6 mod 8 (dagger)"},
        {K::P, 9, G::Ominus, 2, 2, 0, 0, {}, {}, "1.76", "AC9 O- q=2 (dagger)"},
        {K::P, 9, G::Ominus, 3, 0, 0, 0, {}, {}, "0.102", "AC9 O- q>=3"},
    };
    return rows;
}

Rat lookup_constant(ConstKind kind, unsigned cls, GroupType X, uint64_t q, unsigned d, unsigned e2) {
    for (const auto& r : constant_table()) {
        if (r.kind != kind || r.type != X) continue;
        if (kind == ConstKind::P && r.cls != cls) continue;
        if (q < r.q_lo || (r.q_hi && q > r.q_hi)) continue;
        if (r.e2 && r.e2 != e2) continue;
        if (r.d && r.d != d) continue;
        if (!r.q_in.empty() && std::find(r.q_in.begin(), r.q_in.end(), q) == r.q_in.end()) continue;
        if (!r.d_mod8.empty() && std::find(r.d_mod8.begin(), r.d_mod8.end(), d % 8) == r.d_mod8.end()) continue;
        return rat_from_decimal(r.value);
    }
    throw std::invalid_argument("no constant for " + type_name(X));
}

Rat lambda_X(GroupType X) { return lookup_constant(ConstKind::Lambda, 0, X, 2, 0, 0); }

Rat kappa_X(GroupType X, uint64_t q, unsigned d, unsigned e2) { return lookup_constant(ConstKind::Kappa, 0, X, q, d, e2); }

namespace {

void check_bound_params(GroupType X, unsigned d, uint64_t q, unsigned e1, unsigned e2) {
    need_prime_power(q);
    if (X == GroupType::Ocirc) throw std::invalid_argument("odd-dimensional orthogonal groups have no stingray duos");
    if (d <= 8) throw std::invalid_argument("the generation bound needs d > 8");
    if (e1 + e2 != d) throw std::invalid_argument("need d = e1 + e2");
    if (e2 < 2 || e2 > e1) throw std::invalid_argument("need 2 <= e2 <= e1");
    if (!parity_ok(X, e1) || !parity_ok(X, e2)) throw std::invalid_argument("e1, e2 have the wrong parity for " + type_name(X));
}

}  // namespace

Rat rho_gen_lower_bound(GroupType X, unsigned d, uint64_t q, unsigned e1, unsigned e2) {
    check_bound_params(X, d, q, e1, e2);
    Rat r = 1 - lambda_X(X) * (qpow(q, -1) + qpow(q, -2)) - kappa_X(X, q, d, e2) * qpow(q, 3 - long(d));
    r.canonicalize();
    return r;
}

Rat p_constant(unsigned i, GroupType X, uint64_t q, unsigned d, unsigned e2) {
    if (i < 1 || i > 9) throw std::invalid_argument("class index must be in [1,9]");
    if (i == 4 || i == 7) return 0;
    return lookup_constant(ConstKind::P, i, X, q, d, e2);
}

Rat prob_i_upper(unsigned i, GroupType X, uint64_t q, unsigned d, unsigned e1, unsigned e2) {
    check_bound_params(X, d, q, e1, e2);
    Rat r = p_constant(i, X, q, d, e2) * qpow(q, 3 - long(d));
    if (i == 1 && X == GroupType::L) r += lambda_X(X) * (qpow(q, -1) + qpow(q, -2));
    r.canonicalize();
    return r;
}

namespace {

bool small_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned k = 2; k * k <= n; ++k)
        if (n % k == 0) return false;
    return true;
}

void check_alt(unsigned n, unsigned p, unsigned r) {
    if (!small_prime(p) || !small_prime(r)) throw std::invalid_argument("p and r must be primes");
    if (p > r) throw std::invalid_argument("need p <= r");
    if (p + r >= n) throw std::invalid_argument("need p + r < n");
}

}  // namespace

Rat alt_overlap_proportion(unsigned n, unsigned p, unsigned r) {
    check_alt(n, p, r);
    Rat v(long(r) * p, long(n - p + 1));
    for (unsigned i = 0; i + 2 <= p; ++i) v *= Rat(long(n - r - i), long(n - i));
    v.canonicalize();
    return v;
}

Rat alt_overlap_lower_bound(unsigned n, unsigned p, unsigned r) {
    check_alt(n, p, r);
    long rp = long(r) * p;
    Rat v(rp * (long(n) - rp), long(n - p + 2) * long(n - p + 2));
    v.canonicalize();
    return v;
}

// ---- string front end ----

namespace {

using Args = std::vector<std::string>;

unsigned to_u(const std::string& s, const char* what) {
    try {
        size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size() || v < 0) throw std::invalid_argument("");
        return unsigned(v);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("bad ") + what + ": " + s);
    }
}

int to_sign(const std::string& s) {
    if (s == "+" || s == "+1" || s == "1") return 1;
    if (s == "-" || s == "-1") return -1;
    throw std::invalid_argument("bad sign: " + s);
}

void need(const Args& a, size_t n, const char* usage) {
    if (a.size() != n) throw std::invalid_argument(std::string("usage: ") + usage);
}

struct Entry {
    const char* usage;
    std::function<CountReport(const Args&)> fn;
};

const std::map<std::string, Entry>& registry() {
    static const std::map<std::string, Entry> m = {
        {"omega", {"omega k d q sign", [](const Args& a) {
             need(a, 4, "omega k d q sign");
             CountReport c;
             c.params = {{"k", a[0]}, {"d", a[1]}, {"q", a[2]}, {"sign", a[3]}};
             c.exact = omega(to_u(a[0], "k"), to_u(a[1], "d"), to_u(a[2], "q"), to_sign(a[3]));
             return c;
         }}},
        {"delta", {"delta k d q sign", [](const Args& a) {
             need(a, 4, "delta k d q sign");
             CountReport c;
             c.params = {{"k", a[0]}, {"d", a[1]}, {"q", a[2]}, {"sign", a[3]}};
             c.exact = delta(to_u(a[0], "k"), to_u(a[1], "d"), to_u(a[2], "q"), to_sign(a[3]));
             return c;
         }}},
        {"gamma", {"gamma e1 e2 q eps", [](const Args& a) {
             need(a, 4, "gamma e1 e2 q eps");
             CountReport c;
             c.params = {{"e1", a[0]}, {"e2", a[1]}, {"q", a[2]}, {"eps", a[3]}};
             c.exact = gamma_eps(to_u(a[0], "e1"), to_u(a[1], "e2"), to_u(a[2], "q"), to_sign(a[3]));
             return c;
         }}},
        {"gaussian", {"gaussian d e q", [](const Args& a) {
             need(a, 3, "gaussian d e q");
             CountReport c;
             c.params = {{"d", a[0]}, {"e", a[1]}, {"q", a[2]}};
             c.exact = Rat(gaussian_binomial(to_u(a[0], "d"), to_u(a[1], "e"), to_u(a[2], "q")));
             return c;
         }}},
        {"num_subspaces", {"num_subspaces d q e X", [](const Args& a) {
             need(a, 4, "num_subspaces d q e X");
             unsigned d = to_u(a[0], "d"), q = to_u(a[1], "q"), e = to_u(a[2], "e");
             GroupType X = parse_group_type(a[3]);
             CountReport c;
             c.params = {{"d", a[0]}, {"q", a[1]}, {"e", a[2]}, {"X", type_name(X)}};
             BigInt v = num_subspaces(d, q, e, X);
             c.exact = Rat(v);
             auto [lo, hi] = subspace_bound_constants(X, q);
             Rat s = qpow(q, long(field_u(X)) * e * (d - e));
             c.extra.push_back({"a_times_scale", lo * s});
             c.extra.push_back({"b_times_scale", hi * s});
             return c;
         }}},
        {"class_size_per_subspace", {"class_size_per_subspace d q e X", [](const Args& a) {
             need(a, 4, "class_size_per_subspace d q e X");
             GroupType X = parse_group_type(a[3]);
             CountReport c;
             c.params = {{"d", a[0]}, {"q", a[1]}, {"e", a[2]}, {"X", type_name(X)}};
             c.exact = Rat(class_size_per_subspace(to_u(a[0], "d"), to_u(a[1], "q"), to_u(a[2], "e"), X));
             return c;
         }}},
        {"centralizer_order", {"centralizer_order d q e X", [](const Args& a) {
             need(a, 4, "centralizer_order d q e X");
             GroupType X = parse_group_type(a[3]);
             CountReport c;
             c.params = {{"d", a[0]}, {"q", a[1]}, {"e", a[2]}, {"X", type_name(X)}};
             c.exact = Rat(centralizer_order(to_u(a[0], "d"), to_u(a[1], "q"), to_u(a[2], "e"), X));
             return c;
         }}},
        {"class_size", {"class_size d q e X", [](const Args& a) {
             need(a, 4, "class_size d q e X");
             GroupType X = parse_group_type(a[3]);
             CountReport c;
             c.params = {{"d", a[0]}, {"q", a[1]}, {"e", a[2]}, {"X", type_name(X)}};
             c.exact = Rat(class_size(to_u(a[0], "d"), to_u(a[1], "q"), to_u(a[2], "e"), X));
             return c;
         }}},
        {"duo_partner_count", {"duo_partner_count d q e1 X", [](const Args& a) {
             need(a, 4, "duo_partner_count d q e1 X");
             GroupType X = parse_group_type(a[3]);
             CountReport c;
             c.params = {{"d", a[0]}, {"q", a[1]}, {"e1", a[2]}, {"X", type_name(X)}};
             auto pc = duo_partner_count(to_u(a[0], "d"), to_u(a[1], "q"), to_u(a[2], "e1"), X);
             if (pc.exact) c.exact = Rat(*pc.exact);
             else c.bounds = std::pair{pc.lower, pc.upper};
             if (pc.ratio) c.extra.push_back({"ratio", *pc.ratio});
             return c;
         }}},
        {"rho_gen_lower_bound", {"rho_gen_lower_bound X d q e1 e2", [](const Args& a) {
             need(a, 5, "rho_gen_lower_bound X d q e1 e2");
             GroupType X = parse_group_type(a[0]);
             CountReport c;
             c.params = {{"X", type_name(X)}, {"d", a[1]}, {"q", a[2]}, {"e1", a[3]}, {"e2", a[4]}};
             c.exact = rho_gen_lower_bound(X, to_u(a[1], "d"), to_u(a[2], "q"), to_u(a[3], "e1"), to_u(a[4], "e2"));
             return c;
         }}},
        {"prob_i_upper", {"prob_i_upper i X q d e1 e2", [](const Args& a) {
             need(a, 6, "prob_i_upper i X q d e1 e2");
             GroupType X = parse_group_type(a[1]);
             CountReport c;
             c.params = {{"i", a[0]}, {"X", type_name(X)}, {"q", a[2]}, {"d", a[3]}, {"e1", a[4]}, {"e2", a[5]}};
             c.exact = prob_i_upper(to_u(a[0], "i"), X, to_u(a[2], "q"), to_u(a[3], "d"), to_u(a[4], "e1"), to_u(a[5], "e2"));
             return c;
         }}},
        {"alt_overlap", {"alt_overlap n p r", [](const Args& a) {
             need(a, 3, "alt_overlap n p r");
             unsigned n = to_u(a[0], "n"), p = to_u(a[1], "p"), r = to_u(a[2], "r");
             CountReport c;
             c.params = {{"n", a[0]}, {"p", a[1]}, {"r", a[2]}};
             c.exact = alt_overlap_proportion(n, p, r);
             c.extra.push_back({"lower_bound", alt_overlap_lower_bound(n, p, r)});
             return c;
         }}},
    };
    return m;
}

}  // namespace

std::vector<std::string> formula_names() {
    std::vector<std::string> out;
    for (auto& [k, v] : registry()) out.push_back(k);
    return out;
}

CountReport evaluate_formula(const std::string& name, const std::vector<std::string>& args) {
    auto it = registry().find(name);
    if (it == registry().end()) throw std::invalid_argument("unknown formula: " + name);
    CountReport c = it->second.fn(args);
    c.formula = name;
    return c;
}

}  // namespace stingray
