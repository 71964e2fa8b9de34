#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stingray/common.hpp"

namespace stingray {

// Field elements are indices: the base-p digits of the index are the
// polynomial-basis coordinates (constant term first).
using Elem = uint32_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

class Field {
public:
    static constexpr uint32_t kMaxOrder = 1u << 24;

    // lexicographically least monic irreducible of degree a*u defines the field;
    // fields are interned, so equal parameters give the same pointer
    static FieldPtr create(unsigned p, unsigned a, unsigned u = 1);

    unsigned p() const { return p_; }
    unsigned a() const { return a_; }
    unsigned u() const { return u_; }
    unsigned degree() const { return a_ * u_; }
    uint32_t size() const { return Q_; }  // q^u
    uint32_t q() const { return q_; }     // p^a
    bool is_prime_field() const { return a_ * u_ == 1; }
    const std::vector<unsigned>& defining_poly() const { return defpoly_; }

    Elem add(Elem x, Elem y) const {
        if (p_ == 2) return x ^ y;
        if (a_ * u_ == 1) {
            Elem s = x + y;
            return s >= p_ ? s - p_ : s;
        }
        if (!addt_.empty()) return addt_[size_t(x) * Q_ + y];
        return add_digits(x, y);
    }
    Elem neg(Elem x) const {
        if (p_ == 2 || x == 0) return x;
        if (a_ * u_ == 1) return p_ - x;
        return negt_[x];
    }
    Elem sub(Elem x, Elem y) const { return add(x, neg(y)); }
    Elem mul(Elem x, Elem y) const {
        if (x == 0 || y == 0) return 0;
        return exp_[log_[x] + log_[y]];
    }
    Elem inv(Elem x) const {
        if (x == 0) throw std::domain_error("Field::inv of zero");
        return exp_[(Q_ - 1 - log_[x]) % (Q_ - 1)];
    }
    Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }
    Elem pow(Elem x, uint64_t n) const;
    Elem pow(Elem x, const BigInt& n) const;
    // x -> x^q, the involution of GF(q^2) (identity when u = 1)
    Elem conj(Elem x) const {
        if (u_ == 1 || x == 0) return x;
        return exp_[(uint64_t(log_[x]) * q_) % (Q_ - 1)];
    }
    Elem frob(Elem x) const {  // x -> x^p
        if (x == 0) return 0;
        return exp_[(uint64_t(log_[x]) * p_) % (Q_ - 1)];
    }
    Elem primitive() const { return exp_[1]; }
    Elem exp(uint64_t k) const { return exp_[k % (Q_ - 1)]; }
    uint32_t log(Elem x) const {
        if (x == 0) throw std::domain_error("Field::log of zero");
        return log_[x];
    }
    Elem from_int(long v) const;
    std::vector<unsigned> coords(Elem x) const;
    Elem from_coords(const std::vector<unsigned>& c) const;
    bool is_square(Elem x) const { return x == 0 || p_ == 2 || log_[x] % 2 == 0; }
    Elem sqrt(Elem x) const;  // requires is_square
    std::string describe() const;

private:
    Field() = default;
    Elem add_digits(Elem x, Elem y) const;
    unsigned p_ = 2, a_ = 1, u_ = 1;
    uint32_t Q_ = 2, q_ = 2;
    std::vector<unsigned> defpoly_;
    std::vector<Elem> exp_;       // length 2(Q-1)
    std::vector<uint32_t> log_;   // log_[0] unused
    std::vector<Elem> addt_;      // full addition table for small odd extension fields
    std::vector<Elem> negt_;
    std::vector<uint32_t> pw_;    // powers of p
};

// Polynomials over a field, coefficients constant term first.
struct Poly {
    FieldPtr F;
    std::vector<Elem> c;

    Poly() = default;
    explicit Poly(FieldPtr f) : F(std::move(f)) {}
    Poly(FieldPtr f, std::vector<Elem> coeffs);
    static Poly x(FieldPtr f);
    static Poly constant(FieldPtr f, Elem v);
    int deg() const { return int(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    Elem lead() const { return c.empty() ? 0 : c.back(); }
    void trim();
    bool operator==(const Poly& o) const { return c == o.c; }
    bool operator!=(const Poly& o) const { return c != o.c; }
    bool operator<(const Poly& o) const;
    std::string to_string(const std::string& var = "t") const;
};

Poly poly_add(const Poly& f, const Poly& g);
Poly poly_sub(const Poly& f, const Poly& g);
Poly poly_mul(const Poly& f, const Poly& g);
Poly poly_scale(const Poly& f, Elem s);
std::pair<Poly, Poly> poly_divmod(const Poly& f, const Poly& g);
Poly poly_mod(const Poly& f, const Poly& g);
Poly poly_gcd(Poly f, Poly g);
Poly poly_monic(const Poly& f);
Poly poly_powmod(const Poly& base, const BigInt& n, const Poly& mod);
Poly poly_derivative(const Poly& f);

bool is_irreducible(const Poly& f);

struct PolyFactor {
    Poly f;  // monic irreducible
    unsigned mult;
};
// complete factorization of a nonzero polynomial into monic irreducibles,
// sorted by (degree, coefficients)
std::vector<PolyFactor> factor_poly(const Poly& f);

// ---- integers ----
using Factorization = std::map<BigInt, unsigned>;

bool is_prime(const BigInt& n);  // deterministic below 3.3e24, throws above
Factorization factor_integer(const BigInt& n);
BigInt factorization_value(const Factorization& f);
// Q^e - 1 factored through its cyclotomic parts; cached
Factorization factor_power_minus_one(const BigInt& Q, unsigned e);
BigInt cyclotomic_value(unsigned e, const BigInt& Q);
unsigned long multiplicative_order(const BigInt& Q, const BigInt& r);
std::vector<BigInt> ppd_set(const BigInt& Q, unsigned e);

// Factored-exponent descent. Ops supplies pow(x, BigInt) and is_one(x).
template <class T, class Ops>
BigInt element_order_generic(const T& x, const Factorization& bound, const Ops& ops) {
    BigInt N = factorization_value(bound);
    if (!ops.is_one(ops.pow(x, N))) throw std::invalid_argument("element_order: x^N is not the identity");
    for (const auto& [l, k] : bound) {
        for (unsigned i = 0; i < k; ++i) {
            BigInt M = N / l;
            if (ops.is_one(ops.pow(x, M)))
                N = M;
            else
                break;
        }
    }
    return N;
}

BigInt element_order(Elem x, const Field& F, const Factorization& bound);

}  // namespace stingray
