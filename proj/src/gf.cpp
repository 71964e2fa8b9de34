#include "stingray/gf.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <tuple>

namespace stingray {

namespace {

std::vector<unsigned> small_prime_factors(uint64_t n) {
    std::vector<unsigned> out;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(unsigned(d));
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(unsigned(n));
    return out;
}

}  // namespace

// ---------------------------------------------------------------- Field

FieldPtr Field::create(unsigned p, unsigned a, unsigned u) {
    if (p < 2 || !is_prime(BigInt(p))) throw std::invalid_argument("field_create: p must be prime");
    if (a == 0) throw std::invalid_argument("field_create: degree a must be positive");
    if (u != 1 && u != 2) throw std::invalid_argument("field_create: u must be 1 or 2");
    BigInt Qb = pow_big(BigInt(p), a * u);
    if (Qb > kMaxOrder) throw std::domain_error("field_create: field order exceeds 2^24 (table limit)");

    static std::mutex mu;
    static std::map<std::tuple<unsigned, unsigned, unsigned>, FieldPtr> cache;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find({p, a, u});
        if (it != cache.end()) return it->second;
    }
    // build outside the lock: the prime subfield is created recursively
    FieldPtr prime = (a * u == 1) ? nullptr : Field::create(p, 1, 1);

    std::shared_ptr<Field> F(new Field());
    F->p_ = p;
    F->a_ = a;
    F->u_ = u;
    F->Q_ = uint32_t(Qb.get_ui());
    F->q_ = uint32_t(pow_big(BigInt(p), a).get_ui());
    const unsigned n = a * u;
    F->pw_.resize(n + 1);
    F->pw_[0] = 1;
    for (unsigned i = 1; i <= n; ++i) F->pw_[i] = F->pw_[i - 1] * p;

    if (n == 1) {
        F->defpoly_ = {0, 1};
    } else {
        // least integer value of sum c_i p^i over monic degree-n irreducibles
        for (uint32_t v = 1; v < F->Q_; ++v) {
            std::vector<Elem> cs(n + 1, 0);
            uint32_t t = v;
            for (unsigned i = 0; i < n; ++i) {
                cs[i] = t % p;
                t /= p;
            }
            cs[n] = 1;
            if (cs[0] == 0) continue;
            Poly f(prime, cs);
            if (is_irreducible(f)) {
                F->defpoly_.assign(cs.begin(), cs.end());
                break;
            }
        }
    }

    const uint32_t Q = F->Q_;
    auto slow_mul = [&](uint32_t x, uint32_t y) -> uint32_t {
        if (n == 1) return uint32_t((uint64_t(x) * y) % p);
        std::vector<uint64_t> xa(n), ya(n), prod(2 * n - 1, 0);
        for (unsigned i = 0; i < n; ++i) {
            xa[i] = x % p;
            x /= p;
            ya[i] = y % p;
            y /= p;
        }
        for (unsigned i = 0; i < n; ++i)
            for (unsigned j = 0; j < n; ++j) prod[i + j] = (prod[i + j] + xa[i] * ya[j]) % p;
        const auto& f = F->defpoly_;
        for (int k = int(2 * n) - 2; k >= int(n); --k) {
            uint64_t c = prod[k];
            if (!c) continue;
            for (unsigned i = 0; i <= n; ++i) prod[k - n + i] = (prod[k - n + i] + (p - c) * f[i]) % p;
        }
        uint32_t r = 0;
        for (int i = int(n) - 1; i >= 0; --i) r = r * p + uint32_t(prod[i]);
        return r;
    };
    auto slow_pow = [&](uint32_t x, uint64_t e) {
        uint32_t r = 1;
        while (e) {
            if (e & 1) r = slow_mul(r, x);
            x = slow_mul(x, x);
            e >>= 1;
        }
        return r;
    };

    uint32_t g = 1;
    if (Q > 2) {
        auto ls = small_prime_factors(Q - 1);
        for (g = 2; g < Q; ++g) {
            bool ok = true;
            for (unsigned l : ls)
                if (slow_pow(g, (Q - 1) / l) == 1) {
                    ok = false;
                    break;
                }
            if (ok) break;
        }
    }
    F->exp_.resize(2 * size_t(Q - 1));
    F->log_.assign(Q, 0);
    uint32_t cur = 1;
    for (uint32_t k = 0; k < Q - 1; ++k) {
        F->exp_[k] = cur;
        F->log_[cur] = k;
        cur = slow_mul(cur, g);
    }
    for (uint32_t k = Q - 1; k < 2 * (Q - 1); ++k) F->exp_[k] = F->exp_[k - (Q - 1)];

    if (p != 2 && n > 1) {
        F->negt_.resize(Q);
        for (uint32_t x = 0; x < Q; ++x) {
            uint32_t r = 0, t = x;
            for (unsigned i = 0; i < n; ++i) {
                uint32_t d = t % p;
                t /= p;
                r += ((p - d) % p) * F->pw_[i];
            }
            F->negt_[x] = r;
        }
        if (Q <= 1024) {
            F->addt_.resize(size_t(Q) * Q);
            for (uint32_t x = 0; x < Q; ++x)
                for (uint32_t y = 0; y < Q; ++y) F->addt_[size_t(x) * Q + y] = F->add_digits(x, y);
        }
    }

    std::lock_guard<std::mutex> lk(mu);
    auto [it, inserted] = cache.emplace(std::make_tuple(p, a, u), F);
    return it->second;
}

Elem Field::add_digits(Elem x, Elem y) const {
    Elem r = 0;
    for (unsigned i = 0; i < a_ * u_; ++i) {
        unsigned d = x % p_ + y % p_;
        if (d >= p_) d -= p_;
        r += d * pw_[i];
        x /= p_;
        y /= p_;
    }
    return r;
}

Elem Field::pow(Elem x, uint64_t n) const {
    if (n == 0) return 1;
    if (x == 0) return 0;
    return exp_[(uint64_t(log_[x]) * (n % (Q_ - 1))) % (Q_ - 1)];
}

Elem Field::pow(Elem x, const BigInt& n) const {
    if (n < 0) return pow(inv(x), BigInt(-n));
    if (n == 0) return 1;
    if (x == 0) return 0;
    BigInt m = n % (Q_ - 1);
    return pow(x, uint64_t(m.get_ui()));
}

Elem Field::from_int(long v) const {
    long r = v % long(p_);
    if (r < 0) r += p_;
    return Elem(r);
}

std::vector<unsigned> Field::coords(Elem x) const {
    std::vector<unsigned> c(a_ * u_);
    for (auto& d : c) {
        d = x % p_;
        x /= p_;
    }
    return c;
}

Elem Field::from_coords(const std::vector<unsigned>& c) const {
    if (c.size() != a_ * u_) throw std::invalid_argument("from_coords: wrong length");
    Elem r = 0;
    for (size_t i = c.size(); i-- > 0;) {
        if (c[i] >= p_) throw std::invalid_argument("from_coords: digit out of range");
        r = r * p_ + c[i];
    }
    return r;
}

Elem Field::sqrt(Elem x) const {
    if (x == 0) return 0;
    if (p_ == 2) return pow(x, uint64_t(Q_ / 2));
    if (log_[x] % 2) throw std::domain_error("Field::sqrt of a non-square");
    return exp_[log_[x] / 2];
}

std::string Field::describe() const {
    std::ostringstream os;
    os << "GF(" << p_;
    if (a_ * u_ > 1) os << "^" << a_ * u_;
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------- Poly

Poly::Poly(FieldPtr f, std::vector<Elem> coeffs) : F(std::move(f)), c(std::move(coeffs)) { trim(); }

Poly Poly::x(FieldPtr f) { return Poly(std::move(f), {0, 1}); }

Poly Poly::constant(FieldPtr f, Elem v) { return Poly(std::move(f), {v}); }

void Poly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

bool Poly::operator<(const Poly& o) const {
    if (c.size() != o.c.size()) return c.size() < o.c.size();
    for (size_t i = c.size(); i-- > 0;)
        if (c[i] != o.c[i]) return c[i] < o.c[i];
    return false;
}

std::string Poly::to_string(const std::string& var) const {
    if (c.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c.size(); i-- > 0;) {
        if (c[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        bool show_coef = c[i] != 1 || i == 0;
        if (show_coef) {
            if (F && !F->is_prime_field())
                os << "[" << c[i] << "]";
            else
                os << c[i];
        }
        if (i >= 1) {
            if (show_coef) os << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

Poly poly_add(const Poly& f, const Poly& g) {
    const Field& F = *(f.F ? f.F : g.F);
    Poly r(f.F ? f.F : g.F);
    r.c.assign(std::max(f.c.size(), g.c.size()), 0);
    for (size_t i = 0; i < f.c.size(); ++i) r.c[i] = f.c[i];
    for (size_t i = 0; i < g.c.size(); ++i) r.c[i] = F.add(r.c[i], g.c[i]);
    r.trim();
    return r;
}

Poly poly_sub(const Poly& f, const Poly& g) {
    const Field& F = *(f.F ? f.F : g.F);
    Poly r(f.F ? f.F : g.F);
    r.c.assign(std::max(f.c.size(), g.c.size()), 0);
    for (size_t i = 0; i < f.c.size(); ++i) r.c[i] = f.c[i];
    for (size_t i = 0; i < g.c.size(); ++i) r.c[i] = F.sub(r.c[i], g.c[i]);
    r.trim();
    return r;
}

Poly poly_mul(const Poly& f, const Poly& g) {
    Poly r(f.F ? f.F : g.F);
    if (f.is_zero() || g.is_zero()) return r;
    const Field& F = *r.F;
    r.c.assign(f.c.size() + g.c.size() - 1, 0);
    for (size_t i = 0; i < f.c.size(); ++i) {
        if (!f.c[i]) continue;
        for (size_t j = 0; j < g.c.size(); ++j) r.c[i + j] = F.add(r.c[i + j], F.mul(f.c[i], g.c[j]));
    }
    r.trim();
    return r;
}

Poly poly_scale(const Poly& f, Elem s) {
    Poly r(f.F);
    r.c.resize(f.c.size());
    for (size_t i = 0; i < f.c.size(); ++i) r.c[i] = f.F->mul(f.c[i], s);
    r.trim();
    return r;
}

std::pair<Poly, Poly> poly_divmod(const Poly& f, const Poly& g) {
    if (g.is_zero()) throw std::domain_error("poly_divmod: division by zero polynomial");
    const Field& F = *g.F;
    Poly rem = f;
    rem.F = g.F;
    Poly quo(g.F);
    if (f.deg() < g.deg()) return {quo, rem};
    quo.c.assign(f.deg() - g.deg() + 1, 0);
    Elem li = F.inv(g.lead());
    const int dg = g.deg();
    for (int k = rem.deg(); k >= dg; --k) {
        Elem cf = rem.c[k];
        if (!cf) continue;
        Elem t = F.mul(cf, li);
        quo.c[k - dg] = t;
        for (int i = 0; i <= dg; ++i) rem.c[k - dg + i] = F.sub(rem.c[k - dg + i], F.mul(t, g.c[i]));
    }
    rem.trim();
    quo.trim();
    return {quo, rem};
}

Poly poly_mod(const Poly& f, const Poly& g) { return poly_divmod(f, g).second; }

Poly poly_monic(const Poly& f) {
    if (f.is_zero()) return f;
    return poly_scale(f, f.F->inv(f.lead()));
}

Poly poly_gcd(Poly f, Poly g) {
    while (!g.is_zero()) {
        Poly r = poly_mod(f, g);
        f = std::move(g);
        g = std::move(r);
    }
    return poly_monic(f);
}

Poly poly_powmod(const Poly& base, const BigInt& n, const Poly& mod) {
    Poly result = poly_mod(Poly::constant(mod.F, 1), mod);
    Poly b = poly_mod(base, mod);
    if (n == 0) return result;
    size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        result = poly_mod(poly_mul(result, result), mod);
        if (mpz_tstbit(n.get_mpz_t(), i)) result = poly_mod(poly_mul(result, b), mod);
    }
    return result;
}

Poly poly_derivative(const Poly& f) {
    Poly r(f.F);
    if (f.c.size() <= 1) return r;
    r.c.resize(f.c.size() - 1);
    for (size_t i = 1; i < f.c.size(); ++i) r.c[i - 1] = f.F->mul(f.F->from_int(long(i % f.F->p())), f.c[i]);
    r.trim();
    return r;
}

namespace {

// x^(Q^k) mod f by k successive Q-th powers
Poly frob_power_x(const Poly& f, unsigned k) {
    Poly h = poly_mod(Poly::x(f.F), f);
    BigInt Q = f.F->size();
    for (unsigned i = 0; i < k; ++i) h = poly_powmod(h, Q, f);
    return h;
}

std::vector<unsigned> prime_divisors(unsigned n) { return small_prime_factors(n); }

}  // namespace

bool is_irreducible(const Poly& f) {
    if (f.is_zero()) throw std::invalid_argument("is_irreducible: zero polynomial");
    const int n = f.deg();
    if (n < 1) throw std::invalid_argument("is_irreducible: degree must be at least 1");
    if (n == 1) return true;
    Poly g = poly_monic(f);
    Poly x = Poly::x(g.F);
    if (poly_sub(frob_power_x(g, unsigned(n)), poly_mod(x, g)) != Poly(g.F)) return false;
    for (unsigned l : prime_divisors(unsigned(n))) {
        Poly h = poly_sub(frob_power_x(g, unsigned(n) / l), x);
        if (poly_gcd(h, g).deg() != 0) return false;
    }
    return true;
}

namespace {

Poly poly_pth_root(const Poly& f) {
    const Field& F = *f.F;
    const unsigned p = F.p();
    Poly r(f.F);
    r.c.assign(f.c.size() / p + 1, 0);
    uint64_t root_exp = uint64_t(F.size()) / p;  // x^(Q/p) is the p-th root
    for (size_t i = 0; i < f.c.size(); i += p) r.c[i / p] = F.pow(f.c[i], root_exp);
    r.trim();
    return r;
}

void squarefree(const Poly& f, unsigned scale, std::vector<std::pair<Poly, unsigned>>& out) {
    Poly one = Poly::constant(f.F, 1);
    Poly c = poly_gcd(f, poly_derivative(f));
    Poly w = poly_divmod(f, c).first;
    unsigned i = 1;
    while (w.deg() > 0) {
        Poly y = poly_gcd(w, c);
        Poly fac = poly_divmod(w, y).first;
        if (fac.deg() > 0) out.push_back({poly_monic(fac), i * scale});
        w = y;
        c = poly_divmod(c, y).first;
        ++i;
    }
    if (c.deg() > 0) squarefree(poly_monic(poly_pth_root(c)), scale * f.F->p(), out);
}

void equal_degree_split(const Poly& g, unsigned d, Rng& rng, std::vector<Poly>& out) {
    if (g.deg() == int(d)) {
        out.push_back(poly_monic(g));
        return;
    }
    const Field& F = *g.F;
    const uint32_t Q = F.size();
    while (true) {
        Poly a(g.F);
        a.c.resize(g.deg());
        for (auto& x : a.c) x = Elem(rng.below(Q));
        a.trim();
        if (a.deg() < 1) continue;
        Poly b(g.F);
        if (F.p() == 2) {
            // trace map a + a^2 + ... + a^(2^(m d - 1)), Q = 2^m
            unsigned m = F.degree();
            Poly t = poly_mod(a, g);
            b = t;
            for (unsigned i = 1; i < m * d; ++i) {
                t = poly_mod(poly_mul(t, t), g);
                b = poly_add(b, t);
            }
        } else {
            BigInt e = (pow_big(BigInt(Q), d) - 1) / 2;
            b = poly_sub(poly_powmod(a, e, g), Poly::constant(g.F, 1));
        }
        Poly h = poly_gcd(b, g);
        if (h.deg() > 0 && h.deg() < g.deg()) {
            equal_degree_split(h, d, rng, out);
            equal_degree_split(poly_divmod(g, h).first, d, rng, out);
            return;
        }
    }
}

}  // namespace

std::vector<PolyFactor> factor_poly(const Poly& f_in) {
    if (f_in.is_zero()) throw std::invalid_argument("factor_poly: zero polynomial");
    std::vector<PolyFactor> result;
    if (f_in.deg() == 0) return result;
    Poly f = poly_monic(f_in);
    std::vector<std::pair<Poly, unsigned>> sqf;
    squarefree(f, 1, sqf);
    Rng rng(0x5eedf00dULL);
    for (auto& [s, mult] : sqf) {
        Poly rest = s;
        Poly x = Poly::x(s.F);
        Poly h = poly_mod(x, rest);
        BigInt Q = s.F->size();
        for (unsigned i = 1; rest.deg() >= int(2 * i); ++i) {
            h = poly_powmod(h, Q, rest);
            Poly g = poly_gcd(poly_sub(h, x), rest);
            if (g.deg() > 0) {
                std::vector<Poly> parts;
                equal_degree_split(g, i, rng, parts);
                for (auto& pp : parts) result.push_back({pp, mult});
                rest = poly_divmod(rest, g).first;
                h = poly_mod(h, rest);
            }
        }
        if (rest.deg() > 0) result.push_back({poly_monic(rest), mult});
    }
    // merge equal factors arising from different squarefree layers
    std::sort(result.begin(), result.end(), [](const PolyFactor& a, const PolyFactor& b) { return a.f < b.f; });
    std::vector<PolyFactor> merged;
    for (auto& pf : result) {
        if (!merged.empty() && merged.back().f == pf.f)
            merged.back().mult += pf.mult;
        else
            merged.push_back(pf);
    }
    return merged;
}

// ---------------------------------------------------------------- integers

namespace {

const std::vector<uint32_t>& sieve_primes() {
    static const std::vector<uint32_t> primes = [] {
        const uint32_t N = 1000000;
        std::vector<bool> comp(N + 1, false);
        std::vector<uint32_t> ps;
        for (uint32_t i = 2; i <= N; ++i) {
            if (comp[i]) continue;
            ps.push_back(i);
            for (uint64_t j = uint64_t(i) * i; j <= N; j += i) comp[j] = true;
        }
        return ps;
    }();
    return primes;
}

bool miller_rabin(const BigInt& n, unsigned base) {
    BigInt d = n - 1;
    unsigned s = 0;
    while (mpz_even_p(d.get_mpz_t())) {
        d /= 2;
        ++s;
    }
    BigInt x;
    BigInt a = base;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return true;
    for (unsigned i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return true;
    }
    return false;
}

BigInt pollard_brent(const BigInt& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        BigInt y = 2, x, g = 1, q = 1, ys;
        unsigned long r = 1, m = 128;
        auto f = [&](const BigInt& v) { return BigInt((v * v + c) % n); };
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = f(y);
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    BigInt diff = x - y;
                    if (diff < 0) diff = -diff;
                    q = (q * diff) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = f(ys);
                BigInt diff = x - ys;
                if (diff < 0) diff = -diff;
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_rec(const BigInt& n, Factorization& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out[n] += 1;
        return;
    }
    BigInt d = pollard_brent(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

bool is_prime(const BigInt& n) {
    if (n < 2) return false;
    static const BigInt limit("3317044064679887385961981");
    if (n < 1000000) {
        unsigned long v = n.get_ui();
        const auto& ps = sieve_primes();
        return std::binary_search(ps.begin(), ps.end(), uint32_t(v));
    }
    if (n >= limit) throw std::domain_error("is_prime: input beyond 3.3e24 is out of scale");
    for (unsigned b : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u}) {
        if (n % b == 0) return false;
        if (!miller_rabin(n, b)) return false;
    }
    return true;
}

Factorization factor_integer(const BigInt& n_in) {
    if (n_in < 1) throw std::invalid_argument("factor_integer: n must be positive");
    Factorization out;
    BigInt n = n_in;
    for (uint32_t p : sieve_primes()) {
        if (BigInt(p) * p > n) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            unsigned k = 0;
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                n /= p;
                ++k;
            }
            out[BigInt(p)] = k;
        }
    }
    if (n > 1) {
        // no prime factor below 10^6 remains, so anything below 10^12 is prime
        if (n < BigInt("1000000000000"))
            out[n] += 1;
        else
            factor_rec(n, out);
    }
    return out;
}

BigInt factorization_value(const Factorization& f) {
    BigInt v = 1;
    for (const auto& [p, k] : f) v *= pow_big(p, k);
    return v;
}

BigInt cyclotomic_value(unsigned e, const BigInt& Q) {
    if (e == 0) throw std::invalid_argument("cyclotomic_value: e must be positive");
    // Moebius inversion over divisors of e
    auto mobius = [](unsigned n) {
        int m = 1;
        for (unsigned d = 2; d * d <= n; ++d) {
            if (n % d == 0) {
                n /= d;
                if (n % d == 0) return 0;
                m = -m;
            }
        }
        if (n > 1) m = -m;
        return m;
    };
    BigInt num = 1, den = 1;
    for (unsigned d = 1; d <= e; ++d) {
        if (e % d) continue;
        int mu = mobius(e / d);
        if (mu == 1) num *= pow_big(Q, d) - 1;
        if (mu == -1) den *= pow_big(Q, d) - 1;
    }
    return num / den;
}

Factorization factor_power_minus_one(const BigInt& Q, unsigned e) {
    static std::mutex mu;
    static std::map<std::pair<BigInt, unsigned>, Factorization> cache;
    Factorization out;
    for (unsigned k = 1; k <= e; ++k) {
        if (e % k) continue;
        Factorization part;
        {
            std::lock_guard<std::mutex> lk(mu);
            auto it = cache.find({Q, k});
            if (it != cache.end()) part = it->second;
        }
        if (part.empty()) {
            part = factor_integer(cyclotomic_value(k, Q));
            std::lock_guard<std::mutex> lk(mu);
            cache[{Q, k}] = part;
        }
        for (const auto& [p, m] : part) out[p] += m;
    }
    return out;
}

unsigned long multiplicative_order(const BigInt& Q, const BigInt& r) {
    BigInt x = Q % r;
    if (x == 0) throw std::invalid_argument("multiplicative_order: not a unit");
    Factorization f = factor_integer(r - 1);  // r is prime in all callers
    BigInt N = r - 1;
    for (const auto& [l, k] : f) {
        for (unsigned i = 0; i < k; ++i) {
            BigInt M = N / l, y;
            mpz_powm(y.get_mpz_t(), x.get_mpz_t(), M.get_mpz_t(), r.get_mpz_t());
            if (y == 1)
                N = M;
            else
                break;
        }
    }
    return N.get_ui();
}

std::vector<BigInt> ppd_set(const BigInt& Q, unsigned e) {
    if (Q < 2 || e < 1) throw std::invalid_argument("ppd_set: need Q >= 2 and e >= 1");
    std::vector<BigInt> out;
    BigInt phi = cyclotomic_value(e, Q);
    Factorization f;
    {
        // reuse the cached cyclotomic factorization
        Factorization all = factor_power_minus_one(Q, e);
        for (const auto& [r, k] : all)
            if (mpz_divisible_p(phi.get_mpz_t(), r.get_mpz_t())) f[r] = k;
    }
    for (const auto& [r, k] : f) {
        BigInt y;
        BigInt E = e;
        mpz_powm(y.get_mpz_t(), Q.get_mpz_t(), E.get_mpz_t(), r.get_mpz_t());
        if (y != 1) continue;
        bool primitive = true;
        for (unsigned l : small_prime_factors(e)) {
            BigInt El = e / l;
            mpz_powm(y.get_mpz_t(), Q.get_mpz_t(), El.get_mpz_t(), r.get_mpz_t());
            if (y == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) out.push_back(r);
    }
    return out;
}

BigInt element_order(Elem x, const Field& F, const Factorization& bound) {
    struct Ops {
        const Field& F;
        Elem pow(Elem v, const BigInt& n) const { return F.pow(v, n); }
        bool is_one(Elem v) const { return v == 1; }
    };
    if (x == 0) throw std::invalid_argument("element_order: zero is not invertible");
    return element_order_generic(x, bound, Ops{F});
}

}  // namespace stingray
