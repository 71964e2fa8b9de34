#include "stingray/altgrp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "stingray/counting.hpp"
#include "stingray/gf.hpp"

namespace stingray {

namespace {

bool prime_u(unsigned p) { return p >= 2 && is_prime(BigInt(p)); }

BigInt factorial(unsigned k) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), k);
    return f;
}

Perm conjugate_perm(const Perm& g, const Perm& x) { return perm_mul(perm_mul(perm_inv(x), g), x); }

CycleCert conjugate_cert(const CycleCert& c, const Perm& x) {
    CycleCert out;
    out.perm = conjugate_perm(c.perm, x);
    out.p = c.p;
    out.power = c.power;
    auto cs = cycles(out.perm);
    out.support = cs.at(0);
    return out;
}

size_t overlap(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    size_t n = 0;
    for (uint32_t x : a)
        if (std::find(b.begin(), b.end(), x) != b.end()) ++n;
    return n;
}

}  // namespace

std::vector<std::vector<uint32_t>> cycles(const Perm& g) {
    std::vector<std::vector<uint32_t>> out;
    std::vector<bool> seen(g.size(), false);
    for (uint32_t i = 0; i < g.size(); ++i) {
        if (seen[i] || g[i] == i) continue;
        std::vector<uint32_t> c;
        for (uint32_t j = i; !seen[j]; j = g[j]) {
            seen[j] = true;
            c.push_back(j);
        }
        out.push_back(std::move(c));
    }
    return out;
}

bool is_permutation(const Perm& g) {
    std::vector<bool> hit(g.size(), false);
    for (uint32_t x : g) {
        if (x >= g.size() || hit[x]) return false;
        hit[x] = true;
    }
    return true;
}

bool is_even(const Perm& g) {
    size_t odd = 0;
    for (auto& c : cycles(g)) odd += (c.size() - 1) % 2;
    return odd % 2 == 0;
}

void check_cycle_cert(const CycleCert& c) {
    if (!is_permutation(c.perm)) throw std::invalid_argument("certificate is not a permutation");
    if (c.p < 3 || !prime_u(c.p)) throw std::invalid_argument("cycle length must be an odd prime");
    auto cs = cycles(c.perm);
    if (cs.size() != 1 || cs[0].size() != c.p) throw std::invalid_argument("certificate is not a single p-cycle");
    if (cs[0] != c.support) throw std::invalid_argument("certificate support does not match its cycle");
}

std::optional<CycleCert> pcycle_scan(const Perm& g, unsigned lo, unsigned hi) {
    if (lo < 3 || hi < lo) throw std::invalid_argument("pcycle_scan: need hi >= lo >= 3");
    if (!is_permutation(g)) throw std::invalid_argument("pcycle_scan: not a permutation");
    auto cs = cycles(g);
    for (unsigned p = lo; p <= hi; ++p) {
        if (!prime_u(p)) continue;
        size_t with_len = 0, divisible = 0, at = 0;
        for (size_t i = 0; i < cs.size(); ++i) {
            if (cs[i].size() == p) {
                ++with_len;
                at = i;
            }
            if (cs[i].size() % p == 0) ++divisible;
        }
        if (with_len != 1 || divisible != 1) continue;
        BigInt m = 1;
        for (size_t i = 0; i < cs.size(); ++i)
            if (i != at) mpz_lcm_ui(m.get_mpz_t(), m.get_mpz_t(), cs[i].size());
        CycleCert c;
        c.perm = perm_pow(g, m);
        c.p = p;
        c.power = m;
        auto pc = cycles(c.perm);
        c.support = pc.at(0);
        check_cycle_cert(c);
        return c;
    }
    return std::nullopt;
}

std::string AltVerdict::name() const {
    switch (tag) {
        case AltVerdictTag::Ak: return "A" + std::to_string(k);
        case AltVerdictTag::CpxCr: return "CpxCr";
        default: return "Other(" + order.get_str() + ")";
    }
}

AltVerdict natural_embed_check(const CycleCert& g0, const CycleCert& h0) {
    check_cycle_cert(g0);
    check_cycle_cert(h0);
    if (g0.perm.size() != h0.perm.size()) throw std::invalid_argument("certificates act on different degrees");
    const CycleCert& g = g0.p <= h0.p ? g0 : h0;
    const CycleCert& h = g0.p <= h0.p ? h0 : g0;
    const unsigned n = unsigned(g.perm.size()), p = g.p, r = h.p;
    AltVerdict v;
    v.k = unsigned(p + r - overlap(g.support, h.support));
    if (v.k == p + r) {
        v.tag = AltVerdictTag::CpxCr;
        v.order = BigInt(p) * r;
        return v;
    }
    v.order = perm_order({g.perm, h.perm}, n);
    v.embedding_hypotheses = std::max(p + 3, r) <= v.k && v.k <= std::min(p + r - 1, n);
    if (v.embedding_hypotheses) {
        if (v.order != factorial(v.k) / 2) throw std::logic_error("natural_embed_check: order is not k!/2");
        v.tag = AltVerdictTag::Ak;
    } else if (v.order == factorial(v.k) / 2) {
        v.tag = AltVerdictTag::Ak;
    } else {
        v.tag = AltVerdictTag::Other;
    }
    return v;
}

Perm random_alt(size_t n, Rng& rng) {
    if (n < 2) return perm_identity(n);
    Perm x = perm_identity(n);
    for (size_t i = n - 1; i > 0; --i) std::swap(x[i], x[rng.below(i + 1)]);
    if (!is_even(x)) std::swap(x[0], x[1]);
    return x;
}

std::optional<Step3Result> step3_search(const CycleCert& g, const CycleCert& h, uint64_t budget, uint64_t seed) {
    check_cycle_cert(g);
    check_cycle_cert(h);
    const size_t n = g.perm.size();
    if (h.perm.size() != n) throw std::invalid_argument("step3_search: certificates act on different degrees");
    if (overlap(g.support, h.support) != 0) throw std::invalid_argument("step3_search: supports must be disjoint");
    if (g.p + h.p >= n) throw std::invalid_argument("step3_search: need p + r < n");
    if (g.p == 3 && h.p == 3 && n <= 20) throw std::invalid_argument("step3_search: p = r = 3 needs n > 20");
    Rng rng(seed);
    for (uint64_t t = 1; t <= budget; ++t) {
        Perm x = random_alt(n, rng);
        size_t hit = 0;
        for (uint32_t i : g.support)
            if (std::find(h.support.begin(), h.support.end(), x[i]) != h.support.end()) ++hit;
        if (hit != 1) continue;
        Step3Result out;
        out.conjugate = conjugate_cert(g, x);
        out.x = std::move(x);
        out.attempts = t;
        out.verdict = natural_embed_check(out.conjugate, h);
        return out;
    }
    return std::nullopt;
}

MCEstimate mc_overlap(unsigned n, unsigned p, unsigned r, uint64_t trials, uint64_t seed, unsigned threads) {
    alt_overlap_lower_bound(n, p, r);  // validates (n, p, r)
    std::vector<uint8_t> hit(trials, 0);
    parallel_for(trials, threads, [&](uint64_t i) {
        Rng rng = Rng::derive(seed, i);
        Perm x = random_alt(n, rng);
        unsigned c = 0;
        for (unsigned j = 0; j < p; ++j)
            if (x[j] >= p && x[j] < p + r) ++c;
        hit[i] = c == 1;
    });
    uint64_t s = std::accumulate(hit.begin(), hit.end(), uint64_t(0));
    MCEstimate m = make_estimate(s, trials, seed);
    m.metadata = {{"n", std::to_string(n)}, {"p", std::to_string(p)}, {"r", std::to_string(r)}};
    return m;
}

Rat exhaustive_overlap(unsigned n, unsigned p, unsigned r) {
    alt_overlap_lower_bound(n, p, r);
    if (n > 9) throw std::invalid_argument("exhaustive_overlap: n <= 9 only");
    Perm x = perm_identity(n);
    uint64_t good = 0, total = 0;
    do {
        if (!is_even(x)) continue;
        ++total;
        unsigned c = 0;
        for (unsigned j = 0; j < p; ++j)
            if (x[j] >= p && x[j] < p + r) ++c;
        if (c == 1) ++good;
    } while (std::next_permutation(x.begin(), x.end()));
    Rat v(BigInt(std::to_string(good), 10), BigInt(std::to_string(total), 10));
    v.canonicalize();
    return v;
}

std::pair<unsigned, unsigned> alt_prime_window(unsigned n, double log_base) {
    if (n < 3) throw std::invalid_argument("alt_prime_window: n >= 3");
    auto lg = [&](double x) { return log_base > 0 ? std::log(x) / std::log(log_base) : std::log(x); };
    double L = lg(double(n));
    double lo = std::ceil(L - 1e-12);
    double hi = L > 1 ? std::floor(std::pow(L, lg(L)) + 1e-12) : lo;
    return {unsigned(std::max(3.0, lo)), unsigned(std::max(0.0, hi))};
}

AltEmbedResult alt_embed(unsigned n, uint64_t budget, uint64_t seed, double log_base) {
    AltEmbedResult res;
    std::tie(res.lo, res.hi) = alt_prime_window(n, log_base);
    if (res.hi < res.lo) {
        res.stage = "empty prime window";
        return res;
    }
    Rng rng(seed);
    std::optional<CycleCert> g;
    while (res.samples < budget) {
        ++res.samples;
        auto c = pcycle_scan(random_alt(n, rng), res.lo, res.hi);
        if (!c) continue;
        if (!g) {
            g = c;
            continue;
        }
        CycleCert a = *g, b = *c;
        if (a.p > b.p) std::swap(a, b);
        if (overlap(a.support, b.support) != 0) {
            AltVerdict v = natural_embed_check(a, b);
            if (v.tag == AltVerdictTag::Ak) {
                res.g = a;
                res.h = b;
                res.verdict = v;
                res.success = true;
                res.stage = "step2";
                return res;
            }
            continue;  // overlapping but not A_k; keep g, draw another h
        }
        if (a.p + b.p >= n || (a.p == 3 && b.p == 3 && n <= 20)) continue;
        res.g = a;
        res.h = b;
        auto s3 = step3_search(a, b, budget, rng.next());
        if (!s3) {
            res.conjugations = budget;
            res.stage = "step3 budget exhausted";
            return res;
        }
        res.conjugations = s3->attempts;
        res.gx = s3->conjugate;
        res.verdict = s3->verdict;
        res.success = s3->verdict.tag == AltVerdictTag::Ak;
        res.stage = "step3";
        return res;
    }
    res.stage = "step1 budget exhausted";
    return res;
}

}  // namespace stingray
