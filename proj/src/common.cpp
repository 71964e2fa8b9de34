#include "stingray/common.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace stingray {

BigInt pow_big(const BigInt& b, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

Rat pow_rat(const Rat& b, long e) {
    if (e >= 0) {
        Rat r(pow_big(b.get_num(), e), pow_big(b.get_den(), e));
        r.canonicalize();
        return r;
    }
    if (b == 0) throw std::domain_error("pow_rat: zero to negative power");
    Rat r(pow_big(b.get_den(), -e), pow_big(b.get_num(), -e));
    r.canonicalize();
    return r;
}

Rat rat_from_decimal(const std::string& s_in) {
    std::string s = s_in;
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        exp10 = std::stol(s.substr(e + 1));
        s = s.substr(0, e);
    }
    Rat r;
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        r = Rat(BigInt(s, 10));
    } else {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        r = Rat(BigInt(digits, 10), pow_big(10, s.size() - dot - 1));
    }
    r *= pow_rat(Rat(10), exp10);
    r.canonicalize();
    return r;
}

uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(uint64_t seed) {
    uint64_t st = seed;
    for (auto& w : s_) w = splitmix64(st);
}

Rng Rng::derive(uint64_t master, uint64_t index) {
    uint64_t st = master ^ 0x5851f42d4c957f2dULL;
    uint64_t a = splitmix64(st);
    st = a + index * 0xd1342543de82ef95ULL;
    return Rng(splitmix64(st));
}

static inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

uint64_t Rng::next() {
    uint64_t result = rotl(s_[1] * 5, 7) * 9;
    uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

uint64_t Rng::below(uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    // Lemire's multiply-shift with rejection
    unsigned __int128 m = (unsigned __int128)next() * n;
    uint64_t l = (uint64_t)m;
    if (l < n) {
        uint64_t t = -n % n;
        while (l < t) {
            m = (unsigned __int128)next() * n;
            l = (uint64_t)m;
        }
    }
    return (uint64_t)(m >> 64);
}

double Rng::uniform() { return (next() >> 11) * 0x1.0p-53; }

std::pair<double, double> wilson95(uint64_t successes, uint64_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    double n = double(trials), p = double(successes) / n;
    double den = 1 + z * z / n;
    double mid = (p + z * z / (2 * n)) / den;
    double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den;
    return {std::max(0.0, mid - half), std::min(1.0, mid + half)};
}

double MCEstimate::standard_error() const {
    if (trials == 0) return 0;
    return std::sqrt(point * (1 - point) / double(trials));
}

MCEstimate make_estimate(uint64_t successes, uint64_t trials, uint64_t master_seed) {
    if (successes > trials) throw std::invalid_argument("make_estimate: successes > trials");
    MCEstimate m;
    m.successes = successes;
    m.trials = trials;
    m.point = trials ? double(successes) / double(trials) : 0.0;
    m.wilson = wilson95(successes, trials);
    m.master_seed = master_seed;
    return m;
}

unsigned resolve_threads(unsigned requested) {
    if (const char* env = std::getenv("STINGRAY_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == 0 && v >= 1) return unsigned(v);
    }
    if (requested >= 1) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(uint64_t n, unsigned threads, const std::function<void(uint64_t)>& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || n < 2) {
        for (uint64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr err;
    std::mutex mu;
    auto work = [&] {
        for (;;) {
            if (failed) return;
            uint64_t i = next++;
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lk(mu);
                if (!err) err = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<uint64_t>(threads, n); ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace stingray
