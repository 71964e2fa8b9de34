#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace stingray {

using BigInt = mpz_class;
using Rat = mpq_class;

inline std::string to_string(const BigInt& x) { return x.get_str(); }
inline std::string to_string(const Rat& x) {
    Rat y = x;
    y.canonicalize();
    return y.get_str();
}

BigInt pow_big(const BigInt& b, unsigned long e);
Rat pow_rat(const Rat& b, long e);
Rat rat_from_decimal(const std::string& s);

// splitmix64 seeded xoshiro256**
class Rng {
public:
    explicit Rng(uint64_t seed = 0xC0FFEEULL);
    static Rng derive(uint64_t master, uint64_t index);
    uint64_t next();
    uint64_t below(uint64_t n);  // uniform in [0,n)
    double uniform();

private:
    uint64_t s_[4];
};

uint64_t splitmix64(uint64_t& state);

// Wilson score interval at 95%; [0,1] when trials = 0
std::pair<double, double> wilson95(uint64_t successes, uint64_t trials);

struct MCEstimate {
    uint64_t successes = 0, trials = 0;
    double point = 0;
    std::pair<double, double> wilson{0, 1};
    uint64_t master_seed = 0;
    std::vector<std::pair<std::string, std::string>> metadata;
    double standard_error() const;
};
MCEstimate make_estimate(uint64_t successes, uint64_t trials, uint64_t master_seed);

// threads to use: STINGRAY_THREADS when set, else requested, else the hardware count; always >= 1
unsigned resolve_threads(unsigned requested = 0);
// fn(i) for i in [0, n) spread over threads; callers store results by index so the
// outcome does not depend on the schedule. The first exception is rethrown.
void parallel_for(uint64_t n, unsigned threads, const std::function<void(uint64_t)>& fn);

}  // namespace stingray
