#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stingray {

constexpr uint64_t kDefaultSeed = 0xC0FFEE;

struct RunConfig {
    std::string command;
    std::string out;              // empty: stdout
    std::string format = "json";  // json, or csv for Monte Carlo trial logs
    double log_base = 0;          // 0: natural log
    unsigned threads = 1;
    uint64_t seed = kDefaultSeed;
    std::string data_dir, cache_dir;
};

// exit codes: 0 success, 1 usage or guard error, 2 statistical bound violated
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int cli_main(int argc, char** argv);

}  // namespace stingray
