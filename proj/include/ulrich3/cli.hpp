#ifndef ULRICH3_CLI_HPP
#define ULRICH3_CLI_HPP

#include <cstdint>
#include <string>

#include "ulrich3/common.hpp"

namespace ucli {

struct RunConfig {
    std::string command;    // resolution | cohomology | check | ranks
    std::string check_what; // instanton | coh0 | lepotier | moduli-dim | ulrich | natural
    std::string sheaf = "S2E";
    int m = 1;
    int n = 3;
    int d = 0;
    bool have_range = false;
    int tmin = 0, tmax = 0;
    int trunc = 0;
    uint64_t seed = u3::Options{}.seed;
    std::string mode = "auto"; // auto | modular | exact
    std::string cache_dir;     // empty: env ULRICH3_CACHE_DIR, then .ulrich3-cache
    std::string format = "md"; // json | csv | md
    bool long_run = false;
    std::string out_dir = ".";
};

u3::Options engine_options(const RunConfig& cfg);
std::string resolved_cache_dir(const RunConfig& cfg);

// exit codes: 0 verified / ok, 1 falsified (the witness is named), 2 error
int run_resolution(const RunConfig& cfg);
int run_cohomology(const RunConfig& cfg);
int run_check(const RunConfig& cfg);
int run_ranks(const RunConfig& cfg);
int dispatch(const RunConfig& cfg);

} // namespace ucli

#endif
