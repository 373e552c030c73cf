#ifndef ULRICH3_COMMON_HPP
#define ULRICH3_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace u3 {

inline constexpr const char* kEngineVersion = "ulrich3-1.0";

using Int = mpz_class;
using Rat = mpq_class;

// Engine failure that no caller is expected to recover from (certification
// mismatch, Euler mismatch, broken invariant).
struct EngineError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A randomly drawn prime divided a denominator during modular reduction.
struct BadPrimeError : std::runtime_error {
    explicit BadPrimeError(uint64_t p)
        : std::runtime_error("bad prime " + std::to_string(p)), prime(p) {}
    uint64_t prime;
};

// chi(O(n)) on P^3 as a polynomial in n: (n+1)(n+2)(n+3)/6.
// Valid for all integers, negative values included.
inline int64_t chi_line_poly(int64_t n) {
    return (n + 1) * (n + 2) * (n + 3) / 6;
}

// Binomial C(n,k) for small k >= 0, zero when n < k.
inline int64_t binom(int64_t n, int k) {
    if (n < 0 || n < k) return 0;
    int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct Options {
    uint64_t seed = 20240613;       // drives prime draws and sample points
    int trunc_override = 0;         // 0 = use the default bound formula
    int max_doublings = 3;          // stability retries before hard error
    enum class RankMode { Auto, Modular, Exact };
    RankMode mode = RankMode::Auto;
    int64_t exact_threshold = 200000; // entry-count bound for the exact cross-check
    int threads = 0;                // 0 = hardware concurrency
    bool long_run = false;
};

} // namespace u3

#endif
