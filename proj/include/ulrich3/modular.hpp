#ifndef ULRICH3_MODULAR_HPP
#define ULRICH3_MODULAR_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "ulrich3/common.hpp"

namespace exactalg {

// Arithmetic in F_p for an odd prime p < 2^62.
struct Zp {
    uint64_t p;

    uint64_t add(uint64_t a, uint64_t b) const {
        uint64_t s = a + b;
        return s >= p ? s - p : s;
    }
    uint64_t sub(uint64_t a, uint64_t b) const { return a >= b ? a - b : a + p - b; }
    uint64_t neg(uint64_t a) const { return a == 0 ? 0 : p - a; }
    uint64_t mul(uint64_t a, uint64_t b) const {
        return (uint64_t)(((unsigned __int128)a * b) % p);
    }
    uint64_t pow(uint64_t a, uint64_t e) const {
        uint64_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    uint64_t inv(uint64_t a) const { return pow(a % p, p - 2); }

    // Signed 64-bit value reduced into [0, p).
    uint64_t from_int(int64_t v) const {
        int64_t r = v % (int64_t)p;
        if (r < 0) r += (int64_t)p;
        return (uint64_t)r;
    }
    // mpz reduced into [0, p).
    uint64_t from_mpz(const mpz_class& v) const {
        mpz_class r = v % (long)p; // p < 2^62 fits in long
        long x = r.get_si();
        if (x < 0) x += (long)p;
        return (uint64_t)x;
    }
    // num/den mod p; throws BadPrimeError when p | den.
    uint64_t from_rat(const u3::Rat& q) const {
        uint64_t d = from_mpz(q.get_den());
        if (d == 0) throw u3::BadPrimeError(p);
        return mul(from_mpz(q.get_num()), inv(d));
    }
};

bool is_prime_u64(uint64_t n);

// Deterministic stream of random 62-bit primes from a seed.
class PrimeSource {
  public:
    explicit PrimeSource(uint64_t seed) : rng_(seed) {}

    uint64_t next() {
        for (;;) {
            uint64_t c = (rng_() | 1ULL | (1ULL << 61)) & ((1ULL << 62) - 1);
            if (is_prime_u64(c)) return c;
        }
    }
    std::vector<uint64_t> take(int n) {
        std::vector<uint64_t> v;
        v.reserve(n);
        for (int i = 0; i < n; ++i) v.push_back(next());
        return v;
    }

  private:
    std::mt19937_64 rng_;
};

} // namespace exactalg

#endif
