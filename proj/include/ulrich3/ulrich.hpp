#ifndef ULRICH3_ULRICH_HPP
#define ULRICH3_ULRICH_HPP

#include <array>
#include <string>
#include <vector>

#include "ulrich3/cech.hpp"

namespace ulrich {

// degree-d Veronese n-fold inside P^N, N = C(n+d, n) - 1
struct VeroneseParams {
    int n = 3;
    int d = 1;
    int64_t ambient_dim() const { return u3::binom(n + d, n) - 1; }
    void validate() const {
        if (n < 1 || d < 1) throw u3::EngineError("Veronese parameters need n, d >= 1");
    }
};

// "every Ulrich rank is a multiple of modulus", optionally minus rank one
struct RankConstraint {
    int64_t modulus = 1;
    bool exclude_rank_one = false;
};

// d = 6h + 2e + 1, m = 3h + e, k = C(m+1,2); charge identity 4k = (d^2-1)/2
struct DecompositionDME {
    int d = 0, h = 0, e = 0, m = 0;
    int64_t k = 0;
};

// chi(U(t)) = r/n! prod_{1<=j<=n} (dj + t) for an Ulrich bundle of rank r
u3::Rat ulrich_hilbert(int n, int d, int64_t r, int64_t t);

// minimal M such that n! | r * prod(dj+1) forces M | r:
// M = n! / gcd(n!, prod_{1<=j<=n}(dj+1))
int64_t rank_divisibility(int n, int d);

// the complete classification on Veronese threefolds, by d mod 6
RankConstraint ur_set(int d);

DecompositionDME decompose_d(int d);

// twists {d-2, -2, -d-2}: F(2d-2) is Ulrich on X_d iff F vanishes there
std::array<int, 3> ulrich_twists(int d);

struct UlrichCertificate {
    int d = 0;
    std::array<int, 3> twists{};
    std::array<std::array<int64_t, 4>, 3> dims{};
    bool pass = false;
    std::vector<int> failed_twists;
    std::string table_sheaf;
    int table_m = 0;
};
// pass iff all twelve dimensions vanish; the table must cover all three twists
UlrichCertificate check_ulrich(const cech::CohomologyTable& table, int d);

struct NaturalReport {
    bool natural = true;
    std::vector<int> violations; // twists with two or more nonzero dimensions
};
NaturalReport natural_cohomology(const cech::CohomologyTable& table, int tmin, int tmax);

} // namespace ulrich

#endif
