#include "ulrich3/ulrich.hpp"

#include <numeric>

namespace ulrich {

u3::Rat ulrich_hilbert(int n, int d, int64_t r, int64_t t) {
    VeroneseParams{n, d}.validate();
    if (r < 1) throw u3::EngineError("ulrich_hilbert needs rank >= 1");
    u3::Rat acc(r);
    for (int j = 1; j <= n; ++j) acc *= u3::Rat((long)((int64_t)d * j + t));
    u3::Int fact = 1;
    for (int j = 2; j <= n; ++j) fact *= j;
    acc /= u3::Rat(fact);
    return acc;
}

int64_t rank_divisibility(int n, int d) {
    VeroneseParams{n, d}.validate();
    if (n > 20) throw u3::EngineError("n too large for exact factorial arithmetic");
    int64_t fact = 1;
    for (int j = 2; j <= n; ++j) fact *= j;
    int64_t prod = 1;
    for (int j = 1; j <= n; ++j) prod = (prod * (((int64_t)d * j + 1) % fact)) % fact;
    const int64_t g = std::gcd(fact, prod == 0 ? fact : prod);
    return fact / g;
}

RankConstraint ur_set(int d) {
    if (d <= 1) throw u3::EngineError("ur_set needs d >= 2");
    RankConstraint rc;
    switch (d % 6) {
        case 0: rc = {6, false}; break;
        case 1:
        case 5: rc = {1, true}; break;
        case 2:
        case 4: rc = {2, false}; break;
        case 3: rc = {3, false}; break;
    }
    if (rc.modulus != rank_divisibility(3, d))
        throw u3::EngineError("classification disagrees with the divisibility arithmetic at d=" +
                              std::to_string(d));
    if (rc.exclude_rank_one != (rc.modulus == 1))
        throw u3::EngineError("rank-one exclusion shape broken");
    return rc;
}

DecompositionDME decompose_d(int d) {
    if (d < 3 || d % 2 == 0)
        throw u3::EngineError("no equivariant symmetric-square construction applies: d must be "
                              "odd and >= 3");
    DecompositionDME out;
    out.d = d;
    out.m = (d - 1) / 2;
    out.h = out.m / 3;
    out.e = out.m % 3;
    out.k = (int64_t)out.m * (out.m + 1) / 2;
    if (out.h == 0 && out.e == 0) throw u3::EngineError("(h, e) = (0, 0) excluded");
    if (6 * out.h + 2 * out.e + 1 != d) throw u3::EngineError("decomposition arithmetic broken");
    if (4 * out.k != ((int64_t)d * d - 1) / 2)
        throw u3::EngineError("charge identity 4k = (d^2-1)/2 broken");
    return out;
}

std::array<int, 3> ulrich_twists(int d) {
    if (d < 2) throw u3::EngineError("ulrich_twists needs d >= 2");
    return {d - 2, -2, -d - 2};
}

UlrichCertificate check_ulrich(const cech::CohomologyTable& table, int d) {
    UlrichCertificate cert;
    cert.d = d;
    cert.twists = ulrich_twists(d);
    cert.table_sheaf = table.sheaf;
    cert.table_m = table.m;
    cert.pass = true;
    for (int s = 0; s < 3; ++s) {
        const auto* row = table.find(cert.twists[s]);
        if (!row)
            throw u3::EngineError("table does not cover twist " +
                                  std::to_string(cert.twists[s]));
        cert.dims[s] = row->h;
        if (row->h != std::array<int64_t, 4>{0, 0, 0, 0}) {
            cert.pass = false;
            cert.failed_twists.push_back(cert.twists[s]);
        }
    }
    return cert;
}

NaturalReport natural_cohomology(const cech::CohomologyTable& table, int tmin, int tmax) {
    NaturalReport rep;
    for (int t = tmin; t <= tmax; ++t) {
        const auto* row = table.find(t);
        if (!row) throw u3::EngineError("table does not cover twist " + std::to_string(t));
        int nonzero = 0;
        for (int i = 0; i < 4; ++i) nonzero += row->h[i] != 0;
        if (nonzero > 1) {
            rep.natural = false;
            rep.violations.push_back(t);
        }
    }
    return rep;
}

} // namespace ulrich
