#ifndef ULRICH3_CECH_HPP
#define ULRICH3_CECH_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ulrich3/elimination.hpp"
#include "ulrich3/psheaf.hpp"

namespace cech {

// Truncated Cech basis of O(n) on the opens indexed by the nonempty subset
// `imask` of {0,1,2,3}: monomials of total degree n whose exponents are
// >= -B inside imask, >= 0 outside, and <= cap everywhere. Sorted by key.
std::vector<psheaf::Monomial> piece_basis(uint8_t imask, int n, int B, int cap);

// default truncation bound for a complex at a twist: large enough for the
// entry degrees and for the deepest Bott classes of every summand
int default_bound(const psheaf::FreeComplex& c, int t);

// number of monomials in piece_basis(imask, n, B, cap), by inclusion-exclusion
int64_t piece_count(uint8_t imask, int n, int B, int cap);

// total truncated dimension the engine would process for c at twist t with
// the default bound; the cost proxy for choosing an evaluation side
int64_t truncation_cost(const psheaf::FreeComplex& c, int t, const u3::Options& opt);

struct HyperResult {
    std::array<int64_t, 4> h{0, 0, 0, 0}; // h^i = H^{last+i} of the total complex
    std::vector<int64_t> all;             // H^n for n = 0 .. last+3
    int B_used = 0;
    std::vector<uint64_t> primes;         // empty in pure exact mode
    std::string rank_mode;                // "exact", "modular" or "modular+exact"
    int64_t total_dim = 0;                // truncated total-complex dimension at B_used
    int64_t total_entries = 0;            // assembled differential entries at B_used
    bool weight_split = false;
};

// Hypercohomology of c twisted by t from the truncated Cech total complex.
// Internally runs at B and B+1 (doubling B on disagreement, up to the retry
// cap) and certifies the alternating sum against euler_characteristic.
HyperResult hypercohomology(const psheaf::FreeComplex& c, int t, const u3::Options& opt);

// Two-row shortcut for complexes with at most 4 terms: only the q = 0 and
// q = 3 Bott rows of the first page survive, and no differential can connect
// them. Exact ranks; refuses longer complexes.
std::array<int64_t, 4> fast_path_two_row(const psheaf::FreeComplex& c, int t);

// H^0..H^3 of the sheaf presented at the right end of c. When a dual complex
// is supplied the engine evaluates whichever side truncates smaller at this
// twist (the dual presents the dual sheaf from the left; callers pass it only
// for self-dual sheaves). Every certification runs on the side actually used.
struct SheafDims {
    std::array<int64_t, 4> h{0, 0, 0, 0};
    int B_used = 0;
    std::vector<uint64_t> primes;
    std::string rank_mode;
    bool weight_split = false;
    std::string side; // "direct" or "dual"
};
SheafDims sheaf_dims(const psheaf::FreeComplex& c, const psheaf::FreeComplex* dual, int t,
                     const u3::Options& opt);

struct CohomologyTable {
    std::string sheaf; // "O" | "E" | "EE" | "S2E"
    int m = 0;
    struct Row {
        int t;
        std::array<int64_t, 4> h;
        int B;
    };
    std::vector<Row> rows; // ascending t

    struct Provenance {
        std::vector<uint64_t> primes;
        std::string rank_mode;
        uint64_t seed = 0;
        std::string engine;
    } prov;

    const Row* find(int t) const;
};

// Per-twist sweep; every row is certified against `chi` (exact equality of
// the alternating sum with the sheaf's Hilbert polynomial). `dual` as in
// sheaf_dims; pass nullptr to force direct evaluation.
CohomologyTable table(const psheaf::FreeComplex& c, const psheaf::FreeComplex* dual,
                      int tmin, int tmax, const std::string& sheaf, int m,
                      const std::function<int64_t(int)>& chi, const u3::Options& opt);

// Reference assembly of the truncated total differentials as rational
// matrices (no weight splitting, no column scaling). Intended for tests and
// small complexes: cross-checks the production assembly.
std::vector<exactalg::SparseMatrix> assemble_total_rational(const psheaf::FreeComplex& c,
                                                            int t, int B);

} // namespace cech

#endif
