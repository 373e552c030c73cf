#ifndef ULRICH3_ELIMINATION_HPP
#define ULRICH3_ELIMINATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "ulrich3/modular.hpp"
#include "ulrich3/sparse.hpp"

namespace exactalg {

// ---- low-level rank kernels -------------------------------------------------

// Rank over F_p. Input triplets may contain duplicates; they are accumulated.
int64_t rank_mod_i64(const TripletsI64& m, uint64_t p);

// Exact rank over Q of an integer matrix, by division-controlled (content-
// stripped cross-multiplication) sparse elimination with Markowitz-flavored
// pivoting.
int64_t rank_exact_i64(const TripletsI64& m);

// ---- spec-level operations --------------------------------------------------

struct RankRequest {
    enum class Kind { Exact, Modular };
    Kind kind = Kind::Exact;
    std::vector<uint64_t> primes; // used when kind == Modular
    static RankRequest exact() { return {}; }
    static RankRequest modular(std::vector<uint64_t> ps) {
        return {Kind::Modular, std::move(ps)};
    }
};

struct RankResult {
    int64_t rank = 0;
    RankRequest::Kind kind = RankRequest::Kind::Exact;
    std::vector<uint64_t> primes;               // primes actually used
    std::vector<int64_t> per_prime;             // rank per prime (modular)
};

// rank of a rational sparse matrix. Exact mode: true rank over Q.
// Modular mode: max of ranks mod each prime (a lower bound on the true
// rank); throws BadPrimeError when a prime divides some denominator.
RankResult rank(const SparseMatrix& m, const RankRequest& req);

// Right null space basis over Q (exact mode only). Vectors come from the
// reduced row echelon form, one per free column in ascending column order,
// each scaled so its first nonzero coordinate is 1.
std::vector<std::vector<u3::Rat>> kernel_basis(const SparseMatrix& m);

// ---- certified ranks --------------------------------------------------------

// Certification policy: every rank feeding an acceptance check is computed
// modulo two distinct random primes (agreement mandatory) and, below the
// entry-count threshold, exactly as well. `exact_hint` lets a caller force
// the policy decision made at the level of a larger assembled matrix.
class CertifiedRanker {
  public:
    CertifiedRanker(u3::Options::RankMode mode, int64_t exact_threshold,
                    PrimeSource& primes);

    // Draw (or re-draw) the pair of working primes.
    void refresh_primes();
    const std::vector<uint64_t>& primes() const { return primes_; }

    int64_t rank_i64(const TripletsI64& m, std::optional<bool> exact_hint = {}) const;
    int64_t rank_rat(const SparseMatrix& m);

    u3::Options::RankMode mode() const { return mode_; }
    int64_t exact_threshold() const { return threshold_; }

  private:
    u3::Options::RankMode mode_;
    int64_t threshold_;
    PrimeSource* source_;
    std::vector<uint64_t> primes_;
};

} // namespace exactalg

#endif
