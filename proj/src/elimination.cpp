#include "ulrich3/elimination.hpp"

#include <algorithm>
#include <queue>

namespace exactalg {

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    // deterministic Miller-Rabin for n < 2^64 with the 12 bases above
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    Zp f{n};
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = f.pow(a % n, d);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = f.mul(x, x);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

namespace {

template <class V>
using Row = std::vector<std::pair<uint32_t, V>>;

// r2 <- op(r2, piv) merged by column; op receives null for absent entries;
// zero results are dropped.
template <class V, class MulAdd>
void merge_rows(Row<V>& r2, const Row<V>& piv, MulAdd&& op, Row<V>& scratch) {
    scratch.clear();
    size_t i = 0, j = 0;
    while (i < r2.size() || j < piv.size()) {
        if (j == piv.size() || (i < r2.size() && r2[i].first < piv[j].first)) {
            V v = op(&r2[i].second, (const V*)nullptr);
            if (!(v == V{})) scratch.emplace_back(r2[i].first, std::move(v));
            ++i;
        } else if (i == r2.size() || piv[j].first < r2[i].first) {
            V v = op((const V*)nullptr, &piv[j].second);
            if (!(v == V{})) scratch.emplace_back(piv[j].first, std::move(v));
            ++j;
        } else {
            V v = op(&r2[i].second, &piv[j].second);
            if (!(v == V{})) scratch.emplace_back(r2[i].first, std::move(v));
            ++i, ++j;
        }
    }
    r2.swap(scratch);
}

// Elimination skeleton shared by the F_p and integer paths. Pivoting is
// min-fill flavored: smallest active row first, then the column with the
// smallest active count.
template <class V, class Update>
int64_t eliminate(std::vector<Row<V>>& rowv, int cols, Update&& update) {
    const uint32_t n = (uint32_t)rowv.size();
    std::vector<int32_t> col_count(cols, 0);
    std::vector<std::vector<uint32_t>> col_rows(cols);
    std::vector<char> alive(n, 1);
    using HeapItem = std::pair<uint32_t, uint32_t>; // (nnz, row)
    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>> heap;

    for (uint32_t r = 0; r < n; ++r) {
        if (rowv[r].empty()) {
            alive[r] = 0;
            continue;
        }
        for (auto& [c, v] : rowv[r]) {
            ++col_count[c];
            col_rows[c].push_back(r);
        }
        heap.emplace((uint32_t)rowv[r].size(), r);
    }

    auto find_col = [&](uint32_t r, uint32_t c) -> int64_t {
        auto& row = rowv[r];
        auto it = std::lower_bound(row.begin(), row.end(), c,
                                   [](const auto& e, uint32_t cc) { return e.first < cc; });
        return it != row.end() && it->first == c ? (int64_t)(it - row.begin()) : (int64_t)-1;
    };

    int64_t rank = 0;
    while (!heap.empty()) {
        auto [nnz, r] = heap.top();
        heap.pop();
        if (!alive[r] || rowv[r].size() != nnz) continue; // stale
        uint32_t pc = rowv[r][0].first;
        int32_t best = col_count[pc];
        for (auto& [c, v] : rowv[r]) {
            if (col_count[c] < best || (col_count[c] == best && c < pc)) {
                best = col_count[c];
                pc = c;
            }
        }
        ++rank;
        alive[r] = 0;
        for (auto& [c, v] : rowv[r]) --col_count[c];

        auto victims = std::move(col_rows[pc]);
        col_rows[pc].clear();
        for (uint32_t r2 : victims) {
            if (!alive[r2] || r2 == r) continue;
            int64_t pos = find_col(r2, pc);
            if (pos < 0) continue; // stale adjacency entry
            for (auto& [c, v] : rowv[r2]) --col_count[c];
            update(rowv[r2], rowv[r], pc, (size_t)pos);
            if (rowv[r2].empty()) {
                alive[r2] = 0;
                continue;
            }
            for (auto& [c, v] : rowv[r2]) {
                ++col_count[c];
                col_rows[c].push_back(r2);
            }
            heap.emplace((uint32_t)rowv[r2].size(), r2);
        }
    }
    return rank;
}

void strip_content(Row<u3::Int>& row) {
    u3::Int g = 0;
    for (auto& [c, v] : row) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
    if (g > 1)
        for (auto& [c, v] : row) v /= g;
}

// sort + accumulate + drop zeros, then strip content
void normalize_int_row(Row<u3::Int>& row) {
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Row<u3::Int> out;
    out.reserve(row.size());
    for (auto& [c, v] : row) {
        if (!out.empty() && out.back().first == c)
            out.back().second += v;
        else
            out.emplace_back(c, std::move(v));
    }
    row.clear();
    for (auto& [c, v] : out)
        if (v != 0) row.emplace_back(c, std::move(v));
    strip_content(row);
}

int64_t rank_exact_rows(std::vector<Row<u3::Int>>& rowv, int cols) {
    using u3::Int;
    for (auto& row : rowv) normalize_int_row(row);
    Row<Int> scratch;
    return eliminate<Int>(rowv, cols,
        [&](Row<Int>& r2, const Row<Int>& piv, uint32_t pc, size_t pos) {
            Int pv, wv = r2[pos].second;
            for (auto& [c, v] : piv)
                if (c == pc) {
                    pv = v;
                    break;
                }
            Int g;
            mpz_gcd(g.get_mpz_t(), pv.get_mpz_t(), wv.get_mpz_t());
            Int a = pv / g, b = wv / g; // r2 <- a*r2 - b*piv kills column pc
            merge_rows<Int>(r2, piv,
                [&](const Int* x, const Int* y) -> Int {
                    Int v = 0;
                    if (x) v += a * (*x);
                    if (y) v -= b * (*y);
                    return v;
                },
                scratch);
            strip_content(r2);
        });
}

} // namespace

int64_t rank_mod_i64(const TripletsI64& m, uint64_t p) {
    Zp f{p};
    std::vector<Row<uint64_t>> rowv(m.rows);
    {
        std::vector<uint32_t> cnt(m.rows, 0);
        for (auto& [r, c, v] : m.t) ++cnt[r];
        for (int r = 0; r < m.rows; ++r) rowv[r].reserve(cnt[r]);
        for (auto& [r, c, v] : m.t) rowv[r].emplace_back(c, f.from_int(v));
        for (auto& row : rowv) {
            std::sort(row.begin(), row.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            Row<uint64_t> out;
            out.reserve(row.size());
            for (auto& [c, v] : row) {
                if (!out.empty() && out.back().first == c)
                    out.back().second = f.add(out.back().second, v);
                else
                    out.emplace_back(c, v);
            }
            row.clear();
            for (auto& [c, v] : out)
                if (v != 0) row.emplace_back(c, v);
        }
    }

    Row<uint64_t> scratch;
    return eliminate<uint64_t>(rowv, m.cols,
        [&](Row<uint64_t>& r2, const Row<uint64_t>& piv, uint32_t pc, size_t pos) {
            uint64_t pv = 0, wv = r2[pos].second;
            for (auto& [c, v] : piv)
                if (c == pc) {
                    pv = v;
                    break;
                }
            uint64_t fct = f.mul(wv, f.inv(pv)); // r2 <- r2 - fct*piv
            merge_rows<uint64_t>(r2, piv,
                [&](const uint64_t* a, const uint64_t* b) -> uint64_t {
                    uint64_t x = a ? *a : 0;
                    uint64_t y = b ? f.mul(fct, *b) : 0;
                    return f.sub(x, y);
                },
                scratch);
        });
}

int64_t rank_exact_i64(const TripletsI64& m) {
    std::vector<Row<u3::Int>> rowv(m.rows);
    for (auto& [r, c, v] : m.t) rowv[r].emplace_back(c, u3::Int((long)v));
    return rank_exact_rows(rowv, m.cols);
}

RankResult rank(const SparseMatrix& mm, const RankRequest& req) {
    SparseMatrix m = mm;
    m.canonicalize();
    RankResult res;
    res.kind = req.kind;
    if (req.kind == RankRequest::Kind::Exact) {
        // clear denominators row-wise (rank-preserving row scaling)
        std::vector<u3::Int> lcm(m.rows, 1);
        for (auto& e : m.entries)
            mpz_lcm(lcm[e.row].get_mpz_t(), lcm[e.row].get_mpz_t(),
                    e.v.get_den().get_mpz_t());
        std::vector<Row<u3::Int>> rowv(m.rows);
        for (auto& e : m.entries)
            rowv[e.row].emplace_back((uint32_t)e.col,
                                     u3::Int(e.v.get_num() * (lcm[e.row] / e.v.get_den())));
        res.rank = rank_exact_rows(rowv, m.cols);
        return res;
    }
    if (req.primes.empty()) throw u3::EngineError("modular rank needs at least one prime");
    res.rank = 0;
    for (uint64_t p : req.primes) {
        Zp f{p};
        TripletsI64 t;
        t.rows = m.rows;
        t.cols = m.cols;
        for (auto& e : m.entries) {
            uint64_t v = f.from_rat(e.v); // may throw BadPrimeError
            if (v) t.t.emplace_back((uint32_t)e.row, (uint32_t)e.col, (int64_t)v);
        }
        int64_t r = rank_mod_i64(t, p);
        res.primes.push_back(p);
        res.per_prime.push_back(r);
        res.rank = std::max(res.rank, r);
    }
    return res;
}

std::vector<std::vector<u3::Rat>> kernel_basis(const SparseMatrix& mm) {
    SparseMatrix m = mm;
    m.canonicalize();
    const int R = m.rows, C = m.cols;
    std::vector<Row<u3::Rat>> rowv(R);
    for (auto& e : m.entries) rowv[e.row].emplace_back((uint32_t)e.col, e.v);

    // forward echelon in fixed column order; the RREF (hence the kernel
    // basis) does not depend on which row is picked as pivot
    std::vector<char> active(R, 1);
    std::vector<std::pair<int, int>> pivots; // (row, col)
    Row<u3::Rat> scratch;
    std::vector<int> at_col;
    for (int c = 0; c < C; ++c) {
        at_col.clear();
        for (int r = 0; r < R; ++r)
            if (active[r] && !rowv[r].empty() && (int)rowv[r][0].first == c)
                at_col.push_back(r);
        if (at_col.empty()) continue;
        int pr = at_col[0];
        for (int r : at_col)
            if (rowv[r].size() < rowv[pr].size()) pr = r;
        active[pr] = 0;
        pivots.emplace_back(pr, c);
        const u3::Rat pv = rowv[pr][0].second;
        for (int r : at_col) {
            if (r == pr) continue;
            u3::Rat fct = rowv[r][0].second / pv;
            merge_rows<u3::Rat>(rowv[r], rowv[pr],
                [&](const u3::Rat* x, const u3::Rat* y) -> u3::Rat {
                    u3::Rat v = 0;
                    if (x) v += *x;
                    if (y) v -= fct * (*y);
                    return v;
                },
                scratch);
        }
    }
    // back-substitution to reach the RREF proper
    for (auto& [pr, pc] : pivots) {
        u3::Rat pv = rowv[pr][0].second;
        for (auto& [c, v] : rowv[pr]) v /= pv;
    }
    for (int i = (int)pivots.size() - 1; i >= 0; --i) {
        auto [pr, pc] = pivots[i];
        for (int j = 0; j < i; ++j) {
            auto [qr, qc] = pivots[j];
            auto& row = rowv[qr];
            auto it = std::lower_bound(row.begin(), row.end(), (uint32_t)pc,
                                       [](const auto& e, uint32_t cc) { return e.first < cc; });
            if (it == row.end() || (int)it->first != pc) continue;
            u3::Rat fct = it->second;
            merge_rows<u3::Rat>(row, rowv[pr],
                [&](const u3::Rat* x, const u3::Rat* y) -> u3::Rat {
                    u3::Rat v = 0;
                    if (x) v += *x;
                    if (y) v -= fct * (*y);
                    return v;
                },
                scratch);
        }
    }

    std::vector<char> is_pivot(C, 0);
    for (auto& [pr, pc] : pivots) is_pivot[pc] = 1;
    std::vector<std::vector<u3::Rat>> basis;
    for (int fcol = 0; fcol < C; ++fcol) {
        if (is_pivot[fcol]) continue;
        std::vector<u3::Rat> v(C, u3::Rat(0));
        v[fcol] = 1;
        for (auto& [pr, pc] : pivots) {
            auto& row = rowv[pr];
            auto it = std::lower_bound(row.begin(), row.end(), (uint32_t)fcol,
                                       [](const auto& e, uint32_t cc) { return e.first < cc; });
            if (it != row.end() && (int)it->first == fcol) v[pc] = -it->second;
        }
        for (auto& x : v)
            if (x != 0) {
                u3::Rat lead = x;
                for (auto& y : v) y /= lead;
                break;
            }
        basis.push_back(std::move(v));
    }
    return basis;
}

CertifiedRanker::CertifiedRanker(u3::Options::RankMode mode, int64_t exact_threshold,
                                 PrimeSource& primes)
    : mode_(mode), threshold_(exact_threshold), source_(&primes) {
    if (mode_ != u3::Options::RankMode::Exact) refresh_primes();
}

void CertifiedRanker::refresh_primes() {
    primes_.clear();
    primes_.push_back(source_->next());
    uint64_t q = source_->next();
    while (q == primes_[0]) q = source_->next();
    primes_.push_back(q);
}

int64_t CertifiedRanker::rank_i64(const TripletsI64& m, std::optional<bool> exact_hint) const {
    bool do_exact = mode_ == u3::Options::RankMode::Exact ||
                    (mode_ == u3::Options::RankMode::Auto &&
                     (exact_hint ? *exact_hint : m.entry_count() < threshold_));
    std::optional<int64_t> modular;
    if (mode_ != u3::Options::RankMode::Exact) {
        int64_t r1 = rank_mod_i64(m, primes_[0]);
        int64_t r2 = rank_mod_i64(m, primes_[1]);
        if (r1 != r2)
            throw u3::EngineError("dual-prime rank disagreement: " + std::to_string(r1) +
                                  " vs " + std::to_string(r2));
        modular = r1;
    }
    if (do_exact) {
        int64_t re = rank_exact_i64(m);
        if (modular && *modular != re)
            throw u3::EngineError("modular rank " + std::to_string(*modular) +
                                  " disagrees with exact rank " + std::to_string(re));
        return re;
    }
    return *modular;
}

int64_t CertifiedRanker::rank_rat(const SparseMatrix& m) {
    for (int attempt = 0;; ++attempt) {
        try {
            bool do_exact = mode_ == u3::Options::RankMode::Exact ||
                            (mode_ == u3::Options::RankMode::Auto &&
                             m.entry_count() < threshold_);
            std::optional<int64_t> modular;
            if (mode_ != u3::Options::RankMode::Exact) {
                RankResult r = rank(m, RankRequest::modular(primes_));
                if (r.per_prime[0] != r.per_prime[1])
                    throw u3::EngineError("dual-prime rank disagreement");
                modular = r.rank;
            }
            if (do_exact) {
                int64_t re = rank(m, RankRequest::exact()).rank;
                if (modular && *modular != re)
                    throw u3::EngineError("modular rank disagrees with exact rank");
                return re;
            }
            return *modular;
        } catch (const u3::BadPrimeError&) {
            if (attempt > 16) throw;
            refresh_primes();
        }
    }
}

} // namespace exactalg
