#include "ulrich3/cech.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <memory>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace cech {

namespace {

constexpr std::array<std::array<uint8_t, 6>, 4> kMasksByOpens = {{
    {1, 2, 4, 8, 0, 0},       // |I| = 1
    {3, 5, 6, 9, 10, 12},     // |I| = 2
    {7, 11, 13, 14, 0, 0},    // |I| = 3
    {15, 0, 0, 0, 0, 0},      // |I| = 4
}};
constexpr std::array<int, 4> kMaskCount = {4, 6, 4, 1};

const uint64_t kZeroKey = psheaf::Monomial{}.key();

} // namespace

std::vector<psheaf::Monomial> piece_basis(uint8_t imask, int n, int B, int cap) {
    if (B < 1) throw u3::EngineError("truncation bound must be >= 1");
    if (imask == 0 || imask > 15) throw u3::EngineError("cech piece needs a nonempty subset");
    std::array<int, 4> lo;
    for (int i = 0; i < 4; ++i) lo[i] = (imask >> i) & 1 ? -B : 0;
    std::vector<psheaf::Monomial> out;
    for (int e0 = lo[0]; e0 <= cap; ++e0) {
        const int r0 = n - e0;
        if (r0 < lo[1] + lo[2] + lo[3] || r0 > 3 * cap) continue;
        for (int e1 = lo[1]; e1 <= cap; ++e1) {
            const int r1 = r0 - e1;
            if (r1 < lo[2] + lo[3] || r1 > 2 * cap) continue;
            for (int e2 = lo[2]; e2 <= cap; ++e2) {
                const int e3 = r1 - e2;
                if (e3 < lo[3] || e3 > cap) continue;
                psheaf::Monomial m;
                m.e = {e0, e1, e2, e3};
                out.push_back(m);
            }
        }
    }
    return out; // loops emit keys in ascending (lex) order already
}

int default_bound(const psheaf::FreeComplex& c, int t) {
    int b = std::max(2, c.max_entry_degree() + std::abs(t) / 2);
    for (auto& term : c.terms)
        for (int a : term.twists) {
            const int n = a + t;
            // all-negative Bott classes of O(n) need exponents down to n+3
            b = std::max(b, -n - 3);
            // polynomial sections of O(n) need the cap B + |t| to reach n
            b = std::max(b, n - std::abs(t));
        }
    return b;
}

int64_t piece_count(uint8_t imask, int n, int B, int cap) {
    // shift by the lower bounds, then count {f >= 0, sum f = S, f_i <= U_i}
    int S = n;
    std::array<int64_t, 4> U;
    for (int i = 0; i < 4; ++i) {
        const int lo = (imask >> i) & 1 ? -B : 0;
        S -= lo;
        U[i] = cap - lo;
    }
    if (S < 0) return 0;
    int64_t total = 0;
    for (int mask = 0; mask < 16; ++mask) {
        int64_t s = S;
        int bits = 0;
        for (int i = 0; i < 4; ++i)
            if (mask & (1 << i)) {
                s -= U[i] + 1;
                ++bits;
            }
        if (s < 0) continue;
        total += (bits % 2 == 0 ? 1 : -1) * u3::binom(s + 3, 3);
    }
    return total;
}

int64_t truncation_cost(const psheaf::FreeComplex& c, int t, const u3::Options& opt) {
    const int B = opt.trunc_override > 0 ? opt.trunc_override : default_bound(c, t);
    const int cap = B + std::abs(t);
    int64_t total = 0;
    for (auto& term : c.terms)
        for (int a : term.twists)
            for (int q = 0; q < 4; ++q)
                for (int mi = 0; mi < kMaskCount[q]; ++mi)
                    total += piece_count(kMasksByOpens[q][mi], a + t, B, cap);
    return total;
}

namespace {

// integer-scaled column of a complex map: all coefficients of column j get
// multiplied by the lcm of their denominators, a rank-preserving scaling of
// the assembled total differential
struct ScaledCol {
    int64_t scale = 1;
    struct Term {
        int gen;                 // target generator
        std::array<int, 4> mexp; // multiplier monomial
        uint64_t kdelta;         // its key minus the zero key
        int64_t v;
    };
    std::vector<Term> terms;
};

std::vector<std::vector<ScaledCol>> scale_columns(const psheaf::FreeComplex& c) {
    std::vector<std::vector<ScaledCol>> out(c.maps.size());
    for (size_t p = 0; p < c.maps.size(); ++p) {
        const psheaf::PolyMatrix& m = c.maps[p];
        out[p].resize(m.source.rank());
        for (int j = 0; j < m.source.rank(); ++j) {
            u3::Int l = 1;
            for (int i = 0; i < m.target.rank(); ++i)
                for (auto& [mono, coef] : m.at(i, j).terms)
                    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), coef.get_den().get_mpz_t());
            if (!l.fits_slong_p())
                throw u3::EngineError("column denominator lcm overflows");
            ScaledCol sc;
            sc.scale = l.get_si();
            for (int i = 0; i < m.target.rank(); ++i)
                for (auto& [mono, coef] : m.at(i, j).terms) {
                    u3::Int v = coef.get_num() * (l / coef.get_den());
                    if (!v.fits_slong_p() || std::llabs(v.get_si()) > (1ll << 40))
                        throw u3::EngineError("scaled coefficient overflows");
                    sc.terms.push_back({i, mono.e, mono.key() - kZeroKey, v.get_si()});
                }
            out[p][j] = std::move(sc);
        }
    }
    return out;
}

struct PieceCache {
    int B, cap;
    std::unordered_map<uint32_t, std::shared_ptr<const std::vector<uint64_t>>> map;

    std::shared_ptr<const std::vector<uint64_t>> get(uint8_t imask, int twist) {
        uint32_t key = ((uint32_t)imask << 24) | (uint32_t)(twist + (1 << 20));
        auto it = map.find(key);
        if (it != map.end()) return it->second;
        auto mono = piece_basis(imask, twist, B, cap);
        auto keys = std::make_shared<std::vector<uint64_t>>();
        keys->reserve(mono.size());
        for (auto& m : mono) keys->push_back(m.key());
        map.emplace(key, keys);
        return map[key];
    }
};

struct Piece {
    int p = 0;
    uint8_t imask = 0;
    int gen = 0;
    int gen_weight = 0;
    uint64_t offset = 0;
    std::shared_ptr<const std::vector<uint64_t>> keys;
};

struct Level {
    int n = 0;
    std::vector<Piece> pieces;
    std::array<int32_t, 16 * 8> piece_at; // (p<<4)|imask -> piece index of gen 0
    uint64_t total = 0;
    std::vector<int32_t> cls;
    std::vector<uint32_t> idx;
    std::vector<uint32_t> elem_piece;
    std::unordered_map<int, int32_t> class_of_weight;
    std::vector<int64_t> class_dim;
    std::vector<int> class_weight;
    std::vector<std::vector<uint64_t>> class_elems;

    int32_t piece_index(int p, uint8_t imask) const { return piece_at[(p << 4) | imask]; }
};

Level build_level(const psheaf::FreeComplex& c, int t, int n, bool split, PieceCache& cache) {
    Level L;
    L.n = n;
    L.piece_at.fill(-1);
    const int P = c.last();
    if (P > 7) throw u3::EngineError("complexes with more than 8 terms are not supported");
    for (int p = std::max(0, n - 3); p <= std::min(P, n); ++p) {
        const int q = n - p;
        const psheaf::FreeSheaf& term = c.terms[p];
        for (int mi = 0; mi < kMaskCount[q]; ++mi) {
            const uint8_t imask = kMasksByOpens[q][mi];
            L.piece_at[(p << 4) | imask] = (int32_t)L.pieces.size();
            for (int g = 0; g < term.rank(); ++g) {
                Piece pc;
                pc.p = p;
                pc.imask = imask;
                pc.gen = g;
                pc.gen_weight = term.has_weights() ? term.weights[g] : 0;
                pc.offset = L.total;
                pc.keys = cache.get(imask, term.twists[g] + t);
                L.total += pc.keys->size();
                L.pieces.push_back(std::move(pc));
            }
        }
    }
    L.cls.resize(L.total);
    L.idx.resize(L.total);
    L.elem_piece.resize(L.total);
    for (uint32_t pi = 0; pi < L.pieces.size(); ++pi) {
        const Piece& pc = L.pieces[pi];
        const auto& keys = *pc.keys;
        for (size_t s = 0; s < keys.size(); ++s) {
            const uint64_t gid = pc.offset + s;
            int w = 0;
            if (split) w = pc.gen_weight + psheaf::Monomial::from_key(keys[s]).weight();
            auto it = L.class_of_weight.find(w);
            int32_t cid;
            if (it == L.class_of_weight.end()) {
                cid = (int32_t)L.class_dim.size();
                L.class_of_weight.emplace(w, cid);
                L.class_dim.push_back(0);
                L.class_weight.push_back(w);
                L.class_elems.emplace_back();
            } else {
                cid = it->second;
            }
            L.cls[gid] = cid;
            L.idx[gid] = (uint32_t)L.class_dim[cid]++;
            L.class_elems[cid].push_back(gid);
            L.elem_piece[gid] = pi;
        }
    }
    return L;
}

uint32_t find_key(const std::vector<uint64_t>& keys, uint64_t k, bool* found) {
    auto it = std::lower_bound(keys.begin(), keys.end(), k);
    *found = it != keys.end() && *it == k;
    return (uint32_t)(it - keys.begin());
}

// Assemble the weight blocks of the total differential level n -> level n+1.
std::vector<exactalg::TripletsI64> assemble_blocks(
    const psheaf::FreeComplex& c, const std::vector<std::vector<ScaledCol>>& scol,
    const Level& src, const Level& tgt, int cap) {
    const int P = c.last();
    std::vector<exactalg::TripletsI64> blocks(src.class_dim.size());
    for (size_t cid = 0; cid < src.class_dim.size(); ++cid) {
        blocks[cid].cols = (int)src.class_dim[cid];
        auto it = tgt.class_of_weight.find(src.class_weight[cid]);
        blocks[cid].rows = it == tgt.class_of_weight.end() ? 0 : (int)tgt.class_dim[it->second];
    }

    for (size_t cid = 0; cid < src.class_dim.size(); ++cid) {
        auto& blk = blocks[cid];
        auto tit = tgt.class_of_weight.find(src.class_weight[cid]);
        const int32_t tcid = tit == tgt.class_of_weight.end() ? -1 : tit->second;
        for (uint64_t gid : src.class_elems[cid]) {
            const Piece& pc = src.pieces[src.elem_piece[gid]];
            const uint64_t key = (*pc.keys)[gid - pc.offset];
            const uint32_t col = src.idx[gid];
            const int64_t scale = pc.p < P ? scol[pc.p][pc.gen].scale : 1;
            const int64_t cech_sign = pc.p % 2 == 0 ? scale : -scale;
            auto target_row = [&](const Piece& tp, uint64_t nkey, const char* what) {
                bool found = false;
                const uint32_t pos = find_key(*tp.keys, nkey, &found);
                if (!found)
                    throw u3::EngineError(std::string(what) + " target monomial missing");
                const uint64_t tgid = tp.offset + pos;
                if (tgt.cls[tgid] != tcid)
                    throw u3::EngineError("differential does not preserve the weight class");
                return tgt.idx[tgid];
            };
            // Cech restrictions, sign (-1)^{position of l in I+l} and (-1)^p
            for (int l = 0; l < 4; ++l) {
                if (pc.imask & (1 << l)) continue;
                const uint8_t tmask = pc.imask | (uint8_t)(1 << l);
                const int32_t tpi = tgt.piece_index(pc.p, tmask);
                if (tpi < 0) throw u3::EngineError("cech target piece missing");
                const uint32_t row = target_row(tgt.pieces[tpi + pc.gen], key, "cech");
                const int bits = __builtin_popcount(pc.imask & ((1u << l) - 1));
                blk.t.emplace_back(row, col, bits % 2 == 0 ? cech_sign : -cech_sign);
            }
            // complex differential (scaled integer coefficients)
            if (pc.p < P) {
                const psheaf::Monomial src_mono = psheaf::Monomial::from_key(key);
                const int32_t tbase = tgt.piece_index(pc.p + 1, pc.imask);
                if (tbase < 0) throw u3::EngineError("complex target piece missing");
                for (const auto& term : scol[pc.p][pc.gen].terms) {
                    bool inside = true;
                    for (int i = 0; i < 4; ++i)
                        if (src_mono.e[i] + term.mexp[i] > cap) {
                            inside = false;
                            break;
                        }
                    if (!inside) continue; // truncated by the exponent cap
                    const uint32_t row =
                        target_row(tgt.pieces[tbase + term.gen], key + term.kdelta, "complex");
                    blk.t.emplace_back(row, col, term.v);
                }
            }
        }
    }
    return blocks;
}

struct RunOut {
    std::vector<int64_t> H;
    int64_t total_dim = 0;
    int64_t total_entries = 0;
    bool split = false;
};

RunOut run_once(const psheaf::FreeComplex& c, int t, int B, const u3::Options& opt,
                const exactalg::CertifiedRanker& ranker) {
    const int P = c.last();
    const int cap = B + std::abs(t);
    const bool split = c.weight_consistent();
    PieceCache cache{B, cap, {}};
    auto scol = scale_columns(c);

    std::vector<int64_t> dims(P + 4, 0), ranks(P + 3, 0);
    RunOut out;
    out.split = split;

    int nthreads = opt.threads > 0 ? opt.threads : (int)std::thread::hardware_concurrency();
    if (nthreads < 1) nthreads = 1;

    Level cur = build_level(c, t, 0, split, cache);
    dims[0] = (int64_t)cur.total;
    for (int n = 0; n <= P + 2; ++n) {
        Level next = build_level(c, t, n + 1, split, cache);
        dims[n + 1] = (int64_t)next.total;
        std::vector<exactalg::TripletsI64> blocks = assemble_blocks(c, scol, cur, next, cap);
        int64_t entries = 0;
        for (auto& b : blocks) entries += b.entry_count();
        out.total_entries += entries;
        if (opt.mode == u3::Options::RankMode::Exact && entries >= opt.exact_threshold)
            throw u3::EngineError("exact mode refused: differential at level " +
                                  std::to_string(n) + " has " + std::to_string(entries) +
                                  " entries (threshold " + std::to_string(opt.exact_threshold) +
                                  ")");
        const bool exact_hint = entries < opt.exact_threshold;
        // rank the blocks; independent, so farm them out
        std::atomic<size_t> cursor{0};
        std::atomic<int64_t> rank_sum{0};
        std::vector<size_t> order(blocks.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            return blocks[a].entry_count() > blocks[b].entry_count();
        });
        std::exception_ptr fail = nullptr;
        std::mutex fail_mx;
        auto worker = [&]() {
            for (;;) {
                const size_t k = cursor.fetch_add(1);
                if (k >= order.size()) return;
                const auto& blk = blocks[order[k]];
                if (blk.t.empty()) continue;
                try {
                    rank_sum += ranker.rank_i64(blk, exact_hint);
                } catch (...) {
                    std::lock_guard<std::mutex> g(fail_mx);
                    if (!fail) fail = std::current_exception();
                    return;
                }
            }
        };
        if (nthreads == 1 || blocks.size() <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        if (fail) std::rethrow_exception(fail);
        ranks[n] = rank_sum.load();
        cur = std::move(next);
    }
    for (int n = 0; n <= P + 3; ++n) out.total_dim += dims[n];

    out.H.assign(P + 4, 0);
    for (int n = 0; n <= P + 3; ++n) {
        const int64_t up = n <= P + 2 ? ranks[n] : 0;
        const int64_t down = n > 0 ? ranks[n - 1] : 0;
        out.H[n] = dims[n] - up - down;
        if (out.H[n] < 0)
            throw u3::EngineError("negative cohomology dimension (rank accounting bug)");
    }
    return out;
}

} // namespace

HyperResult hypercohomology(const psheaf::FreeComplex& c, int t, const u3::Options& opt) {
    c.validate();
    exactalg::PrimeSource ps(opt.seed);
    exactalg::CertifiedRanker ranker(opt.mode, opt.exact_threshold, ps);
    const int P = c.last();
    int B = opt.trunc_override > 0 ? opt.trunc_override : default_bound(c, t);

    for (int attempt = 0;; ++attempt) {
        RunOut r1 = run_once(c, t, B, opt, ranker);
        RunOut r2 = run_once(c, t, B + 1, opt, ranker);
        if (r1.H == r2.H) {
            const int64_t chi = psheaf::euler_characteristic(c, t);
            int64_t acc = 0;
            for (int n = 0; n <= P + 3; ++n) acc += n % 2 == 0 ? r1.H[n] : -r1.H[n];
            if (acc != chi)
                throw u3::EngineError("Euler certification failed at twist " +
                                      std::to_string(t) + ": alternating sum " +
                                      std::to_string(acc) + " vs chi " + std::to_string(chi));
            HyperResult res;
            res.all = r1.H;
            for (int i = 0; i < 4; ++i) res.h[i] = r1.H[P + i];
            res.B_used = B;
            res.total_dim = r1.total_dim;
            res.total_entries = r1.total_entries;
            res.weight_split = r1.split;
            if (opt.mode != u3::Options::RankMode::Exact) {
                res.primes = ranker.primes();
                res.rank_mode = opt.mode == u3::Options::RankMode::Auto ? "modular+exact-below-threshold"
                                                                        : "modular";
            } else {
                res.rank_mode = "exact";
            }
            return res;
        }
        if (attempt >= opt.max_doublings)
            throw u3::EngineError("truncation instability persists at bound " +
                                  std::to_string(B));
        B *= 2;
    }
}

std::array<int64_t, 4> fast_path_two_row(const psheaf::FreeComplex& c, int t) {
    c.validate();
    if (c.length() > 4)
        throw u3::EngineError(
            "two-row fast path refused: complexes with 5 or more terms can carry a "
            "length-4 differential; use hypercohomology");
    const int P = c.last();

    // row q = 0: polynomial sections
    std::vector<int64_t> dim0(P + 1, 0), rank0(std::max(P, 1), 0);
    for (int p = 0; p <= P; ++p)
        for (int a : c.terms[p].twists) dim0[p] += a + t >= 0 ? u3::chi_line_poly(a + t) : 0;
    for (int p = 0; p < P; ++p) {
        exactalg::SparseMatrix m = c.maps[p].graded_piece(t);
        rank0[p] = exactalg::rank(m, exactalg::RankRequest::exact()).rank;
    }

    // row q = 3: all-negative-exponent monomials, products truncated to the
    // all-negative region
    auto neg_basis = [&](int n) {
        std::vector<psheaf::Monomial> out;
        if (n > -4) return out;
        for (auto& g : psheaf::monomials_of_degree(-4 - n)) {
            psheaf::Monomial m;
            for (int i = 0; i < 4; ++i) m.e[i] = -1 - g.e[i];
            out.push_back(m);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    std::vector<int64_t> dim3(P + 1, 0), rank3(std::max(P, 1), 0);
    std::vector<std::vector<std::vector<psheaf::Monomial>>> bases(P + 1);
    for (int p = 0; p <= P; ++p) {
        bases[p].resize(c.terms[p].rank());
        for (int g = 0; g < c.terms[p].rank(); ++g) {
            bases[p][g] = neg_basis(c.terms[p].twists[g] + t);
            dim3[p] += (int64_t)bases[p][g].size();
        }
    }
    for (int p = 0; p < P; ++p) {
        const psheaf::PolyMatrix& mp = c.maps[p];
        std::vector<int> soff(mp.source.rank() + 1, 0), toff(mp.target.rank() + 1, 0);
        for (int j = 0; j < mp.source.rank(); ++j)
            soff[j + 1] = soff[j] + (int)bases[p][j].size();
        for (int i = 0; i < mp.target.rank(); ++i)
            toff[i + 1] = toff[i] + (int)bases[p + 1][i].size();
        exactalg::SparseMatrix m(toff[mp.target.rank()], soff[mp.source.rank()]);
        for (int j = 0; j < mp.source.rank(); ++j)
            for (size_t s = 0; s < bases[p][j].size(); ++s)
                for (int i = 0; i < mp.target.rank(); ++i)
                    for (auto& [mu, coef] : mp.at(i, j).terms) {
                        psheaf::Monomial prod = bases[p][j][s] * mu;
                        bool neg = true;
                        for (int k = 0; k < 4; ++k) neg = neg && prod.e[k] <= -1;
                        if (!neg) continue; // leaves the all-negative region
                        auto& tb = bases[p + 1][i];
                        auto it = std::lower_bound(tb.begin(), tb.end(), prod);
                        if (it == tb.end() || !(*it == prod))
                            throw u3::EngineError("negative-region product missing");
                        m.add(toff[i] + (int)(it - tb.begin()), soff[j] + (int)s, coef);
                    }
        m.canonicalize();
        rank3[p] = exactalg::rank(m, exactalg::RankRequest::exact()).rank;
    }

    auto coh = [&](const std::vector<int64_t>& dim, const std::vector<int64_t>& rank, int p) {
        int64_t v = dim[p];
        if (p < P) v -= rank[p];
        if (p > 0) v -= rank[p - 1];
        return v;
    };
    std::array<int64_t, 4> h{0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) {
        if (P + i <= P) h[i] += coh(dim0, rank0, P + i); // only i = 0
        const int p3 = P + i - 3;
        if (p3 >= 0 && p3 <= P) h[i] += coh(dim3, rank3, p3);
    }
    return h;
}

const CohomologyTable::Row* CohomologyTable::find(int t) const {
    for (auto& r : rows)
        if (r.t == t) return &r;
    return nullptr;
}

SheafDims sheaf_dims(const psheaf::FreeComplex& c, const psheaf::FreeComplex* dual, int t,
                     const u3::Options& opt) {
    const bool use_dual = dual && truncation_cost(*dual, t, opt) < truncation_cost(c, t, opt);
    const psheaf::FreeComplex& run = use_dual ? *dual : c;
    HyperResult r = hypercohomology(run, t, opt);
    SheafDims out;
    out.B_used = r.B_used;
    out.primes = r.primes;
    out.rank_mode = r.rank_mode;
    out.weight_split = r.weight_split;
    out.side = use_dual ? "dual" : "direct";
    if (use_dual) {
        // left presentation: the sheaf's cohomology sits at total degrees 0..3
        for (int i = 0; i < 4; ++i) out.h[i] = r.all[i];
        for (size_t n = 4; n < r.all.size(); ++n)
            if (r.all[n] != 0)
                throw u3::EngineError("dual presentation is not exact away from the sheaf");
    } else {
        out.h = r.h;
    }
    return out;
}

CohomologyTable table(const psheaf::FreeComplex& c, const psheaf::FreeComplex* dual,
                      int tmin, int tmax, const std::string& sheaf, int m,
                      const std::function<int64_t(int)>& chi, const u3::Options& opt) {
    CohomologyTable tab;
    tab.sheaf = sheaf;
    tab.m = m;
    tab.prov.seed = opt.seed;
    tab.prov.engine = u3::kEngineVersion;
    for (int t = tmin; t <= tmax; ++t) {
        SheafDims r = sheaf_dims(c, dual, t, opt);
        for (int i = 0; i < 4; ++i)
            if (r.h[i] < 0) throw u3::EngineError("negative table entry");
        if (chi) {
            int64_t acc = r.h[0] - r.h[1] + r.h[2] - r.h[3];
            if (acc != chi(t))
                throw u3::EngineError("table row at twist " + std::to_string(t) +
                                      " fails the Hilbert polynomial certification");
        }
        tab.rows.push_back({t, r.h, r.B_used});
        if (tab.prov.primes.empty()) tab.prov.primes = r.primes;
        tab.prov.rank_mode = r.rank_mode;
    }
    return tab;
}

std::vector<exactalg::SparseMatrix> assemble_total_rational(const psheaf::FreeComplex& c,
                                                            int t, int B) {
    c.validate();
    const int P = c.last();
    const int cap = B + std::abs(t);
    PieceCache cache{B, cap, {}};
    std::vector<Level> levels;
    for (int n = 0; n <= P + 3; ++n) levels.push_back(build_level(c, t, n, false, cache));

    std::vector<exactalg::SparseMatrix> out;
    for (int n = 0; n <= P + 2; ++n) {
        const Level& src = levels[n];
        const Level& tgt = levels[n + 1];
        exactalg::SparseMatrix d((int)tgt.total, (int)src.total);
        for (const Piece& pc : src.pieces) {
            for (size_t s = 0; s < pc.keys->size(); ++s) {
                const uint64_t key = (*pc.keys)[s];
                const int col = (int)(pc.offset + s);
                for (int l = 0; l < 4; ++l) {
                    if (pc.imask & (1 << l)) continue;
                    const Piece& tp =
                        tgt.pieces[tgt.piece_index(pc.p, pc.imask | (uint8_t)(1 << l)) + pc.gen];
                    bool found = false;
                    const uint32_t pos = find_key(*tp.keys, key, &found);
                    if (!found) throw u3::EngineError("cech restriction target missing");
                    const int bits = __builtin_popcount(pc.imask & ((1u << l) - 1));
                    const int sgn = ((bits % 2) ^ (pc.p % 2)) == 0 ? 1 : -1;
                    d.add((int)(tp.offset + pos), col, sgn);
                }
                if (pc.p < P) {
                    const psheaf::PolyMatrix& mp = c.maps[pc.p];
                    const psheaf::Monomial src_mono = psheaf::Monomial::from_key(key);
                    for (int i = 0; i < mp.target.rank(); ++i)
                        for (auto& [mu, coef] : mp.at(i, pc.gen).terms) {
                            bool inside = true;
                            for (int k = 0; k < 4; ++k)
                                if (src_mono.e[k] + mu.e[k] > cap) inside = false;
                            if (!inside) continue;
                            const Piece& tp =
                                tgt.pieces[tgt.piece_index(pc.p + 1, pc.imask) + i];
                            bool found = false;
                            const uint32_t pos =
                                find_key(*tp.keys, (src_mono * mu).key(), &found);
                            if (!found)
                                throw u3::EngineError("complex differential target missing");
                            d.add((int)(tp.offset + pos), col, coef);
                        }
                }
            }
        }
        d.canonicalize();
        out.push_back(std::move(d));
    }
    return out;
}

} // namespace cech
