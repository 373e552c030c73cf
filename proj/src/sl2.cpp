#include "ulrich3/sl2.hpp"

#include <algorithm>
#include <cstdlib>

namespace sl2 {

std::string RepDecomposition::to_string() const {
    if (weights.empty()) return "0";
    std::string s;
    for (size_t i = 0; i < weights.size(); ++i) {
        if (i) s += " + ";
        s += "V" + std::to_string(weights[i]);
    }
    return s;
}

RepDecomposition clebsch_gordan(int a, int b) {
    if (a < 0 || b < 0) throw u3::EngineError("clebsch_gordan needs nonnegative weights");
    RepDecomposition out;
    for (int w = a + b; w >= std::abs(a - b); w -= 2) out.weights.push_back(w);
    return out;
}

RepDecomposition sym_power_decomposition(int p, int k) {
    if (p < 0 || k < 0) throw u3::EngineError("sym_power_decomposition needs p,k >= 0");
    // Monomial basis of Sym^k V_p = multisets of size k over the weight basis
    // of V_p. Count them by weight: dp[j][w+p*k] = number of multisets of
    // size j and total weight w using the basis weights seen so far.
    const int span = 2 * p * k + 1;
    const int off = p * k;
    std::vector<std::vector<int64_t>> dp(k + 1, std::vector<int64_t>(span, 0));
    dp[0][off] = 1;
    for (int i = 0; i <= p; ++i) {
        const int wi = p - 2 * i;
        std::vector<std::vector<int64_t>> next(k + 1, std::vector<int64_t>(span, 0));
        for (int j = 0; j <= k; ++j)
            for (int w = 0; w < span; ++w) {
                if (!dp[j][w]) continue;
                for (int c = 0; j + c <= k; ++c) {
                    const int ww = w + c * wi;
                    if (ww < 0 || ww >= span) continue;
                    next[j + c][ww] += dp[j][w];
                }
            }
        dp.swap(next);
    }
    // peel highest weights greedily: mult(V_w) = count(w) - count(w+2)
    RepDecomposition out;
    for (int w = p * k; w >= 0; --w) {
        const int64_t cw = dp[k][w + off];
        const int64_t cw2 = (w + 2 <= p * k) ? dp[k][w + 2 + off] : 0;
        const int64_t mult = cw - cw2;
        if (mult < 0) throw u3::EngineError("sym power weight counting went negative");
        for (int64_t m = 0; m < mult; ++m) out.weights.push_back(w);
    }
    int64_t total = 0;
    for (int w = 0; w < span; ++w) total += dp[k][w];
    if (out.dim() != total) throw u3::EngineError("sym power dimension mismatch");
    return out;
}

GeneratorAction generator_action(int p) {
    if (p < 0) throw u3::EngineError("generator_action needs p >= 0");
    GeneratorAction g;
    g.weight = p;
    const int n = p + 1;
    g.e = exactalg::SparseMatrix(n, n);
    g.f = exactalg::SparseMatrix(n, n);
    g.h = exactalg::SparseMatrix(n, n);
    for (int i = 0; i <= p; ++i) {
        if (i > 0) g.e.add(i - 1, i, (long)i * (p + 1 - i));
        if (i < p) g.f.add(i + 1, i, 1);
        if (p - 2 * i != 0) g.h.add(i, i, p - 2 * i);
    }
    g.e.canonicalize();
    g.f.canonicalize();
    g.h.canonicalize();
    return g;
}

exactalg::SparseMatrix rep_action(const RepDecomposition& rep, char gen) {
    const int n = (int)rep.dim();
    exactalg::SparseMatrix m(n, n);
    int off = 0;
    for (int p : rep.weights) {
        GeneratorAction g = generator_action(p);
        const exactalg::SparseMatrix* blk = gen == 'e' ? &g.e : gen == 'f' ? &g.f : &g.h;
        for (auto& e : blk->entries) m.add(off + e.row, off + e.col, e.v);
        off += p + 1;
    }
    m.canonicalize();
    return m;
}

} // namespace sl2
