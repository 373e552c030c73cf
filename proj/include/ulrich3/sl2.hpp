#ifndef ULRICH3_SL2_HPP
#define ULRICH3_SL2_HPP

#include <string>
#include <vector>

#include "ulrich3/sparse.hpp"

namespace sl2 {

// Irreducible representation V_p of highest weight p >= 0, dimension p+1.
struct Irrep {
    int weight = 0;
    int dim() const { return weight + 1; }
};

// Ordered list of irreducible summands. The order fixes the block layout of
// the concatenated weight basis, so it is part of the value.
struct RepDecomposition {
    std::vector<int> weights;

    int64_t dim() const {
        int64_t d = 0;
        for (int w : weights) d += w + 1;
        return d;
    }
    int multiplicity(int w) const {
        int n = 0;
        for (int x : weights) n += (x == w);
        return n;
    }
    // h-weight of each basis vector, summand by summand (v_0..v_p has
    // weights p, p-2, ..., -p)
    std::vector<int> basis_weights() const {
        std::vector<int> out;
        out.reserve((size_t)dim());
        for (int p : weights)
            for (int i = 0; i <= p; ++i) out.push_back(p - 2 * i);
        return out;
    }
    bool operator==(const RepDecomposition& o) const { return weights == o.weights; }
    std::string to_string() const;

    static RepDecomposition irrep(int p) { return {{p}}; }
};

// V_a (x) V_b = V_{a+b} + V_{a+b-2} + ... + V_{|a-b|}
RepDecomposition clebsch_gordan(int a, int b);

// Sym^k V_p, by weight-multiplicity counting over monomial multisets.
RepDecomposition sym_power_decomposition(int p, int k);

// Standard basis operators on the weight basis v_0..v_p:
//   h v_i = (p-2i) v_i,   f v_i = v_{i+1},   e v_i = i(p+1-i) v_{i-1}.
struct GeneratorAction {
    int weight = 0;
    exactalg::SparseMatrix e, f, h;
};

GeneratorAction generator_action(int p);

// Block-diagonal action of one generator ('e', 'f' or 'h') on a decomposition.
exactalg::SparseMatrix rep_action(const RepDecomposition& rep, char gen);

} // namespace sl2

#endif
