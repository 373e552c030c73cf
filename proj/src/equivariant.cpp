#include "ulrich3/equivariant.hpp"

#include <algorithm>

#include "ulrich3/elimination.hpp"

namespace sl2 {

namespace {

std::vector<std::vector<u3::Rat>> dense_action(const RepDecomposition& rep, char gen) {
    const int n = (int)rep.dim();
    std::vector<std::vector<u3::Rat>> d(n, std::vector<u3::Rat>(n, u3::Rat(0)));
    exactalg::SparseMatrix m = rep_action(rep, gen);
    for (auto& e : m.entries) d[e.row][e.col] = e.v;
    return d;
}

} // namespace

exactalg::SparseMatrix equivariant_constraints(const RepDecomposition& source,
                                               const RepDecomposition& target, int degree) {
    if (degree < 0) throw u3::EngineError("entry degree must be >= 0");
    const int S = (int)source.dim();
    const int T = (int)target.dim();
    const auto mons = psheaf::monomials_of_degree(degree);
    const int M = (int)mons.size();
    auto midx = [&](const psheaf::Monomial& m) {
        auto it = std::lower_bound(mons.begin(), mons.end(), m);
        if (it == mons.end() || !(*it == m))
            throw u3::EngineError("derivation left the monomial basis");
        return (int)(it - mons.begin());
    };

    const char gens[3] = {'e', 'f', 'h'};
    exactalg::SparseMatrix sys(3 * T * S * M, T * S * M);
    auto row_of = [&](int g, int i, int j, int nu) {
        return ((g * T + i) * S + j) * M + nu;
    };
    auto col_of = [&](int i, int j, int mu) { return (i * S + j) * M + mu; };

    for (int g = 0; g < 3; ++g) {
        auto rs = dense_action(source, gens[g]);
        auto rt = dense_action(target, gens[g]);
        for (int i = 0; i < T; ++i)
            for (int j = 0; j < S; ++j)
                for (int mu = 0; mu < M; ++mu) {
                    const int col = col_of(i, j, mu);
                    // (A . rho_src)_{i,j'} picks up A_{ij} * rho_src[j][j']
                    for (int jp = 0; jp < S; ++jp)
                        if (rs[j][jp] != 0) sys.add(row_of(g, i, jp, mu), col, rs[j][jp]);
                    // (rho_tgt . A)_{i',j} picks up rho_tgt[i'][i] * A_{ij}
                    for (int ip = 0; ip < T; ++ip)
                        if (rt[ip][i] != 0) sys.add(row_of(g, ip, j, mu), col, -rt[ip][i]);
                    // derivation action on the entry
                    psheaf::Poly dm = psheaf::act_gen(psheaf::Poly::term(mons[mu], 1), gens[g]);
                    for (auto& [nu, cc] : dm.terms)
                        sys.add(row_of(g, i, j, midx(nu)), col, -cc);
                }
    }
    sys.canonicalize();
    return sys;
}

psheaf::PolyMatrix coefficients_to_matrix(const std::vector<u3::Rat>& v,
                                          const RepDecomposition& source,
                                          const RepDecomposition& target, int degree,
                                          int source_twist) {
    const int S = (int)source.dim();
    const int T = (int)target.dim();
    const auto mons = psheaf::monomials_of_degree(degree);
    const int M = (int)mons.size();
    if ((int)v.size() != T * S * M)
        throw u3::EngineError("coefficient vector has the wrong length");
    psheaf::FreeSheaf src = psheaf::FreeSheaf::of_rep(source, source_twist);
    psheaf::FreeSheaf tgt = psheaf::FreeSheaf::of_rep(target, source_twist + degree);
    psheaf::PolyMatrix a(tgt, src);
    for (int i = 0; i < T; ++i)
        for (int j = 0; j < S; ++j) {
            psheaf::Poly p = psheaf::Poly::zero(degree);
            for (int mu = 0; mu < M; ++mu) {
                const u3::Rat& c = v[(size_t)(i * S + j) * M + mu];
                if (c != 0) p.terms.emplace_back(mons[mu], c);
            }
            p.normalize();
            a.at(i, j) = std::move(p);
        }
    a.validate_degrees();
    return a;
}

std::vector<psheaf::PolyMatrix> equivariant_maps(const RepDecomposition& source,
                                                 const RepDecomposition& target, int degree,
                                                 int source_twist) {
    exactalg::SparseMatrix sys = equivariant_constraints(source, target, degree);
    auto kernel = exactalg::kernel_basis(sys);
    std::vector<psheaf::PolyMatrix> out;
    out.reserve(kernel.size());
    for (auto& v : kernel)
        out.push_back(coefficients_to_matrix(v, source, target, degree, source_twist));
    return out; // kernel vectors are already gauge-normalized
}

psheaf::PolyMatrix equivariance_residual(const psheaf::PolyMatrix& a,
                                         const RepDecomposition& source,
                                         const RepDecomposition& target, char gen) {
    const int S = (int)source.dim();
    const int T = (int)target.dim();
    if (a.source.rank() != S || a.target.rank() != T)
        throw u3::EngineError("matrix shape does not match the decompositions");
    auto rs = dense_action(source, gen);
    auto rt = dense_action(target, gen);
    psheaf::PolyMatrix r(a.target, a.source);
    for (int i = 0; i < T; ++i)
        for (int j = 0; j < S; ++j) {
            psheaf::Poly acc = psheaf::Poly::zero(a.at(i, j).degree);
            for (int k = 0; k < S; ++k)
                if (rs[k][j] != 0) acc = acc + a.at(i, k).scaled(rs[k][j]);
            for (int k = 0; k < T; ++k)
                if (rt[i][k] != 0) acc = acc - a.at(k, j).scaled(rt[i][k]);
            acc = acc - psheaf::act_gen(a.at(i, j), gen);
            r.at(i, j) = std::move(acc);
        }
    return r;
}

} // namespace sl2
