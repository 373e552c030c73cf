#include "ulrich3/psheaf.hpp"

#include <algorithm>

namespace psheaf {

std::vector<Monomial> monomials_of_degree(int d) {
    std::vector<Monomial> out;
    if (d < 0) return out;
    for (int a = 0; a <= d; ++a)
        for (int b = 0; a + b <= d; ++b)
            for (int c = 0; a + b + c <= d; ++c) {
                Monomial m;
                m.e = {a, b, c, d - a - b - c};
                out.push_back(m);
            }
    std::sort(out.begin(), out.end());
    return out;
}

void Poly::normalize() {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Monomial, u3::Rat>> out;
    out.reserve(terms.size());
    for (auto& [m, c] : terms) {
        if (!out.empty() && out.back().first == m)
            out.back().second += c;
        else
            out.emplace_back(m, c);
    }
    terms.clear();
    for (auto& [m, c] : out) {
        if (c == 0) continue;
        if (m.degree() != degree)
            throw u3::EngineError("polynomial is not homogeneous of its stated degree");
        terms.emplace_back(m, std::move(c));
    }
}

Poly Poly::term(const Monomial& m, const u3::Rat& c) {
    Poly p;
    p.degree = m.degree();
    if (c != 0) p.terms.emplace_back(m, c);
    return p;
}

Poly Poly::operator+(const Poly& o) const {
    if (!is_zero() && !o.is_zero() && degree != o.degree)
        throw u3::EngineError("adding polynomials of different degrees");
    Poly r;
    r.degree = is_zero() ? o.degree : degree;
    r.terms = terms;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    r.normalize();
    return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + o.scaled(-1); }

Poly Poly::scaled(const u3::Rat& c) const {
    Poly r;
    r.degree = degree;
    if (c == 0) return r;
    r.terms = terms;
    for (auto& [m, v] : r.terms) v *= c;
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    r.degree = degree + o.degree;
    r.terms.reserve(terms.size() * o.terms.size());
    for (auto& [m1, c1] : terms)
        for (auto& [m2, c2] : o.terms) r.terms.emplace_back(m1 * m2, c1 * c2);
    r.normalize();
    return r;
}

u3::Rat Poly::eval(const std::array<int64_t, 4>& x) const {
    u3::Rat acc = 0;
    for (auto& [m, c] : terms) {
        u3::Rat v = c;
        for (int i = 0; i < 4; ++i) {
            if (m.e[i] < 0) throw u3::EngineError("cannot evaluate Laurent monomial");
            for (int k = 0; k < m.e[i]; ++k) v *= (long)x[i];
        }
        acc += v;
    }
    return acc;
}

Poly act_gen(const Poly& p, char gen) {
    Poly r;
    r.degree = p.degree;
    for (auto& [m, c] : p.terms) {
        if (gen == 'h') {
            if (m.weight() != 0) r.terms.emplace_back(m, c * m.weight());
            continue;
        }
        for (int i = 0; i < 4; ++i) {
            if (m.e[i] == 0) continue;
            if (gen == 'e') {
                if (i == 3) continue; // e x3 = 0
                Monomial n = m;
                n.e[i] -= 1;
                n.e[i + 1] += 1;
                r.terms.emplace_back(n, c * m.e[i] * (-(i + 1) * (3 - i)));
            } else { // 'f'
                if (i == 0) continue; // f x0 = 0
                Monomial n = m;
                n.e[i] -= 1;
                n.e[i - 1] += 1;
                r.terms.emplace_back(n, c * m.e[i] * -1);
            }
        }
    }
    r.normalize();
    return r;
}

void FreeSheaf::validate() const {
    if (!weights.empty() && weights.size() != twists.size())
        throw u3::EngineError("free sheaf weight labels do not match rank");
    if (rep && rep->dim() != (int64_t)twists.size())
        throw u3::EngineError("free sheaf rep label dimension does not match rank");
}

FreeSheaf FreeSheaf::line(int twist) {
    FreeSheaf s;
    s.twists = {twist};
    s.weights = {0};
    s.rep = sl2::RepDecomposition::irrep(0);
    return s;
}

FreeSheaf FreeSheaf::of_rep(const sl2::RepDecomposition& rep, int twist) {
    FreeSheaf s;
    s.twists.assign((size_t)rep.dim(), twist);
    s.weights = rep.basis_weights();
    s.rep = rep;
    return s;
}

FreeSheaf FreeSheaf::tensor(const FreeSheaf& o) const {
    FreeSheaf s;
    s.twists.reserve((size_t)rank() * o.rank());
    const bool w = has_weights() && o.has_weights();
    for (int i = 0; i < rank(); ++i)
        for (int j = 0; j < o.rank(); ++j) {
            s.twists.push_back(twists[i] + o.twists[j]);
            if (w) s.weights.push_back(weights[i] + o.weights[j]);
        }
    return s;
}

PolyMatrix::PolyMatrix(FreeSheaf tgt, FreeSheaf src)
    : source(std::move(src)), target(std::move(tgt)) {
    ent.resize((size_t)target.rank() * source.rank());
    for (int i = 0; i < target.rank(); ++i)
        for (int j = 0; j < source.rank(); ++j)
            at(i, j) = Poly::zero(target.twists[i] - source.twists[j]);
}

bool PolyMatrix::is_zero() const {
    for (auto& p : ent)
        if (!p.is_zero()) return false;
    return true;
}

void PolyMatrix::validate_degrees() const {
    for (int i = 0; i < target.rank(); ++i)
        for (int j = 0; j < source.rank(); ++j) {
            const Poly& p = at(i, j);
            if (p.is_zero()) continue;
            if (p.degree != target.twists[i] - source.twists[j] || p.degree < 0)
                throw u3::EngineError("matrix entry degree violates twist bookkeeping");
        }
}

bool PolyMatrix::weight_homogeneous() const {
    if (!source.has_weights() || !target.has_weights()) return false;
    for (int i = 0; i < target.rank(); ++i)
        for (int j = 0; j < source.rank(); ++j) {
            const int w = source.weights[j] - target.weights[i];
            for (auto& [m, c] : at(i, j).terms)
                if (m.weight() != w) return false;
        }
    return true;
}

void PolyMatrix::normalize_first_coeff() {
    for (auto& p : ent)
        for (auto& [m, c] : p.terms) {
            u3::Rat lead = c;
            for (auto& q : ent)
                for (auto& [mm, cc] : q.terms) cc /= lead;
            return;
        }
}

PolyMatrix PolyMatrix::compose(const PolyMatrix& inner) const {
    if (inner.target.twists != source.twists)
        throw u3::EngineError("composition shape mismatch");
    PolyMatrix r(target, inner.source);
    for (int i = 0; i < target.rank(); ++i)
        for (int j = 0; j < inner.source.rank(); ++j) {
            Poly acc = Poly::zero(target.twists[i] - inner.source.twists[j]);
            for (int k = 0; k < source.rank(); ++k) {
                const Poly& a = at(i, k);
                const Poly& b = inner.at(k, j);
                if (a.is_zero() || b.is_zero()) continue;
                acc = acc + a * b;
            }
            r.at(i, j) = std::move(acc);
        }
    return r;
}

exactalg::SparseMatrix PolyMatrix::graded_piece(int t) const {
    // column space: (j, monomial of degree t + source.twists[j])
    std::vector<std::vector<Monomial>> srcmon(source.rank()), tgtmon(target.rank());
    std::vector<int> soff(source.rank() + 1, 0), toff(target.rank() + 1, 0);
    for (int j = 0; j < source.rank(); ++j) {
        srcmon[j] = monomials_of_degree(t + source.twists[j]);
        soff[j + 1] = soff[j] + (int)srcmon[j].size();
    }
    for (int i = 0; i < target.rank(); ++i) {
        tgtmon[i] = monomials_of_degree(t + target.twists[i]);
        toff[i + 1] = toff[i] + (int)tgtmon[i].size();
    }
    exactalg::SparseMatrix m(toff[target.rank()], soff[source.rank()]);
    for (int j = 0; j < source.rank(); ++j)
        for (size_t s = 0; s < srcmon[j].size(); ++s)
            for (int i = 0; i < target.rank(); ++i) {
                const Poly& p = at(i, j);
                for (auto& [mu, c] : p.terms) {
                    Monomial prod = srcmon[j][s] * mu;
                    auto it = std::lower_bound(tgtmon[i].begin(), tgtmon[i].end(), prod);
                    if (it == tgtmon[i].end() || !(*it == prod))
                        throw u3::EngineError("graded piece target monomial missing");
                    m.add(toff[i] + (int)(it - tgtmon[i].begin()), soff[j] + (int)s, c);
                }
            }
    m.canonicalize();
    return m;
}

exactalg::SparseMatrix PolyMatrix::evaluate(const std::array<int64_t, 4>& x) const {
    exactalg::SparseMatrix m(target.rank(), source.rank());
    for (int i = 0; i < target.rank(); ++i)
        for (int j = 0; j < source.rank(); ++j) {
            u3::Rat v = at(i, j).eval(x);
            if (v != 0) m.add(i, j, v);
        }
    m.canonicalize();
    return m;
}

int FreeComplex::max_entry_degree() const {
    int d = 0;
    for (auto& m : maps)
        for (auto& p : m.ent)
            if (!p.is_zero()) d = std::max(d, p.degree);
    return d;
}

void FreeComplex::validate() const {
    if (terms.empty()) throw u3::EngineError("empty complex");
    if (maps.size() + 1 != terms.size())
        throw u3::EngineError("complex needs one map per adjacent pair");
    for (auto& t : terms) t.validate();
    for (size_t p = 0; p < maps.size(); ++p) {
        if (maps[p].source.twists != terms[p].twists ||
            maps[p].target.twists != terms[p + 1].twists)
            throw u3::EngineError("complex map endpoints disagree with terms");
        maps[p].validate_degrees();
    }
}

bool FreeComplex::weight_consistent() const {
    for (auto& t : terms)
        if (!t.has_weights()) return false;
    for (auto& m : maps)
        if (!m.weight_homogeneous()) return false;
    return true;
}

ComplexCheck verify_complex(const FreeComplex& c) {
    for (size_t p = 0; p + 1 < c.maps.size(); ++p) {
        if (!c.maps[p + 1].compose(c.maps[p]).is_zero()) return {false, (int)p};
    }
    return {true, -1};
}

int64_t line_cohomology(int i, int t) {
    if (i < 0 || i > 3) throw u3::EngineError("line_cohomology degree out of range");
    if (i == 0) return t >= 0 ? u3::chi_line_poly(t) : 0;
    if (i == 3) return t <= -4 ? -u3::chi_line_poly(t) : 0;
    return 0;
}

int64_t euler_characteristic(const FreeComplex& c, int t) {
    int64_t acc = 0;
    for (size_t p = 0; p < c.terms.size(); ++p) {
        int64_t s = 0;
        for (int a : c.terms[p].twists) s += u3::chi_line_poly(a + t);
        acc += (p % 2 == 0) ? s : -s;
    }
    return acc;
}

FreeComplex dual_complex(const FreeComplex& c) {
    c.validate();
    auto dual_sheaf = [](const FreeSheaf& s) {
        FreeSheaf d;
        d.twists.reserve(s.twists.size());
        for (int a : s.twists) d.twists.push_back(-a);
        for (int w : s.weights) d.weights.push_back(-w);
        d.rep = s.rep; // V_p is isomorphic to its dual
        return d;
    };
    const int P = c.last();
    FreeComplex r;
    for (int p = P; p >= 0; --p) r.terms.push_back(dual_sheaf(c.terms[p]));
    for (int p = 0; p < P; ++p) {
        const PolyMatrix& m = c.maps[P - 1 - p];
        PolyMatrix d(r.terms[p + 1], r.terms[p]);
        for (int i = 0; i < d.target.rank(); ++i)
            for (int j = 0; j < d.source.rank(); ++j) d.at(i, j) = m.at(j, i);
        d.validate_degrees();
        r.maps.push_back(std::move(d));
    }
    r.validate();
    return r;
}

FreeComplex tensor_complexes(const FreeComplex& a, const FreeComplex& b) {
    a.validate();
    b.validate();
    const int PA = a.last(), PB = b.last();
    FreeComplex r;

    // term at position p: direct sum over pa of A_pa (x) B_{p-pa}, pa ascending
    struct Block {
        int pa, pb, offset;
    };
    std::vector<std::vector<Block>> blocks(PA + PB + 1);
    for (int p = 0; p <= PA + PB; ++p) {
        FreeSheaf term;
        term.weights.clear();
        bool weighted = true;
        for (int pa = std::max(0, p - PB); pa <= std::min(PA, p); ++pa) {
            const int pb = p - pa;
            blocks[p].push_back({pa, pb, (int)term.twists.size()});
            FreeSheaf tb = a.terms[pa].tensor(b.terms[pb]);
            weighted = weighted && tb.has_weights();
            term.twists.insert(term.twists.end(), tb.twists.begin(), tb.twists.end());
            term.weights.insert(term.weights.end(), tb.weights.begin(), tb.weights.end());
        }
        if (!weighted) term.weights.clear();
        r.terms.push_back(std::move(term));
    }

    for (int p = 0; p < PA + PB; ++p) {
        PolyMatrix d(r.terms[p + 1], r.terms[p]);
        for (const Block& src : blocks[p]) {
            const int ra = a.terms[src.pa].rank();
            const int rb = b.terms[src.pb].rank();
            // dA (x) id : (pa,pb) -> (pa+1,pb)
            if (src.pa + 1 <= PA) {
                for (const Block& tgt : blocks[p + 1]) {
                    if (tgt.pa != src.pa + 1 || tgt.pb != src.pb) continue;
                    const PolyMatrix& da = a.maps[src.pa];
                    for (int ia = 0; ia < da.target.rank(); ++ia)
                        for (int ja = 0; ja < ra; ++ja) {
                            const Poly& q = da.at(ia, ja);
                            if (q.is_zero()) continue;
                            for (int jb = 0; jb < rb; ++jb)
                                d.at(tgt.offset + ia * rb + jb, src.offset + ja * rb + jb) =
                                    d.at(tgt.offset + ia * rb + jb,
                                         src.offset + ja * rb + jb) + q;
                        }
                }
            }
            // (-1)^pa id (x) dB : (pa,pb) -> (pa,pb+1)
            if (src.pb + 1 <= PB) {
                const u3::Rat sign = (src.pa % 2 == 0) ? 1 : -1;
                for (const Block& tgt : blocks[p + 1]) {
                    if (tgt.pa != src.pa || tgt.pb != src.pb + 1) continue;
                    const PolyMatrix& db = b.maps[src.pb];
                    const int rb2 = db.target.rank();
                    for (int ib = 0; ib < rb2; ++ib)
                        for (int jb = 0; jb < rb; ++jb) {
                            const Poly& q = db.at(ib, jb);
                            if (q.is_zero()) continue;
                            Poly sq = q.scaled(sign);
                            for (int ja = 0; ja < ra; ++ja)
                                d.at(tgt.offset + ja * rb2 + ib, src.offset + ja * rb + jb) =
                                    d.at(tgt.offset + ja * rb2 + ib,
                                         src.offset + ja * rb + jb) + sq;
                        }
                }
            }
        }
        r.maps.push_back(std::move(d));
    }

    r.validate();
    ComplexCheck chk = verify_complex(r);
    if (!chk.ok)
        throw u3::EngineError("tensor complex differential fails d.d = 0 at position " +
                              std::to_string(chk.position));
    return r;
}

} // namespace psheaf
