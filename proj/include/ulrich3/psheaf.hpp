#ifndef ULRICH3_PSHEAF_HPP
#define ULRICH3_PSHEAF_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "ulrich3/sl2.hpp"
#include "ulrich3/sparse.hpp"

namespace psheaf {

// Coordinates x0..x3 of P^3 are the weight basis of V_3^*, with h-weights
// -3, -1, 1, 3. This convention is fixed project-wide.
inline constexpr std::array<int, 4> kCoordWeight = {-3, -1, 1, 3};

struct Monomial {
    std::array<int, 4> e{0, 0, 0, 0};

    int degree() const { return e[0] + e[1] + e[2] + e[3]; }
    int weight() const {
        return kCoordWeight[0] * e[0] + kCoordWeight[1] * e[1] +
               kCoordWeight[2] * e[2] + kCoordWeight[3] * e[3];
    }
    // packed key; key order == lex order on (e0,e1,e2,e3)
    uint64_t key() const {
        constexpr int64_t B = 4096;
        return ((uint64_t)(e[0] + B) << 48) | ((uint64_t)(e[1] + B) << 32) |
               ((uint64_t)(e[2] + B) << 16) | (uint64_t)(e[3] + B);
    }
    static Monomial from_key(uint64_t k) {
        constexpr int B = 4096;
        Monomial m;
        m.e[0] = (int)((k >> 48) & 0xffff) - B;
        m.e[1] = (int)((k >> 32) & 0xffff) - B;
        m.e[2] = (int)((k >> 16) & 0xffff) - B;
        m.e[3] = (int)(k & 0xffff) - B;
        return m;
    }
    Monomial operator*(const Monomial& o) const {
        Monomial m;
        for (int i = 0; i < 4; ++i) m.e[i] = e[i] + o.e[i];
        return m;
    }
    bool operator==(const Monomial& o) const { return e == o.e; }
    bool operator<(const Monomial& o) const { return key() < o.key(); }
};

// all monomials of total degree d with nonnegative exponents, in key order
std::vector<Monomial> monomials_of_degree(int d);

// Homogeneous polynomial: sorted term list plus the stated degree (needed to
// keep a degree for the zero polynomial).
struct Poly {
    int degree = 0;
    std::vector<std::pair<Monomial, u3::Rat>> terms; // sorted by key, no zeros

    bool is_zero() const { return terms.empty(); }
    void normalize();

    static Poly zero(int deg) {
        Poly p;
        p.degree = deg;
        return p;
    }
    static Poly term(const Monomial& m, const u3::Rat& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(const u3::Rat& c) const;
    bool operator==(const Poly& o) const { return degree == o.degree && terms == o.terms; }

    // numeric evaluation at an integer point
    u3::Rat eval(const std::array<int64_t, 4>& x) const;
};

// derivation actions of the sl2 generators on polynomials, induced by
// e x_i = -(i+1)(3-i) x_{i+1},  f x_i = -x_{i-1},  h x_i = weight(x_i) x_i
Poly act_gen(const Poly& p, char gen);

// Direct sum of line bundles O(a_1) + ... + O(a_s), optionally decorated
// with per-generator h-weights and a representation label.
struct FreeSheaf {
    std::vector<int> twists;
    std::vector<int> weights; // empty, or one h-weight per generator
    std::optional<sl2::RepDecomposition> rep;

    int rank() const { return (int)twists.size(); }
    bool has_weights() const { return !twists.empty() && weights.size() == twists.size(); }
    void validate() const;

    static FreeSheaf line(int twist);
    static FreeSheaf of_rep(const sl2::RepDecomposition& rep, int twist);
    FreeSheaf tensor(const FreeSheaf& o) const; // generator order: this-major
};

// Matrix of homogeneous polynomials mapping `source` to `target`; the entry
// in row i, column j is zero or homogeneous of degree
// target.twists[i] - source.twists[j].
struct PolyMatrix {
    FreeSheaf source, target;
    std::vector<Poly> ent; // row-major, target.rank() x source.rank()

    PolyMatrix() = default;
    PolyMatrix(FreeSheaf tgt, FreeSheaf src);

    Poly& at(int i, int j) { return ent[(size_t)i * source.rank() + j]; }
    const Poly& at(int i, int j) const { return ent[(size_t)i * source.rank() + j]; }

    bool is_zero() const;
    void validate_degrees() const;
    // every nonzero entry monomial satisfies wt = w_src(j) - w_tgt(i)
    bool weight_homogeneous() const;
    // gauge fix: divide by the first nonzero coefficient in row-major entry
    // order (terms in key order inside each entry)
    void normalize_first_coeff();

    PolyMatrix compose(const PolyMatrix& inner) const; // *this after inner

    // multiplication map on degree-t graded pieces, rows/cols indexed by
    // (generator, monomial in key order)
    exactalg::SparseMatrix graded_piece(int t) const;
    // numeric evaluation at a point of P^3
    exactalg::SparseMatrix evaluate(const std::array<int64_t, 4>& x) const;
};

// Bounded complex of free sheaves at positions 0..terms.size()-1.
struct FreeComplex {
    std::vector<FreeSheaf> terms;
    std::vector<PolyMatrix> maps; // maps[p] : terms[p] -> terms[p+1]

    int length() const { return (int)terms.size(); }
    int last() const { return (int)terms.size() - 1; }
    int max_entry_degree() const;
    void validate() const;
    // all terms weight-labeled and all maps weight-homogeneous
    bool weight_consistent() const;
};

struct ComplexCheck {
    bool ok = true;
    int position = -1; // first position p with maps[p+1] . maps[p] != 0
};
ComplexCheck verify_complex(const FreeComplex& c);

// dimension of H^i(O(t)) on P^3 (Bott: only i = 0 and i = 3 can be nonzero)
int64_t line_cohomology(int i, int t);

// sum_p (-1)^p sum_j chi(O(a_j + t)) with chi the cubic polynomial in the
// twist; the cross-check oracle for every hypercohomology run
int64_t euler_characteristic(const FreeComplex& c, int t);

// total complex of the double complex A (x) B, Koszul sign (-1)^{p_A} on the
// second differential
FreeComplex tensor_complexes(const FreeComplex& a, const FreeComplex& b);

// dual complex: positions reversed, twists and weights negated, maps
// transposed. When c is exact except at its right end (where it presents a
// locally free sheaf S), the dual presents S^dual from the left.
FreeComplex dual_complex(const FreeComplex& c);

} // namespace psheaf

#endif
