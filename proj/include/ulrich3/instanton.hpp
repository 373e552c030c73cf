#ifndef ULRICH3_INSTANTON_HPP
#define ULRICH3_INSTANTON_HPP

#include <string>
#include <vector>

#include "ulrich3/cech.hpp"
#include "ulrich3/equivariant.hpp"

namespace instanton {

// charge of the m-th equivariant instanton: C(m+1, 2)
inline int64_t charge(int m) { return (int64_t)m * (m + 1) / 2; }

// The sheafified minimal equivariant resolution
//   0 -> O(-2m-1) --kappa--> V_{3m} (x) O(-m-1) --psi--> V_{3m+1} (x) O(-m) -> E_m -> 0
// kappa has degree-m entries, psi linear entries, psi . kappa = 0, and psi
// has rank 3m at every point.
struct EquivariantResolution {
    int m = 0;
    int64_t k = 0; // charge
    psheaf::PolyMatrix kappa;
    psheaf::PolyMatrix psi;

    // the three free terms as a complex at positions 0,1,2 (E_m is its
    // rightmost cohomology)
    psheaf::FreeComplex complex() const;
};

// Solve for psi (unique equivariant linear map) and kappa (unique degree-m
// equivariant solution of psi . kappa = 0), then verify every invariant:
// uniqueness of both solution spaces, equivariance residuals, composition,
// constant rank 3m at 20 seeded sample points.
EquivariantResolution build_resolution(int m, const u3::Options& opt);

struct Certificate {
    std::string check;
    int m = 0;
    bool pass = false;
    std::vector<std::string> details;
};

// Graded-piece exactness (rank kappa_t + rank psi_t = middle dimension,
// kappa_t injective, for 0 <= t <= degree_bound) plus the Hilbert identity
// chi(complex(t)) = 2 C(t+3,3) - k (t+2) for -3 <= t <= degree_bound.
Certificate verify_exactness(const EquivariantResolution& r, int degree_bound,
                             const u3::Options& opt);

// H*(E_m(-2)) = 0, h^1(E_m(-1)) = k, and the chi certification of the table
// over [-4, 1].
Certificate instanton_axioms(int m, const u3::Options& opt);

enum class Sheaf { O, E, EE, S2E };
std::string sheaf_name(Sheaf s);
int64_t sheaf_chi(Sheaf s, int m, int t);

// cohomology table of the named sheaf over [tmin, tmax]; for S2E the trivial
// summand of E_m (x) E_m is subtracted entrywise (never below zero).
cech::CohomologyTable sheaf_table(Sheaf s, int m, int tmin, int tmax, const u3::Options& opt);

// same, reusing an already-built resolution/tensor complex
cech::CohomologyTable sheaf_table(Sheaf s, const EquivariantResolution& r,
                                  const psheaf::FreeComplex* tensor, int tmin, int tmax,
                                  const u3::Options& opt);

// H*(F_m(d-2)) = 0 for d = 2m+1, plus the cross-check that all of
// H^0(E_m (x) E_m (d-2)) comes from the trivial summand.
Certificate verify_coh0(int m, const u3::Options& opt);

// the four dimensions h^i(F_m(-2)); Euler characteristic must vanish; the
// vanishing itself is a recorded finding, not an axiom
struct LePotierReport {
    int m = 0;
    std::array<int64_t, 4> h{0, 0, 0, 0};
    bool vanishes = false; // finding: the twist -2 Ulrich condition holds
};
LePotierReport verify_lepotier(int m, const u3::Options& opt);

// h^0(S^2 E_m) = 0, h^1 = 8k - 3, h^2 = 0
Certificate moduli_dimension_check(int m, const u3::Options& opt);

} // namespace instanton

#endif
