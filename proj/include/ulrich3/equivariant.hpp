#ifndef ULRICH3_EQUIVARIANT_HPP
#define ULRICH3_EQUIVARIANT_HPP

#include "ulrich3/psheaf.hpp"
#include "ulrich3/sl2.hpp"

namespace sl2 {

// Linear system expressing that a matrix with degree-`degree` polynomial
// entries intertwines the actions of e, f and h on source and target.
// Unknown order: (target row i, source column j, monomial in key order),
// row-major, matching the normalization gauge.
exactalg::SparseMatrix equivariant_constraints(const RepDecomposition& source,
                                               const RepDecomposition& target, int degree);

// Reassemble a coefficient vector of the system above into a PolyMatrix
// mapping source (x) O(source_twist) -> target (x) O(source_twist + degree).
psheaf::PolyMatrix coefficients_to_matrix(const std::vector<u3::Rat>& v,
                                          const RepDecomposition& source,
                                          const RepDecomposition& target, int degree,
                                          int source_twist);

// Basis of the space of equivariant matrices with homogeneous entries of the
// given degree, each normalized so its first nonzero coefficient is 1.
// An empty list is a valid result.
std::vector<psheaf::PolyMatrix> equivariant_maps(const RepDecomposition& source,
                                                 const RepDecomposition& target, int degree,
                                                 int source_twist = 0);

// A (x) rho_src(gen) - rho_tgt(gen) (x) A - D_gen(A); zero iff A intertwines.
psheaf::PolyMatrix equivariance_residual(const psheaf::PolyMatrix& a,
                                         const RepDecomposition& source,
                                         const RepDecomposition& target, char gen);

} // namespace sl2

#endif
