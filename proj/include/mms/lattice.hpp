#pragma once

#include <optional>
#include <vector>

#include "mms/numeric.hpp"

namespace mms {

// H = U * A, U unimodular, H in reduced row echelon (Hermite) form.
struct HermiteForm {
  MatZ H;
  MatZ U;
};

// A = U * D * V with U, V unimodular and d_1 | d_2 | ... on the diagonal of D.
struct SmithForm {
  MatZ U;
  MatZ D;
  MatZ V;
};

// Z^n / (row span of relations), torsion removed.
struct LatticeQuotient {
  Index ambient_rank = 0;
  MatZ relations;  // rows are relations
  Index basis_rank = 0;
  MatZ project;  // basis_rank x ambient_rank
  MatZ lift;     // ambient_rank x basis_rank, project * lift = Id
  std::vector<Integer> torsion;
};

// Product that skips zero entries of the left factor; the presentations are sparse.
MatZ multiply(const MatZ& a, const MatZ& b);

HermiteForm hnf(const MatZ& a);
// Nonzero rows of the Hermite form, without the transform.
MatZ hnf_basis(const MatZ& a);

SmithForm snf(const MatZ& a);
std::vector<Integer> elementary_divisors(const MatZ& a);
Index rank(const MatZ& a);
Index rank(const MatQ& a);

// Columns form a Z-basis of { x in Z^n : a x = 0 }.
MatZ integer_kernel(const MatZ& a);

LatticeQuotient torsion_free_quotient(const MatZ& relations, Index ambient_rank);

// Index of span(rows of b) in span(rows of a); empty when the ranks differ.
// Throws ContainmentError if some row of b is not an integral combination of rows of a.
std::optional<Integer> sublattice_index(const MatZ& a, const MatZ& b);

// Coefficients x with x^T * basis = v for a basis in Hermite form; empty if v is outside the lattice.
std::optional<VecZ> coordinates_in(const MatZ& hermite_basis, const VecZ& v);

// Pivot variables solved, free variables set to zero; empty if inconsistent.
std::optional<VecQ> solve_rational(const MatQ& a, const VecQ& b);

Rational determinant(const MatQ& a);
Integer determinant(const MatZ& a);

// Basis (columns) of the rational null space, each column scaled to a primitive integer vector.
MatZ rational_kernel(const MatQ& a);

// Coefficients c_0..c_n of det(x I - a), lowest degree first.
std::vector<Rational> charpoly(const MatQ& a);

// Matrix of a restricted to the invariant column span of basis: a * basis = basis * X.
// Throws InvalidInput when the span is not invariant.
MatQ restrict_to(const MatQ& a, const MatQ& basis);

}  // namespace mms
