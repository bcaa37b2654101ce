#pragma once

#include <map>
#include <optional>

#include "mms/lattice.hpp"
#include "mms/sl2.hpp"

namespace mms {

// Sparse combination of presentation generators.
using GeneratorSum = std::map<std::size_t, Rational>;

// Mixed modular symbols of a congruence subgroup as an explicit lattice.
// Generators: ManinGen(i) = {rep_i, rep_i S} for each coset, then CuspGen(c) = {g, gT}
// with g infinity in the class c.
class SymbolSpace {
 public:
  explicit SymbolSpace(const GroupSpec& spec);

  const GroupSpec& spec() const { return spec_; }
  const CosetTable& cosets() const { return cosets_; }
  const CuspTable& cusps() const { return cusps_; }
  const GroupInvariants& invariants() const { return invariants_; }
  const LatticeQuotient& quotient() const { return quotient_; }
  const LatticeQuotient& classical() const { return classical_; }
  const MatZ& pi() const { return pi_; }
  const MatZ& boundary() const { return boundary_; }

  Index rank() const { return quotient_.basis_rank; }
  Index classical_rank() const { return classical_.basis_rank; }
  std::size_t num_generators() const { return cosets_.size() + cusps_.size(); }
  std::size_t manin_gen(std::size_t coset) const { return coset; }
  std::size_t cusp_gen(std::size_t cusp) const { return cosets_.size() + cusp; }

  // Basis coordinates of a single generator.
  VecZ generator_image(std::size_t gen) const { return quotient_.project.col(gen); }
  VecQ to_basis(const GeneratorSum& sum) const;
  VecZ to_basis_integral(const GeneratorSum& sum) const;  // throws if a coefficient is fractional

  // The generator {g, g'} in terms of presentation generators; every basis vector
  // lifts to a combination of these.
  std::pair<UnimodularMatrix, UnimodularMatrix> generator_pair(std::size_t gen) const;

 private:
  GroupSpec spec_;
  CosetTable cosets_;
  CuspTable cusps_;
  GroupInvariants invariants_;
  LatticeQuotient quotient_;
  LatticeQuotient classical_;
  MatZ pi_;
  MatZ boundary_;
};

SymbolSpace build_space(const GroupSpec& spec);

// Adds coeff * {g, h} to out.
void accumulate_pair(const SymbolSpace& space, const UnimodularMatrix& g, const UnimodularMatrix& h,
                     const Rational& coeff, GeneratorSum& out);
// Adds coeff * {a, b}_Q for rational matrices of positive determinant.
void accumulate_pair_rational(const SymbolSpace& space, const Mat2Q& a, const Mat2Q& b, const Rational& coeff,
                              GeneratorSum& out);

VecZ reduce_pair(const SymbolSpace& space, const UnimodularMatrix& g, const UnimodularMatrix& h);
VecQ reduce_pair_rational(const SymbolSpace& space, const Mat2Q& a, const Mat2Q& b);

Mat2Q to_rational(const UnimodularMatrix& g);

// Index of the span of the ManinGen images in the full lattice; empty means infinite.
std::optional<Integer> manin_index(const SymbolSpace& space);

// Cusp divisor of degree zero.
VecZ boundary(const SymbolSpace& space, const VecZ& x);
VecQ boundary(const SymbolSpace& space, const VecQ& x);
VecZ pi_classical(const SymbolSpace& space, const VecZ& x);

// Rows span the image of H1(Y) (Schreier generators of the group, unsaturated).
MatZ homology_sublattice(const SymbolSpace& space);
// Rows form a basis of ker(boundary).
MatZ boundary_kernel(const SymbolSpace& space);
// Rows are the images of the cusp generators.
MatZ cusp_sublattice(const SymbolSpace& space);

struct ExactSequenceReport {
  Index kernel_rank = 0;
  std::vector<Integer> kernel_torsion;  // torsion of ker(pi), always empty for a sublattice
  Index coker_rank = 0;                 // free rank of Z[C] / Z (1/d sum e_c [c])
  std::vector<Integer> coker_torsion;
  bool cusp_span_saturated = false;  // cusp images span ker(pi) exactly
  VecZ cusp_relation;                // integer kernel of Z[C] -> M, expected +-(e_c / d)
  bool holds = false;
};

ExactSequenceReport exact_sequence_check(const SymbolSpace& space);

// Classical symbol {x, y} for cusps in P^1(Q), in the classical basis (continued fractions).
VecZ classical_symbol(const SymbolSpace& space, const Cusp& x, const Cusp& y);
Cusp cusp_of_matrix(const UnimodularMatrix& g);  // g * infinity

}  // namespace mms
