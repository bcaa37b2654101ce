#pragma once

#include <string>
#include <vector>

#include "mms/space.hpp"

namespace mms {

// Exact operator on the basis of a SymbolSpace; columns are images of basis vectors.
struct OperatorMatrix {
  std::string name;
  MatQ mat;
  Integer denominator = 1;  // lcm of entry denominators
};

OperatorMatrix make_operator(std::string name, MatQ mat);

// T_q for q prime to N, U_q for q | N.  For q prime to 2N the integral formula with the
// symmetric representatives is used; otherwise the rational double coset.
OperatorMatrix hecke_operator(const SymbolSpace& space, long q);
// Double coset evaluated through rational symbols for any prime q.
OperatorMatrix hecke_operator_rational(const SymbolSpace& space, long q);
// Integral formula; requires q prime to 2N.
OperatorMatrix hecke_operator_integral(const SymbolSpace& space, long q);

// T_n from prime operators: T_mn = T_m T_n for coprime m, n and
// T_{q^{k+1}} = T_q T_{q^k} - q <q> T_{q^{k-1}} (the last term absent when q | N).
OperatorMatrix hecke_composite(const SymbolSpace& space, long n);

OperatorMatrix diamond(const SymbolSpace& space, long d);
OperatorMatrix atkin_lehner(const SymbolSpace& space);
OperatorMatrix complex_conjugation(const SymbolSpace& space);

// Same double coset on the classical basis, through continued fractions.
MatQ classical_hecke(const SymbolSpace& space, long q);

// ((m, n), (N, d')) with d' = d mod N; left multiplication realises <d>.
UnimodularMatrix diamond_matrix(long level, long d);

bool is_prime(long q);

struct HeckeLawReport {
  std::vector<OperatorMatrix> operators;  // T_q / U_q in the order given, then conj
  bool integral = true;                   // denominator 1 for q prime to 2N
  bool denominators_bounded = true;       // denominator | q otherwise
  bool routes_agree = true;               // integral and rational formulas coincide
  bool commute = true;
  bool pi_equivariant = true;
  bool conj_commutes = true;
  bool preserves_sublattices = true;  // ker(boundary) and H1(Y)
  bool eisenstein = true;             // T_q = q + 1 on ker(pi); checked for Gamma0(p) only
  bool eisenstein_checked = false;
  std::vector<std::string> failures;
  bool holds() const {
    return integral && denominators_bounded && routes_agree && commute && pi_equivariant && conj_commutes &&
           preserves_sublattices && eisenstein;
  }
};

HeckeLawReport verify_hecke_laws(const SymbolSpace& space, const std::vector<long>& primes);

}  // namespace mms
