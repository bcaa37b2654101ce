#pragma once

#include <vector>

#include "mms/hecke.hpp"

namespace mms {

// <phi_1, phi_2> on Hom(M, Z), indexed by the dual of the SymbolSpace basis.
struct PairingMatrix {
  MatQ mat;
  MatZ six_times;         // 6 * mat
  long multiplicity = 1;  // each table coset stands for this many cosets of Gamma in SL2(Z)
};

// 2 when -1 is not in Gamma: the coset table is taken modulo +-1.
long coset_multiplicity(const GroupSpec& spec);

PairingMatrix pairing_matrix(const SymbolSpace& space);

struct PerfectnessReport {
  bool integral = false;                   // mat has integer entries
  std::vector<Integer> elementary_divisors;  // of six_times
  Integer inverted = 1;                    // 2 * lcm of the cusp widths
  bool perfect = false;                    // invertible over Z[1/inverted]
  bool cusps_real = false;                 // every cusp fixed by conjugation
  Rational det;
  Integer expected_det;  // (1/d) prod e_c
  bool det_matches = false;
  // det of an antisymmetric matrix is a square; the Pfaffian is its signed root.
  Rational pfaffian;
  bool pfaffian_matches = false;
  std::vector<Rational> pairing_divisors;  // elementary divisors of mat itself
};

PerfectnessReport perfectness_report(const SymbolSpace& space, const PairingMatrix& p);
PerfectnessReport perfectness_report(const SymbolSpace& space);

// Dual operator matrices: op.mat transposed.  Checks M* ^T P = P (W* M* W*^-1).
// Throws Unsupported unless the level is a prime power and q is prime to 2N.
bool adjointness_check(const SymbolSpace& space, long q);
bool adjointness_check(const PairingMatrix& p, const OperatorMatrix& op, const OperatorMatrix& w);

// psi(G(phi)) = <phi, psi> for every psi, i.e. G(phi) = P^T phi.
VecQ G_map(const PairingMatrix& p, const VecQ& phi);

// Coefficients indexed by the coset table.
struct LambdaCycle {
  VecQ coords;
};

// Dual vectors vanishing on the cusp generators: phi = pi^T phi_classical.
bool is_classical_dual(const SymbolSpace& space, const VecQ& phi);
// lambda_g = phi({g0, g oo}); throws InvalidInput if phi is not classical.
LambdaCycle lambda_from_dual(const SymbolSpace& space, const VecQ& phi);
bool satisfies_cycle_conditions(const SymbolSpace& space, const LambdaCycle& lambda);
// sum_g 1/6 l_{g tau} {gS, g} - 1/6 l_{g tau} {g tau^2 S, g tau^2} - 2/3 l_g {g, gT}.
VecQ lambda_to_mms(const SymbolSpace& space, const LambdaCycle& lambda);

// x . y = sum_g lambda_g mu_g for x = sum mu_g {g0, g oo}, y = sum lambda_g {gi, g rho},
// both indexed by the coset table.
Rational merel_intersection(const SymbolSpace& space, const VecQ& mu, const LambdaCycle& lambda);

// lambda_to_mms(lambda_from_dual(phi)) = G(phi) on the classical dual basis.
bool verify_G_identity(const SymbolSpace& space, const PairingMatrix& p);
bool verify_G_identity(const SymbolSpace& space);

bool is_prime_power(long n);
Rational pfaffian(MatQ a);

}  // namespace mms
