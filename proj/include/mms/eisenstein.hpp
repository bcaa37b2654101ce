#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "mms/sl2.hpp"

namespace mms {

using Complex = std::complex<double>;

// Tolerance and series length, overridable through MMS_TOL and MMS_TERMS.
struct NumericSettings {
  double tolerance = 1e-8;
  long terms = 1000000;
};
NumericSettings numeric_settings();

// Character of (Z/m)^x for m an odd prime power (or m = 1), fixed by chi(g) = exp(2 pi i k / phi(m))
// for the smallest primitive root g.
class DirichletCharacter {
 public:
  long modulus() const { return modulus_; }
  long exponent() const { return k_; }
  long conductor() const { return conductor_; }
  bool even() const { return even_; }
  bool trivial() const { return conductor_ == 1; }
  bool primitive() const { return conductor_ == modulus_; }
  Complex operator()(long a) const;  // 0 on non-units
  // The primitive character inducing this one.
  DirichletCharacter primitive_version() const;

 private:
  friend std::vector<DirichletCharacter> characters_mod(long m);
  long modulus_ = 1, k_ = 0, phi_ = 1, conductor_ = 1;
  bool even_ = true;
  std::shared_ptr<const std::vector<long>> index_;  // discrete logarithm, -1 on non-units
};

// All phi(m) characters; throws Unsupported unless m is 1 or an odd prime power.
std::vector<DirichletCharacter> characters_mod(long m);

Complex gauss_sum(const DirichletCharacter& chi);  // primitive characters only

struct LValue {
  Complex log_route;     // -(tau / f) sum chi-bar(a) log|1 - zeta^a|
  Complex series_route;  // sum chi(n)/n over whole periods plus an asymptotic tail
  double rel_diff = 0;
};
// chi even, primitive and nontrivial.
LValue l_even_char_at_1(const DirichletCharacter& chi);

struct NumericReport {
  std::string identity;
  long pn = 0;
  Complex lhs, rhs;
  double rel_error = 0;
  double tolerance = 0;
  bool pass = false;
};
NumericReport make_report(std::string identity, long pn, Complex lhs, Complex rhs, double tolerance);

struct LogdetReports {
  NumericReport m_prime;            // det M' against (p/2) prod_{chi != 1} f/(2 tau) L(chi, 1)
  NumericReport m_double_prime;     // det M'' against prod_{chi != 1} f/(2 tau) L(chi, 1)
  NumericReport m_prime_corrected;  // det M' against (-1/2 log p) prod_{chi != 1} ...
  long size = 0;                    // phi(p^n) / 2
};
LogdetReports logdet_identity(long pn);
LogdetReports logdet_identity(long pn, double tolerance);

// M' indexed by representatives of (Z/p^n)^x / +-1 in [1, p^n/2].
Matrix<double> m_prime(long pn);
Matrix<double> m_double_prime(long pn);

// (1/2) B2({x}) with B2(t) = t^2 - t + 1/6.
Rational half_b2(const Rational& x);

struct EisComponent {
  double real_part = 0;
  Rational residue_part;
};
// F((a,b) g') - F((a,b) g) with F(a,b) = -delta_a log|1 - e^{2 i pi b / p^n}|, and the
// matching difference of (1/2) B2(first coordinate / p^n).
EisComponent eis_component(const UnimodularMatrix& g, const UnimodularMatrix& gp, long a, long b, long pn);

struct Gamma0pConstants {
  long p = 0;
  long d = 0;  // gcd(p - 1, 12)
  long n = 0;  // (p - 1) / d = a_0(E)
  std::vector<Integer> coefficients;  // a_0 .. a_bound
  double l_value = 0;                  // L(E, 1) = -(12/d) log p
  double two_pi_a0 = 0;
};
Gamma0pConstants gamma0p_constants(long p, long bound = 50);

}  // namespace mms
