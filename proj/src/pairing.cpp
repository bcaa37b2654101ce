#include "mms/pairing.hpp"

#include <numeric>

#include "mms/errors.hpp"

namespace mms {

namespace {

using M = UnimodularMatrix;

VecQ q(const VecZ& v) { return v.cast<Rational>(); }

bool only_primes_of(Integer x, const Integer& m) {
  if (x < 0) x = -x;
  if (x == 0) return false;
  Integer g;
  for (;;) {
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    if (g == 1) return x == 1;
    while (mpz_divisible_p(x.get_mpz_t(), g.get_mpz_t())) x /= g;
  }
}

std::size_t tau_of(const CosetTable& tab, std::size_t i) {
  return tab.next(tab.next(i, Generator::S), Generator::T);
}

}  // namespace

bool is_prime_power(long n) {
  if (n < 1) return false;
  if (n == 1) return true;
  long p = 2;
  while (n % p) ++p;
  while (n % p == 0) n /= p;
  return n == 1;
}

long coset_multiplicity(const GroupSpec& spec) {
  return spec.family == Family::Gamma1 && spec.level > 2 ? 2 : 1;
}

PairingMatrix pairing_matrix(const SymbolSpace& space) {
  const Index r = space.rank();
  PairingMatrix p;
  p.multiplicity = coset_multiplicity(space.spec());
  p.six_times = MatZ::Zero(r, r);
  const M s = M::S(), t = M::T();
  for (std::size_t i = 0; i < space.cosets().size(); ++i) {
    const M& g = space.cosets().rep(i);
    VecZ a = reduce_pair(space, g * s, g);
    VecZ b = reduce_pair(space, g * t * s, g * t);
    VecZ c = reduce_pair(space, g, g * t);
    VecZ d = reduce_pair(space, g, g * s);
    MatZ term = a * b.transpose() - b * a.transpose() - Integer(4) * (c * d.transpose()) + Integer(4) * (d * c.transpose());
    p.six_times += term;
  }
  p.six_times *= Integer(p.multiplicity);
  p.mat = p.six_times.cast<Rational>() / Rational(6);
  for (Index j = 0; j < r; ++j)
    for (Index k = 0; k < r; ++k) p.mat(j, k).canonicalize();
  return p;
}

PerfectnessReport perfectness_report(const SymbolSpace& space, const PairingMatrix& p) {
  PerfectnessReport rep;
  rep.integral = common_denominator(p.mat) == 1;
  rep.elementary_divisors = elementary_divisors(p.six_times);
  Integer l = 1;
  for (auto& c : space.cusps().classes()) mpz_lcm_ui(l.get_mpz_t(), l.get_mpz_t(), static_cast<unsigned long>(c.width));
  rep.inverted = 2 * l;
  rep.det = determinant(p.mat);
  rep.expected_det = 1;
  for (auto& c : space.cusps().classes()) rep.expected_det *= c.width;
  rep.expected_det /= space.cusps().d_gamma();
  rep.det_matches = abs(rep.det) == Rational(rep.expected_det);
  rep.pfaffian = pfaffian(p.mat);
  rep.pfaffian_matches = abs(rep.pfaffian) == Rational(rep.expected_det);
  for (auto& d : rep.elementary_divisors) {
    Rational x(d, 6);
    x.canonicalize();
    rep.pairing_divisors.push_back(x);
  }
  rep.perfect = p.mat.size() == 0 ||
                (only_primes_of(common_denominator(p.mat), rep.inverted) &&
                 only_primes_of(rep.det.get_num(), rep.inverted) && only_primes_of(rep.det.get_den(), rep.inverted));
  rep.cusps_real = true;
  for (std::size_t k = 0; k < space.cusps().size(); ++k) {
    const Cusp& x = space.cusps()[k].rep;
    if (!cusps_equivalent(space.spec(), {-x.p, x.q}, x)) rep.cusps_real = false;
  }
  return rep;
}

PerfectnessReport perfectness_report(const SymbolSpace& space) {
  return perfectness_report(space, pairing_matrix(space));
}

bool adjointness_check(const PairingMatrix& p, const OperatorMatrix& op, const OperatorMatrix& w) {
  MatQ m = op.mat.transpose(), wd = w.mat.transpose();
  // W is an involution, so W^-1 = W.
  return m.transpose() * p.mat == p.mat * (wd * m * wd);
}

bool adjointness_check(const SymbolSpace& space, long q) {
  const long n = space.spec().level;
  if (!is_prime_power(n)) throw Unsupported("adjointness is only asserted at prime-power level");
  if (!is_prime(q) || q == 2 || n % q == 0) throw Unsupported("adjointness needs a prime q prime to 2N");
  return adjointness_check(pairing_matrix(space), hecke_operator(space, q), atkin_lehner(space));
}

VecQ G_map(const PairingMatrix& p, const VecQ& phi) { return p.mat.transpose() * phi; }

bool is_classical_dual(const SymbolSpace& space, const VecQ& phi) {
  MatZ cusps = cusp_sublattice(space);
  for (Index k = 0; k < cusps.rows(); ++k)
    if (q(cusps.row(k).transpose()).dot(phi) != 0) return false;
  return true;
}

LambdaCycle lambda_from_dual(const SymbolSpace& space, const VecQ& phi) {
  if (!is_classical_dual(space, phi)) throw InvalidInput("dual vector does not factor through pi");
  const std::size_t m = space.cosets().size();
  LambdaCycle l{VecQ::Zero(static_cast<Index>(m))};
  // {g0, g oo} = -{g, gS} modulo ker(pi).
  for (std::size_t i = 0; i < m; ++i) l.coords(static_cast<Index>(i)) = -q(space.generator_image(i)).dot(phi);
  return l;
}

bool satisfies_cycle_conditions(const SymbolSpace& space, const LambdaCycle& lambda) {
  const CosetTable& tab = space.cosets();
  if (lambda.coords.size() != static_cast<Index>(tab.size())) return false;
  for (std::size_t i = 0; i < tab.size(); ++i) {
    std::size_t j = tau_of(tab, i), k = tau_of(tab, j);
    if (lambda.coords(i) + lambda.coords(tab.next(i, Generator::S)) != 0) return false;
    if (lambda.coords(i) + lambda.coords(j) + lambda.coords(k) != 0) return false;
  }
  return true;
}

VecQ lambda_to_mms(const SymbolSpace& space, const LambdaCycle& lambda) {
  if (!satisfies_cycle_conditions(space, lambda)) throw InvalidInput("lambda violates the cycle conditions");
  const CosetTable& tab = space.cosets();
  const M s = M::S(), t = M::T(), tau = M::tau(), tau2 = tau * tau;
  const Rational sixth(1, 6), two_thirds(2, 3);
  VecQ out = VecQ::Zero(space.rank());
  for (std::size_t i = 0; i < tab.size(); ++i) {
    const M& g = tab.rep(i);
    const Rational& lt = lambda.coords(tau_of(tab, i));
    const Rational& lg = lambda.coords(i);
    if (lt != 0) {
      out += sixth * lt * q(reduce_pair(space, g * s, g));
      out -= sixth * lt * q(reduce_pair(space, g * tau2 * s, g * tau2));
    }
    if (lg != 0) out -= two_thirds * lg * q(reduce_pair(space, g, g * t));
  }
  return out * Rational(coset_multiplicity(space.spec()));
}

Rational merel_intersection(const SymbolSpace& space, const VecQ& mu, const LambdaCycle& lambda) {
  if (mu.size() != lambda.coords.size() || mu.size() != static_cast<Index>(space.cosets().size()))
    throw InvalidInput("coset vectors of the wrong length");
  return lambda.coords.dot(mu);
}

Rational pfaffian(MatQ a) {
  const Index n = a.rows();
  if (n % 2) return 0;
  Rational pf = 1;
  for (Index k = 0; k < n; k += 2) {
    Index j = k + 1;
    while (j < n && a(k, j) == 0) ++j;
    if (j == n) return 0;
    if (j != k + 1) {
      a.row(j).swap(a.row(k + 1));
      a.col(j).swap(a.col(k + 1));
      pf = -pf;
    }
    const Rational pivot = a(k, k + 1);
    pf *= pivot;
    // Congruence by unit-determinant column operations keeps the Pfaffian.
    for (Index i = k + 2; i < n; ++i) {
      Rational c = a(k, i) / pivot;
      if (c != 0) {
        a.row(i) -= c * a.row(k + 1);
        a.col(i) -= c * a.col(k + 1);
      }
      Rational d = a(k + 1, i) / a(k + 1, k);
      if (d != 0) {
        a.row(i) -= d * a.row(k);
        a.col(i) -= d * a.col(k);
      }
    }
  }
  pf.canonicalize();
  return pf;
}

bool verify_G_identity(const SymbolSpace& space, const PairingMatrix& p) {
  const MatZ& pi = space.pi();
  for (Index k = 0; k < pi.rows(); ++k) {
    VecQ phi = q(pi.row(k).transpose());
    if (lambda_to_mms(space, lambda_from_dual(space, phi)) != G_map(p, phi)) return false;
  }
  return true;
}

bool verify_G_identity(const SymbolSpace& space) { return verify_G_identity(space, pairing_matrix(space)); }

}  // namespace mms
