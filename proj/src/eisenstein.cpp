#include "mms/eisenstein.hpp"

#include <Eigen/LU>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>

#include "mms/errors.hpp"

namespace mms {

namespace {

constexpr double kPi = std::numbers::pi;

long power_mod(long b, long e, long m) {
  long r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// p and n with m = p^n, p odd; throws otherwise.
std::pair<long, long> odd_prime_power(long m) {
  if (m < 3 || m % 2 == 0) throw Unsupported("modulus must be an odd prime power");
  long p = 3;
  while (m % p) p += 2;
  long n = 0, r = m;
  while (r % p == 0) {
    r /= p;
    ++n;
  }
  if (r != 1) throw Unsupported("modulus must be an odd prime power");
  return {p, n};
}

long primitive_root(long p, long n) {
  long phi_p = p - 1;
  std::vector<long> factors;
  for (long q = 2, r = phi_p; r > 1; ++q)
    if (r % q == 0) {
      factors.push_back(q);
      while (r % q == 0) r /= q;
    }
  for (long g = 2;; ++g) {
    bool ok = true;
    for (long q : factors) ok = ok && power_mod(g, phi_p / q, p) != 1;
    if (!ok) continue;
    // A root mod p lifts to p^n unless g^{p-1} = 1 mod p^2.
    if (n >= 2 && power_mod(g, phi_p, p * p) == 1) continue;
    return g;
  }
}

Complex unit_root(long num, long den) { return std::polar(1.0, 2 * kPi * static_cast<double>(num) / den); }

// log|1 - e^{2 i pi t}|, t rational num/den not an integer.
double log_abs_one_minus(long num, long den) { return std::log(2 * std::abs(std::sin(kPi * num / den))); }

long inverse_unit(long x, long m) { return inverse_mod(x, m); }

std::vector<long> half_units(long pn) {
  std::vector<long> xs;
  for (long x = 1; 2 * x < pn; ++x)
    if (std::gcd(x, pn) == 1) xs.push_back(x);
  return xs;
}

double rel_error(Complex a, Complex b) {
  double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0 : std::abs(a - b) / scale;
}

}  // namespace

NumericSettings numeric_settings() {
  NumericSettings s;
  if (const char* t = std::getenv("MMS_TOL")) {
    char* end = nullptr;
    double v = std::strtod(t, &end);
    if (end != t && v > 0) s.tolerance = v;
  }
  if (const char* t = std::getenv("MMS_TERMS")) {
    char* end = nullptr;
    long v = std::strtol(t, &end, 10);
    if (end != t && v > 0) s.terms = v;
  }
  return s;
}

Complex DirichletCharacter::operator()(long a) const {
  if (modulus_ == 1) return 1;
  long i = (*index_)[mod(a, modulus_)];
  if (i < 0) return 0;
  return unit_root((k_ * i) % phi_, phi_);
}

std::vector<DirichletCharacter> characters_mod(long m) {
  if (m == 1) {
    DirichletCharacter c;
    c.index_ = std::make_shared<std::vector<long>>(1, 0);
    return {c};
  }
  auto [p, n] = odd_prime_power(m);
  const long phi = m / p * (p - 1);
  const long g = primitive_root(p, n);
  auto index = std::make_shared<std::vector<long>>(m, -1);
  for (long j = 0, x = 1; j < phi; ++j, x = x * g % m) (*index)[x] = j;
  std::vector<DirichletCharacter> out;
  for (long k = 0; k < phi; ++k) {
    DirichletCharacter c;
    c.modulus_ = m;
    c.k_ = k;
    c.phi_ = phi;
    c.index_ = index;
    c.even_ = k % 2 == 0;  // chi(-1) = exp(i pi k)
    // Smallest p^e such that chi is trivial on units = 1 mod p^e.
    for (long e = 0, pe = 1; e <= n; ++e, pe *= p) {
      bool trivial = true;
      for (long x = 1; x < m && trivial; x += pe)
        if ((*index)[x] >= 0 && (k * (*index)[x]) % phi != 0) trivial = false;
      if (trivial) {
        c.conductor_ = pe;
        break;
      }
    }
    out.push_back(c);
  }
  return out;
}

DirichletCharacter DirichletCharacter::primitive_version() const {
  if (primitive()) return *this;
  auto all = characters_mod(conductor_);
  for (auto& c : all) {
    bool same = true;
    for (long a = 1; a < modulus_ && same; ++a)
      if (std::gcd(a, modulus_) == 1) same = std::abs(c(a) - (*this)(a)) < 1e-12;
    if (same && c.primitive()) return c;
  }
  throw std::logic_error("no primitive character found");
}

Complex gauss_sum(const DirichletCharacter& chi) {
  if (!chi.primitive()) throw InvalidInput("gauss_sum needs a primitive character");
  const long f = chi.conductor();
  Complex s = 0;
  for (long a = 0; a < f; ++a) s += chi(a) * unit_root(a, f);
  return f == 1 ? Complex(1) : s;
}

LValue l_even_char_at_1(const DirichletCharacter& chi) {
  if (!chi.even() || !chi.primitive() || chi.trivial())
    throw InvalidInput("L(chi, 1) needs an even primitive nontrivial character");
  const long f = chi.conductor();
  LValue out;
  Complex s = 0;
  for (long a = 1; a < f; ++a) s += std::conj(chi(a)) * log_abs_one_minus(a, f);
  out.log_route = -gauss_sum(chi) / static_cast<double>(f) * s;

  // Whole periods n <= K f, then Euler-Maclaurin for sum_{k >= K} 1/(a + k f); the
  // divergent logarithm cancels because sum_a chi(a) = 0.
  const long periods = std::max(1L, numeric_settings().terms / f);
  std::vector<Complex> values(f);
  for (long a = 0; a < f; ++a) values[a] = chi(a);
  Complex partial = 0;
  for (long n = periods * f; n >= 1; --n) partial += values[n % f] / static_cast<double>(n);
  Complex tail = 0;
  const double fd = static_cast<double>(f);
  for (long a = 1; a < f; ++a) {
    Complex c = chi(a);
    if (c == Complex(0)) continue;
    double x = static_cast<double>(a) + static_cast<double>(periods) * fd;
    double r = fd / x;
    double t = -std::log(x) / fd + 0.5 / x + r * r / (12 * fd) * (1 - r * r / 10 + r * r * r * r / 21);
    tail += c * t;
  }
  out.series_route = partial + tail;
  out.rel_diff = rel_error(out.log_route, out.series_route);
  return out;
}

NumericReport make_report(std::string identity, long pn, Complex lhs, Complex rhs, double tolerance) {
  NumericReport r{std::move(identity), pn, lhs, rhs, rel_error(lhs, rhs), tolerance, false};
  r.pass = r.rel_error <= tolerance && std::abs(lhs) > 0 && std::abs(rhs) > 0;
  return r;
}

Matrix<double> m_prime(long pn) {
  auto xs = half_units(pn);
  const Index k = static_cast<Index>(xs.size());
  Matrix<double> m(k, k);
  for (Index i = 0; i < k; ++i) {
    long xinv = inverse_unit(xs[i], pn);
    for (Index j = 0; j < k; ++j) m(i, j) = -log_abs_one_minus(xinv * xs[j] % pn, pn);
  }
  return m;
}

Matrix<double> m_double_prime(long pn) {
  auto xs = half_units(pn);
  const Index k = static_cast<Index>(xs.size()) - 1;  // drop x = 1
  Matrix<double> m(k, k);
  for (Index i = 0; i < k; ++i) {
    long xinv = inverse_unit(xs[i + 1], pn);
    for (Index j = 0; j < k; ++j)
      m(i, j) = -log_abs_one_minus(xinv * xs[j + 1] % pn, pn) + log_abs_one_minus(xinv, pn);
  }
  return m;
}

LogdetReports logdet_identity(long pn) { return logdet_identity(pn, numeric_settings().tolerance); }

LogdetReports logdet_identity(long pn, double tolerance) {
  auto [p, n] = odd_prime_power(pn);
  (void)n;
  LogdetReports out;
  Complex product = 1;
  for (auto& chi : characters_mod(pn)) {
    if (!chi.even() || chi.trivial()) continue;
    DirichletCharacter prim = chi.primitive_version();
    Complex l = l_even_char_at_1(prim).series_route;
    product *= static_cast<double>(prim.conductor()) / (2.0 * gauss_sum(prim)) * l;
  }
  Matrix<double> mp = m_prime(pn), mpp = m_double_prime(pn);
  out.size = mp.rows();
  double det_mp = mp.determinant();
  double det_mpp = mpp.rows() == 0 ? 1.0 : mpp.determinant();
  const double pd = static_cast<double>(p);
  out.m_prime = make_report("detM'", pn, det_mp, pd / 2 * product, tolerance);
  out.m_double_prime = make_report("detM''", pn, det_mpp, product, tolerance);
  out.m_prime_corrected = make_report("detM'_log", pn, det_mp, -0.5 * std::log(pd) * product, tolerance);
  return out;
}

Rational half_b2(const Rational& x) {
  Integer fl = floor_div(x.get_num(), x.get_den());
  Rational t = x - Rational(fl);
  Rational b = t * t - t + Rational(1, 6);
  b /= 2;
  b.canonicalize();
  return b;
}

EisComponent eis_component(const UnimodularMatrix& g, const UnimodularMatrix& gp, long a, long b, long pn) {
  auto [p, n] = odd_prime_power(pn);
  (void)n;
  if (mod(a, p) == 0 && mod(b, p) == 0) throw InvalidInput("(a, b) must be nonzero mod p");
  auto act = [&](const UnimodularMatrix& m) {
    long x = static_cast<long>(mpz_fdiv_ui(Integer(a * m.a() + b * m.c()).get_mpz_t(), pn));
    long y = static_cast<long>(mpz_fdiv_ui(Integer(a * m.b() + b * m.d()).get_mpz_t(), pn));
    return std::pair<long, long>{x, y};
  };
  auto F = [&](std::pair<long, long> v) { return v.first != 0 ? 0.0 : -log_abs_one_minus(v.second, pn); };
  auto u = act(g), v = act(gp);
  EisComponent c;
  c.real_part = F(v) - F(u);
  c.residue_part = half_b2(Rational(v.first, pn)) - half_b2(Rational(u.first, pn));
  c.residue_part.canonicalize();
  return c;
}

Gamma0pConstants gamma0p_constants(long p, long bound) {
  odd_prime_power(p);
  if (p % 2 == 0) throw Unsupported("p must be an odd prime");
  for (long q = 3; q * q <= p; q += 2)
    if (p % q == 0) throw Unsupported("p must be an odd prime");
  Gamma0pConstants c;
  c.p = p;
  c.d = std::gcd(p - 1, 12L);
  c.n = (p - 1) / c.d;
  c.coefficients.push_back(c.n);
  for (long k = 1; k <= bound; ++k) {
    Integer s = 0;
    for (long m = 1; m <= k; ++m)
      if (k % m == 0 && m % p != 0) s += m;
    c.coefficients.push_back(s * (24 / c.d));
  }
  c.l_value = -12.0 / static_cast<double>(c.d) * std::log(static_cast<double>(p));
  c.two_pi_a0 = 2 * kPi * static_cast<double>(c.n);
  return c;
}

}  // namespace mms
