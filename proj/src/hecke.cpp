#include "mms/hecke.hpp"

#include <numeric>
#include <sstream>

#include "mms/errors.hpp"

namespace mms {

namespace {

// image(g, h, out) adds the image of {g, h} to out; the matrix is the image of each
// generator pushed through the lift of the basis.
template <class F>
MatQ from_generators(const SymbolSpace& space, F&& image) {
  const Index r = space.rank();
  const MatZ& lift = space.quotient().lift;
  MatQ out = MatQ::Zero(r, r);
  for (std::size_t gen = 0; gen < space.num_generators(); ++gen) {
    const Index row = static_cast<Index>(gen);
    bool used = false;
    for (Index j = 0; j < r && !used; ++j) used = lift(row, j) != 0;
    if (!used) continue;
    auto [g, h] = space.generator_pair(gen);
    GeneratorSum sum;
    image(g, h, sum);
    VecQ col = space.to_basis(sum);
    for (Index j = 0; j < r; ++j)
      if (lift(row, j) != 0) out.col(j) += col * Rational(lift(row, j));
  }
  return out;
}

Mat2Z mat2(const Integer& a, const Integer& b, const Integer& c, const Integer& d) {
  Mat2Z m;
  m << a, b, c, d;
  return m;
}

Mat2Q to_q(const Mat2Z& m) { return m.cast<Rational>(); }

// Left representatives of Gamma diag(1, q) Gamma.
std::vector<Mat2Z> double_coset_reps(const SymbolSpace& space, long q) {
  const long n = space.spec().level;
  std::vector<Mat2Z> reps;
  for (long i = 0; i < q; ++i) reps.push_back(mat2(1, i, 0, q));
  if (n % q != 0) {
    UnimodularMatrix s = diamond_matrix(n, q);
    reps.push_back(s.matrix() * mat2(q, 0, 0, 1));
  }
  return reps;
}

std::string hecke_name(const SymbolSpace& space, long q) {
  return (space.spec().level % q == 0 ? "U" : "T") + std::to_string(q);
}

long residue(const Integer& x, long q) { return static_cast<long>(mpz_fdiv_ui(x.get_mpz_t(), q)); }

// t with g_i g = t g_sigma, the g_sigma drawn from ((1,j),(0,q)), |j| <= (q-1)/2, and diag(q,1).
UnimodularMatrix t_factor(const Mat2Z& gi, const UnimodularMatrix& g, long q) {
  Mat2Z m = gi * g.matrix();
  long j;
  if (residue(m(1, 0), q) != 0)
    j = mod(residue(m(1, 1), q) * inverse_mod(residue(m(1, 0), q), q), q);
  else if (residue(m(0, 0), q) != 0)
    j = mod(residue(m(0, 1), q) * inverse_mod(residue(m(0, 0), q), q), q);
  else
    return UnimodularMatrix(m(0, 0) / q, m(0, 1), m(1, 0) / q, m(1, 1));
  if (j > (q - 1) / 2) j -= q;
  Integer top = m(0, 1) - j * m(0, 0), bottom = m(1, 1) - j * m(1, 0);
  if (residue(top, q) != 0 || residue(bottom, q) != 0) throw std::logic_error("t_factor: no integral factor");
  return UnimodularMatrix(m(0, 0), top / q, m(1, 0), bottom / q);
}

Cusp cusp_from(const Integer& x, const Integer& y) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
  Integer p = x / g, q = y / g;
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  return {p, q};
}

bool same(const MatQ& a, const MatQ& b) { return a == b; }

}  // namespace

bool is_prime(long q) {
  if (q < 2) return false;
  for (long d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

OperatorMatrix make_operator(std::string name, MatQ mat) {
  for (Index j = 0; j < mat.cols(); ++j)
    for (Index i = 0; i < mat.rows(); ++i) mat(i, j).canonicalize();
  OperatorMatrix op{std::move(name), std::move(mat), 1};
  op.denominator = common_denominator(op.mat);
  return op;
}

UnimodularMatrix diamond_matrix(long level, long d) {
  if (std::gcd(d, level) != 1) throw InvalidInput("diamond: d must be coprime to N");
  long dd = mod(d, level);
  if (dd == 0) dd = level;  // level 1
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), Integer(dd).get_mpz_t(), Integer(level).get_mpz_t());
  // s dd + t N = 1
  return UnimodularMatrix(s, -t, level, dd);
}

OperatorMatrix hecke_operator_rational(const SymbolSpace& space, long q) {
  if (!is_prime(q)) throw InvalidInput("hecke: q must be prime");
  std::vector<Mat2Q> reps;
  for (auto& m : double_coset_reps(space, q)) reps.push_back(to_q(m));
  MatQ mat = from_generators(space, [&](const UnimodularMatrix& g, const UnimodularMatrix& h, GeneratorSum& out) {
    Mat2Q a = to_rational(g), b = to_rational(h);
    for (auto& r : reps) accumulate_pair_rational(space, r * a, r * b, 1, out);
  });
  return make_operator(hecke_name(space, q), std::move(mat));
}

OperatorMatrix hecke_operator_integral(const SymbolSpace& space, long q) {
  const long n = space.spec().level;
  if (!is_prime(q) || q == 2 || n % q == 0) throw InvalidInput("integral Hecke formula needs q prime to 2N");
  std::vector<Mat2Z> reps;
  for (long i = -(q - 1) / 2; i <= (q - 1) / 2; ++i) reps.push_back(mat2(1, i, 0, q));
  const Mat2Z g_inf = mat2(q, 0, 0, 1);
  const UnimodularMatrix sigma = diamond_matrix(n, q);
  MatQ mat = from_generators(space, [&](const UnimodularMatrix& g, const UnimodularMatrix& h, GeneratorSum& out) {
    accumulate_pair(space, sigma * t_factor(g_inf, g, q), sigma * t_factor(g_inf, h, q), 1, out);
    for (auto& r : reps) accumulate_pair(space, t_factor(r, g, q), t_factor(r, h, q), 1, out);
  });
  return make_operator(hecke_name(space, q), std::move(mat));
}

OperatorMatrix hecke_operator(const SymbolSpace& space, long q) {
  if (!is_prime(q)) throw InvalidInput("hecke: q must be prime");
  if (q != 2 && space.spec().level % q != 0) return hecke_operator_integral(space, q);
  return hecke_operator_rational(space, q);
}

OperatorMatrix hecke_composite(const SymbolSpace& space, long n) {
  if (n < 1) throw InvalidInput("hecke: n must be positive");
  const Index r = space.rank();
  const long level = space.spec().level;
  MatQ total = MatQ::Identity(r, r);
  long rest = n;
  for (long q = 2; rest > 1; ++q) {
    if (rest % q) continue;
    int k = 0;
    while (rest % q == 0) {
      rest /= q;
      ++k;
    }
    MatQ tq = hecke_operator(space, q).mat;
    MatQ correction = MatQ::Zero(r, r);
    if (level % q != 0) correction = diamond(space, q).mat * Rational(q);
    MatQ prev = MatQ::Identity(r, r), cur = tq;
    for (int e = 1; e < k; ++e) {
      MatQ next = tq * cur - correction * prev;
      prev = cur;
      cur = next;
    }
    total = total * cur;
  }
  return make_operator("T" + std::to_string(n), std::move(total));
}

OperatorMatrix diamond(const SymbolSpace& space, long d) {
  const UnimodularMatrix s = diamond_matrix(space.spec().level, d);
  MatQ mat = from_generators(space, [&](const UnimodularMatrix& g, const UnimodularMatrix& h, GeneratorSum& out) {
    accumulate_pair(space, s * g, s * h, 1, out);
  });
  return make_operator("diamond(" + std::to_string(d) + ")", std::move(mat));
}

OperatorMatrix atkin_lehner(const SymbolSpace& space) {
  const long n = space.spec().level;
  Mat2Q w;
  w << 0, -1, n, 0;
  MatQ mat = from_generators(space, [&](const UnimodularMatrix& g, const UnimodularMatrix& h, GeneratorSum& out) {
    accumulate_pair_rational(space, w * to_rational(g), w * to_rational(h), 1, out);
  });
  return make_operator("W" + std::to_string(n), std::move(mat));
}

OperatorMatrix complex_conjugation(const SymbolSpace& space) {
  MatQ mat = from_generators(space, [&](const UnimodularMatrix& g, const UnimodularMatrix& h, GeneratorSum& out) {
    accumulate_pair(space, g.bar(), h.bar(), 1, out);
  });
  return make_operator("conj", std::move(mat));
}

MatQ classical_hecke(const SymbolSpace& space, long q) {
  if (!is_prime(q)) throw InvalidInput("hecke: q must be prime");
  const LatticeQuotient& cl = space.classical();
  const Index r = cl.basis_rank;
  const auto reps = double_coset_reps(space, q);
  MatQ out = MatQ::Zero(r, r);
  for (std::size_t i = 0; i < space.cosets().size(); ++i) {
    const Index row = static_cast<Index>(i);
    bool used = false;
    for (Index j = 0; j < r && !used; ++j) used = cl.lift(row, j) != 0;
    if (!used) continue;
    const Mat2Z& g = space.cosets().rep(i).matrix();
    VecZ col = VecZ::Zero(r);
    for (auto& m : reps) {
      Mat2Z x = m * g;  // {x oo, x 0}
      col += classical_symbol(space, cusp_from(x(0, 0), x(1, 0)), cusp_from(x(0, 1), x(1, 1)));
    }
    for (Index j = 0; j < r; ++j)
      if (cl.lift(row, j) != 0) out.col(j) += (col * cl.lift(row, j)).cast<Rational>();
  }
  return out;
}

HeckeLawReport verify_hecke_laws(const SymbolSpace& space, const std::vector<long>& primes) {
  HeckeLawReport rep;
  const long n = space.spec().level;
  auto fail = [&](bool& flag, const std::string& what) {
    flag = false;
    rep.failures.push_back(what);
  };
  for (long q : primes) {
    if (!is_prime(q)) throw InvalidInput("verify_hecke_laws: " + std::to_string(q) + " is not prime");
    OperatorMatrix op = hecke_operator(space, q);
    if (q != 2 && n % q != 0) {
      if (op.denominator != 1) fail(rep.integral, op.name + " is not integral");
      if (!same(op.mat, hecke_operator_rational(space, q).mat)) fail(rep.routes_agree, op.name + " routes differ");
    } else if (q % op.denominator != 0) {
      fail(rep.denominators_bounded, op.name + " denominator " + op.denominator.get_str() + " does not divide q");
    }
    MatQ pi = space.pi().cast<Rational>();
    if (!same(pi * op.mat, classical_hecke(space, q) * pi)) fail(rep.pi_equivariant, op.name + " not pi-equivariant");
    rep.operators.push_back(std::move(op));
  }
  OperatorMatrix conj = complex_conjugation(space);
  for (std::size_t a = 0; a < rep.operators.size(); ++a) {
    const MatQ& x = rep.operators[a].mat;
    for (std::size_t b = a + 1; b < rep.operators.size(); ++b) {
      const MatQ& y = rep.operators[b].mat;
      if (!same(x * y, y * x)) fail(rep.commute, rep.operators[a].name + " and " + rep.operators[b].name + " do not commute");
    }
    if (!same(x * conj.mat, conj.mat * x)) fail(rep.conj_commutes, "conj does not commute with " + rep.operators[a].name);
  }

  // Sublattices: ker(boundary) and H1(Y), integrally when the operator is integral.
  const MatZ kernel = boundary_kernel(space);
  const MatZ homology = hnf_basis(homology_sublattice(space));
  const MatQ bd = space.boundary().cast<Rational>();
  for (auto& op : rep.operators) {
    for (Index k = 0; k < kernel.rows(); ++k) {
      VecQ img = op.mat * kernel.row(k).transpose().cast<Rational>();
      if (!is_zero(bd * img)) fail(rep.preserves_sublattices, op.name + " leaves ker(boundary)");
    }
    for (Index k = 0; k < homology.rows(); ++k) {
      VecQ img = op.mat * homology.row(k).transpose().cast<Rational>();
      if (op.denominator == 1) {
        if (!coordinates_in(homology, to_integer(img))) fail(rep.preserves_sublattices, op.name + " leaves H1(Y)");
      } else if (!is_zero(bd * img)) {
        fail(rep.preserves_sublattices, op.name + " leaves H1(Y) tensor Q");
      }
    }
  }

  if (space.spec().family == Family::Gamma0 && is_prime(n)) {
    rep.eisenstein_checked = true;
    const MatZ cusps = cusp_sublattice(space);
    for (std::size_t a = 0; a < rep.operators.size(); ++a) {
      long q = primes[a];
      if (q == n) continue;
      for (Index k = 0; k < cusps.rows(); ++k) {
        VecQ v = cusps.row(k).transpose().cast<Rational>();
        if (!same(rep.operators[a].mat * v, v * Rational(q + 1)))
          fail(rep.eisenstein, rep.operators[a].name + " is not q+1 on ker(pi)");
      }
    }
  }
  rep.operators.push_back(std::move(conj));
  return rep;
}

}  // namespace mms
