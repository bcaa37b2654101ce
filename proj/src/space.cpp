#include "mms/space.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mms/errors.hpp"

namespace mms {

namespace {

long residue(const Integer& x, long n) { return static_cast<long>(mpz_fdiv_ui(x.get_mpz_t(), n)); }

void add_to(MatZ& m, Index i, Index j, long v) { m(i, j) += v; }

// First column made primitive and completed; returns alpha with alpha^{-1} m upper triangular.
struct Triangular {
  UnimodularMatrix alpha;
  Rational shift;  // B / D of alpha^{-1} m = ((A, B), (0, D))
};

Triangular triangularize(const Mat2Q& m) {
  Rational det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (det <= 0) throw InvalidInput("rational symbol argument must have positive determinant");
  Integer l = 1;
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
  Integer a = Rational(m(0, 0) * l).get_num(), b = Rational(m(0, 1) * l).get_num();
  Integer c = Rational(m(1, 0) * l).get_num(), d = Rational(m(1, 1) * l).get_num();
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
  Integer a1, c1;
  mpz_divexact(a1.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
  mpz_divexact(c1.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  Triangular t{complete_column(a1, c1), 0};
  UnimodularMatrix inv = t.alpha.inverse();
  Integer top = inv.a() * b + inv.b() * d;
  Integer bottom = inv.c() * b + inv.d() * d;  // = det / g > 0
  t.shift = Rational(top, bottom);
  t.shift.canonicalize();
  return t;
}

}  // namespace

Mat2Q to_rational(const UnimodularMatrix& g) {
  Mat2Q m;
  m << Rational(g.a()), Rational(g.b()), Rational(g.c()), Rational(g.d());
  return m;
}

SymbolSpace::SymbolSpace(const GroupSpec& spec)
    : spec_(make_spec(spec.family, spec.level)),
      cosets_(spec_),
      cusps_(spec_, cosets_),
      invariants_(group_invariants(cosets_, cusps_)) {
  const std::size_t m = cosets_.size(), c = cusps_.size(), n = m + c;
  std::vector<VecZ> rows, classical_rows;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = cosets_.next(i, Generator::S);
    if (j < i) continue;
    VecZ r = VecZ::Zero(n);
    r(i) += 1;
    r(j) += 1;
    rows.push_back(r);
    classical_rows.push_back(r.head(m));
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = cosets_.next(i, Generator::U), k = cosets_.next(j, Generator::U);
    if (i != std::min({i, j, k})) continue;
    VecZ r = VecZ::Zero(n);
    for (std::size_t x : {i, j, k}) {
      r(x) += 1;
      r(cusp_gen(cusps_.cusp_of(x))) -= 1;
    }
    rows.push_back(r);
    VecZ rc = VecZ::Zero(m);
    for (std::size_t x : {i, j, k}) rc(x) += 1;
    classical_rows.push_back(rc);
  }
  {
    VecZ r = VecZ::Zero(n);
    for (std::size_t k = 0; k < c; ++k) r(cusp_gen(k)) = cusps_[k].width / cusps_.d_gamma();
    rows.push_back(r);
  }
  MatZ rel(static_cast<Index>(rows.size()), static_cast<Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i) rel.row(i) = rows[i].transpose();
  MatZ crel(static_cast<Index>(classical_rows.size()), static_cast<Index>(m));
  for (std::size_t i = 0; i < classical_rows.size(); ++i) crel.row(i) = classical_rows[i].transpose();

  quotient_ = torsion_free_quotient(rel, static_cast<Index>(n));
  classical_ = torsion_free_quotient(crel, static_cast<Index>(m));

  const long g = invariants_.genus, nc = static_cast<long>(c);
  if (quotient_.basis_rank != 2 * g + 2 * (nc - 1)) {
    std::ostringstream os;
    os << "presentation rank " << quotient_.basis_rank << " differs from 2g+2(c-1) = " << 2 * g + 2 * (nc - 1);
    throw PresentationError(os.str());
  }
  if (classical_.basis_rank != 2 * g + nc - 1) {
    std::ostringstream os;
    os << "classical presentation rank " << classical_.basis_rank << " differs from 2g+c-1 = " << 2 * g + nc - 1;
    throw PresentationError(os.str());
  }

  // pi on generators: ManinGen -> classical Manin symbol, CuspGen -> 0.
  MatZ pi_gen = MatZ::Zero(classical_.basis_rank, static_cast<Index>(n));
  pi_gen.leftCols(static_cast<Index>(m)) = classical_.project;
  pi_ = multiply(pi_gen, quotient_.lift);
  if (!(multiply(pi_, quotient_.project) == pi_gen)) throw PresentationError("projection to classical symbols is not well defined");

  MatZ d_gen = MatZ::Zero(static_cast<Index>(c), static_cast<Index>(n));
  for (std::size_t i = 0; i < m; ++i) {
    add_to(d_gen, cusps_.cusp_of(cosets_.next(i, Generator::S)), i, 1);
    add_to(d_gen, cusps_.cusp_of(i), i, -1);
  }
  boundary_ = multiply(d_gen, quotient_.lift);
  if (!(multiply(boundary_, quotient_.project) == d_gen)) throw PresentationError("boundary map is not well defined");

  // Cusp sublattice must be exactly ker(pi).
  MatZ kernel = integer_kernel(pi_);
  if (kernel.cols() != nc - 1) throw PresentationError("ker(pi) has the wrong rank");
  MatZ cusp_rows = quotient_.project.rightCols(static_cast<Index>(c)).transpose();
  std::optional<Integer> idx;
  try {
    idx = sublattice_index(kernel.transpose(), cusp_rows);
  } catch (const ContainmentError&) {
    throw PresentationError("cusp generators are not killed by pi");
  }
  if (!idx || *idx != 1) throw PresentationError("cusp generators do not span ker(pi)");
}

VecQ SymbolSpace::to_basis(const GeneratorSum& sum) const {
  VecQ out = VecQ::Zero(rank());
  for (auto& [gen, coeff] : sum) {
    if (coeff == 0) continue;
    for (Index i = 0; i < rank(); ++i)
      if (quotient_.project(i, gen) != 0) out(i) += coeff * quotient_.project(i, gen);
  }
  return out;
}

VecZ SymbolSpace::to_basis_integral(const GeneratorSum& sum) const {
  VecQ q = to_basis(sum);
  VecZ out(q.size());
  for (Index i = 0; i < q.size(); ++i) {
    if (q(i).get_den() != 1) throw InvalidInput("symbol has fractional coordinates");
    out(i) = q(i).get_num();
  }
  return out;
}

std::pair<UnimodularMatrix, UnimodularMatrix> SymbolSpace::generator_pair(std::size_t gen) const {
  if (gen < cosets_.size()) {
    const UnimodularMatrix& r = cosets_.rep(gen);
    return {r, r * UnimodularMatrix::S()};
  }
  const UnimodularMatrix& r = cosets_.rep(cusps_[gen - cosets_.size()].cosets.front());
  return {r, r * UnimodularMatrix::T()};
}

SymbolSpace build_space(const GroupSpec& spec) { return SymbolSpace(spec); }

void accumulate_pair(const SymbolSpace& space, const UnimodularMatrix& g, const UnimodularMatrix& h,
                     const Rational& coeff, GeneratorSum& out) {
  const long n = space.spec().level;
  Word w = stword_decompose(g.inverse() * h);
  long c = residue(g.c(), n), d = residue(g.d(), n);
  const CosetTable& tab = space.cosets();
  for (auto& letter : w.letters) {
    std::size_t idx = tab.index_of_row(c, d);
    if (letter.is_s) {
      out[space.manin_gen(idx)] += coeff;
      long nc = d, nd = mod(-c, n);
      c = nc;
      d = nd;
    } else {
      out[space.cusp_gen(space.cusps().cusp_of(idx))] += coeff * letter.power;
      d = mod(d + residue(letter.power, n) * c, n);
    }
  }
}

void accumulate_pair_rational(const SymbolSpace& space, const Mat2Q& a, const Mat2Q& b, const Rational& coeff,
                              GeneratorSum& out) {
  Triangular ta = triangularize(a), tb = triangularize(b);
  const CosetTable& tab = space.cosets();
  if (ta.shift != 0) out[space.cusp_gen(space.cusps().cusp_of(tab.index_of(ta.alpha)))] -= coeff * ta.shift;
  accumulate_pair(space, ta.alpha, tb.alpha, coeff, out);
  if (tb.shift != 0) out[space.cusp_gen(space.cusps().cusp_of(tab.index_of(tb.alpha)))] += coeff * tb.shift;
}

VecZ reduce_pair(const SymbolSpace& space, const UnimodularMatrix& g, const UnimodularMatrix& h) {
  GeneratorSum s;
  accumulate_pair(space, g, h, 1, s);
  return space.to_basis_integral(s);
}

VecQ reduce_pair_rational(const SymbolSpace& space, const Mat2Q& a, const Mat2Q& b) {
  GeneratorSum s;
  accumulate_pair_rational(space, a, b, 1, s);
  return space.to_basis(s);
}

std::optional<Integer> manin_index(const SymbolSpace& space) {
  const Index r = space.rank();
  if (r == 0) return Integer(1);
  const Index m = static_cast<Index>(space.cosets().size());
  MatZ images = space.quotient().project.leftCols(m).transpose();
  return sublattice_index(MatZ::Identity(r, r), images);
}

VecZ boundary(const SymbolSpace& space, const VecZ& x) { return space.boundary() * x; }
VecQ boundary(const SymbolSpace& space, const VecQ& x) { return space.boundary().cast<Rational>() * x; }
VecZ pi_classical(const SymbolSpace& space, const VecZ& x) { return space.pi() * x; }

MatZ homology_sublattice(const SymbolSpace& space) {
  const CosetTable& tab = space.cosets();
  std::vector<VecZ> gens;
  for (std::size_t i = 0; i < tab.size(); ++i) {
    for (Generator s : {Generator::S, Generator::T}) {
      VecZ v = reduce_pair(space, UnimodularMatrix(), tab.act(i, s).gamma);
      if (!is_zero(v)) gens.push_back(v);
    }
  }
  MatZ out(static_cast<Index>(gens.size()), space.rank());
  for (std::size_t i = 0; i < gens.size(); ++i) out.row(i) = gens[i].transpose();
  return out;
}

MatZ boundary_kernel(const SymbolSpace& space) { return integer_kernel(space.boundary()).transpose(); }

MatZ cusp_sublattice(const SymbolSpace& space) {
  return space.quotient().project.rightCols(static_cast<Index>(space.cusps().size())).transpose();
}

ExactSequenceReport exact_sequence_check(const SymbolSpace& space) {
  ExactSequenceReport rep;
  const Index c = static_cast<Index>(space.cusps().size());
  MatZ kernel = integer_kernel(space.pi());
  rep.kernel_rank = kernel.cols();
  // A sublattice of a free group is free; record the invariants of ker(pi) itself anyway.
  for (auto& d : elementary_divisors(kernel))
    if (d != 1) rep.kernel_torsion.push_back(d);
  MatZ unit(1, c);
  for (Index k = 0; k < c; ++k) unit(0, k) = space.cusps()[k].width / space.cusps().d_gamma();
  auto divs = elementary_divisors(unit);
  rep.coker_rank = c - static_cast<Index>(divs.size());
  for (auto& d : divs)
    if (d != 1) rep.coker_torsion.push_back(d);
  MatZ cusps = cusp_sublattice(space);
  try {
    auto idx = sublattice_index(kernel.transpose(), cusps);
    rep.cusp_span_saturated = idx && *idx == 1;
  } catch (const ContainmentError&) {
    rep.cusp_span_saturated = false;
  }
  MatZ rel = integer_kernel(cusps.transpose());
  bool relation_ok = rel.cols() == 1;
  if (relation_ok) {
    rep.cusp_relation = rel.col(0);
    VecZ expect = unit.row(0).transpose();
    relation_ok = rep.cusp_relation == expect || rep.cusp_relation == VecZ(-expect);
  }
  rep.holds = rep.kernel_rank == rep.coker_rank && rep.coker_torsion.empty() && rep.kernel_torsion.empty() &&
              rep.cusp_span_saturated && relation_ok;
  return rep;
}

Cusp cusp_of_matrix(const UnimodularMatrix& g) {
  Integer p = g.a(), q = g.c();
  if (q < 0 || (q == 0 && p < 0)) {
    p = -p;
    q = -q;
  }
  return {p, q};
}

namespace {

// {0, x} in classical generator coordinates.  The classical generator of coset i is
// the image of ManinGen(i), namely {rep_i oo, rep_i 0}; so {g 0, g oo} = -gen(coset g).
void classical_from_zero(const SymbolSpace& space, const Cusp& x, GeneratorSum& out, const Rational& coeff) {
  const CosetTable& tab = space.cosets();
  out[tab.index_of(UnimodularMatrix())] -= coeff;  // {0, oo}
  if (x.q == 0) return;
  // Convergents p_k / q_k of x; each step contributes {p_{k-1}/q_{k-1}, p_k/q_k}.
  Integer a = x.p, b = x.q;
  Integer p2 = 0, q2 = 1, p1 = 1, q1 = 0;
  long k = 0;
  while (b != 0) {
    Integer quo = floor_div(a, b);
    Integer r = a - quo * b;
    Integer p0 = quo * p1 + p2, q0 = quo * q1 + q2;
    Integer sgn = (k % 2 == 0) ? -1 : 1;  // (-1)^{k-1}
    UnimodularMatrix gk(p0, sgn * p1, q0, sgn * q1);
    out[tab.index_of(gk)] -= coeff;
    p2 = p1;
    q2 = q1;
    p1 = p0;
    q1 = q0;
    a = b;
    b = r;
    ++k;
  }
}

}  // namespace

VecZ classical_symbol(const SymbolSpace& space, const Cusp& x, const Cusp& y) {
  GeneratorSum s;
  classical_from_zero(space, y, s, 1);
  classical_from_zero(space, x, s, -1);
  const MatZ& proj = space.classical().project;
  VecZ out = VecZ::Zero(proj.rows());
  for (auto& [gen, coeff] : s) {
    if (coeff == 0) continue;
    out += proj.col(gen) * coeff.get_num();
  }
  return out;
}

}  // namespace mms
