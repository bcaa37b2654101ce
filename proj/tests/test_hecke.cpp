#include <doctest.h>

#include <functional>
#include <map>
#include <numeric>

#include "mms/errors.hpp"
#include "mms/hecke.hpp"
#include "manin_oracle.hpp"

using namespace mms;
using namespace mms_oracle;

namespace {

MatQ cuspidal_basis(const SymbolSpace& s) { return boundary_kernel(s).transpose().cast<Rational>(); }

std::vector<GroupSpec> level_set() {
  std::vector<GroupSpec> out;
  for (long n : {1, 5, 7, 9, 11, 13, 23, 25}) out.push_back(make_spec(Family::Gamma0, n));
  for (long n : {5, 7, 11, 13}) out.push_back(make_spec(Family::Gamma1, n));
  return out;
}

MatQ identity(const SymbolSpace& s) { return MatQ::Identity(s.rank(), s.rank()); }

}  // namespace

TEST_CASE("independent Manin-symbol oracle for T2 on Gamma0(11)") {
  auto oracle = oracle_charpoly_t2();
  CHECK(oracle == poly_from_roots({3, -2, -2}));
  SymbolSpace s = build_space(make_spec(Family::Gamma0, 11));
  CHECK(charpoly(classical_hecke(s, 2)) == oracle);
  OperatorMatrix t2 = hecke_operator(s, 2);
  CHECK(charpoly(t2.mat) == poly_from_roots({3, 3, -2, -2}));
  // Cuspidal block: ker(boundary) modulo the cusp line.
  MatQ kd = cuspidal_basis(s);
  auto on_kernel = charpoly(restrict_to(t2.mat, kd));
  CHECK(on_kernel == poly_from_roots({3, -2, -2}));
}

TEST_CASE("Gamma0(11) Hecke data") {
  SymbolSpace s = build_space(make_spec(Family::Gamma0, 11));
  MatQ cusp = cusp_sublattice(s).transpose().cast<Rational>();
  OperatorMatrix t3 = hecke_operator(s, 3);
  CHECK(t3.name == "T3");
  CHECK(t3.denominator == 1);
  CHECK(t3.mat * cusp == cusp * Rational(4));
  CHECK(charpoly(restrict_to(t3.mat, cuspidal_basis(s))) == poly_from_roots({4, -1, -1}));
  CHECK(charpoly(restrict_to(hecke_operator(s, 5).mat, cuspidal_basis(s))) == poly_from_roots({6, 1, 1}));
  CHECK(charpoly(restrict_to(hecke_operator(s, 7).mat, cuspidal_basis(s))) == poly_from_roots({8, -2, -2}));

  OperatorMatrix u11 = hecke_operator(s, 11);
  CHECK(u11.name == "U11");
  CHECK(11 % u11.denominator == 0);
  OperatorMatrix t2 = hecke_operator(s, 2);
  CHECK(2 % t2.denominator == 0);

  OperatorMatrix t4 = hecke_composite(s, 4);
  CHECK(t4.mat == t2.mat * t2.mat - identity(s) * Rational(2));
  CHECK(charpoly(restrict_to(t4.mat, cuspidal_basis(s))) == poly_from_roots({7, 2, 2}));
  CHECK(hecke_composite(s, 6).mat == t2.mat * t3.mat);
  CHECK(hecke_composite(s, 1).mat == identity(s));
  CHECK_THROWS_AS(hecke_operator(s, 4), InvalidInput);
}

TEST_CASE("integral and rational routes agree") {
  for (auto spec : level_set()) {
    SymbolSpace s = build_space(spec);
    for (long q : {3, 5, 7, 11, 13}) {
      if (spec.level % q == 0) continue;
      OperatorMatrix a = hecke_operator_integral(s, q), b = hecke_operator_rational(s, q);
      CHECK(a.denominator == 1);
      CHECK(a.mat == b.mat);
    }
  }
}

TEST_CASE("diamond operators") {
  SymbolSpace g1 = build_space(make_spec(Family::Gamma1, 5));
  OperatorMatrix d2 = diamond(g1, 2);
  CHECK(d2.denominator == 1);
  CHECK(d2.name == "diamond(2)");
  CHECK(d2.mat * d2.mat * d2.mat * d2.mat == identity(g1));
  CHECK(d2.mat != identity(g1));
  CHECK(diamond(g1, 1).mat == identity(g1));
  CHECK(diamond(g1, 3).mat == d2.mat * d2.mat * d2.mat);
  CHECK_THROWS_AS(diamond(g1, 5), InvalidInput);
  SymbolSpace g0 = build_space(make_spec(Family::Gamma0, 13));
  for (long d : {2, 5, 7, 12}) CHECK(diamond(g0, d).mat == identity(g0));
  SymbolSpace g13 = build_space(make_spec(Family::Gamma1, 13));
  OperatorMatrix t3 = hecke_operator(g13, 3), d5 = diamond(g13, 5);
  CHECK(t3.mat * d5.mat == d5.mat * t3.mat);
}

TEST_CASE("Atkin-Lehner involution") {
  for (auto spec : level_set()) {
    SymbolSpace s = build_space(spec);
    OperatorMatrix w = atkin_lehner(s);
    CHECK(w.mat * w.mat == identity(s));
    // Denominator divides a power of N.
    Integer den = w.denominator;
    for (long p = 2; p <= spec.level; ++p)
      if (spec.level % p == 0)
        while (den % p == 0) den /= p;
    CHECK(den == 1);
  }
  SymbolSpace s = build_space(make_spec(Family::Gamma0, 11));
  OperatorMatrix w = atkin_lehner(s);
  CHECK(w.name == "W11");
  MatZ bd = s.boundary();
  MatQ swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK(bd.cast<Rational>() * w.mat == swap * bd.cast<Rational>());
  SymbolSpace full = build_space(make_spec(Family::FullSL2, 1));
  CHECK(atkin_lehner(full).mat.size() == 0);
}

TEST_CASE("complex conjugation") {
  for (auto spec : level_set()) {
    SymbolSpace s = build_space(spec);
    OperatorMatrix c = complex_conjugation(s);
    CHECK(c.denominator == 1);
    CHECK(c.mat * c.mat == identity(s));
    if (s.rank() == 0) continue;
    VecQ inf = s.generator_image(s.cusp_gen(0)).cast<Rational>();
    CHECK(VecQ(c.mat * inf) == VecQ(-inf));
    MatQ plus = c.mat - identity(s), minus = c.mat + identity(s);
    CHECK(rational_kernel(plus).cols() + rational_kernel(minus).cols() == s.rank());
    // Boundary of conj x is minus the conjugated cusp divisor.
    const CuspTable& cusps = s.cusps();
    MatQ perm = MatQ::Zero(cusps.size(), cusps.size());
    for (std::size_t k = 0; k < cusps.size(); ++k) {
      Cusp x = cusps[k].rep, xb{-x.p, x.q};
      for (std::size_t m = 0; m < cusps.size(); ++m)
        if (cusps_equivalent(spec, xb, cusps[m].rep)) perm(m, k) = 1;
    }
    MatQ bd = s.boundary().cast<Rational>();
    CHECK(bd * c.mat == perm * bd);
  }
  SymbolSpace s = build_space(make_spec(Family::Gamma0, 11));
  OperatorMatrix c = complex_conjugation(s);
  CHECK(rational_kernel(c.mat - identity(s)).cols() + rational_kernel(c.mat + identity(s)).cols() == 4);
}

TEST_CASE("Hecke laws on the level set") {
  for (auto spec : level_set()) {
    SymbolSpace s = build_space(spec);
    HeckeLawReport rep = verify_hecke_laws(s, {2, 3, 5, 7});
    for (auto& f : rep.failures) INFO(f);
    CHECK(rep.holds());
    CHECK(rep.failures.empty());
    CHECK(rep.operators.size() == 5);
    if (spec.family == Family::Gamma0 && (spec.level == 5 || spec.level == 7 || spec.level == 11 ||
                                          spec.level == 13 || spec.level == 23))
      CHECK(rep.eisenstein_checked);
  }
  CHECK_THROWS_AS(verify_hecke_laws(build_space(make_spec(Family::Gamma0, 11)), {4}), InvalidInput);
}
