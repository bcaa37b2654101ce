#include <doctest.h>

#include <numeric>
#include <random>

#include "mms/errors.hpp"
#include "mms/space.hpp"

using namespace mms;

namespace {

UnimodularMatrix random_sl2(std::mt19937_64& rng, long bound) {
  std::uniform_int_distribution<long> e(-bound, bound);
  for (;;) {
    long a = e(rng), c = e(rng);
    if (std::gcd(a, c) != 1) continue;
    return complete_column(a, c) * UnimodularMatrix::T(e(rng));
  }
}

UnimodularMatrix random_member(std::mt19937_64& rng, const GroupSpec& spec) {
  for (;;) {
    UnimodularMatrix g = random_sl2(rng, 60);
    if (in_group(spec, g)) return g;
  }
}

std::vector<GroupSpec> level_set() {
  std::vector<GroupSpec> out;
  for (long n : {1, 5, 7, 9, 11, 13, 23, 25}) out.push_back(make_spec(Family::Gamma0, n));
  for (long n : {5, 7, 11, 13}) out.push_back(make_spec(Family::Gamma1, n));
  return out;
}

VecZ cusp_vector(const SymbolSpace& s, std::size_t a, std::size_t b) {
  VecZ v = VecZ::Zero(static_cast<Index>(s.cusps().size()));
  v(b) += 1;
  v(a) -= 1;
  return v;
}

// Index of phi(Z[cosets]^U) + Z (1/d sum e_c [c]) inside Z[C]; computed from the
// cusp and coset tables only, without the symbol presentation.
Integer manin_index_oracle(const SymbolSpace& s) {
  const CosetTable& tab = s.cosets();
  const CuspTable& cusps = s.cusps();
  const Index c = static_cast<Index>(cusps.size());
  std::vector<VecZ> rows;
  for (std::size_t i = 0; i < tab.size(); ++i) {
    std::size_t j = tab.next(i, Generator::U), k = tab.next(j, Generator::U);
    if (i != std::min({i, j, k})) continue;
    VecZ r = VecZ::Zero(c);
    if (i == j) {
      r(cusps.cusp_of(i)) += 1;
    } else {
      for (std::size_t x : {i, j, k}) r(cusps.cusp_of(x)) += 1;
    }
    rows.push_back(r);
  }
  VecZ unit(c);
  for (Index k = 0; k < c; ++k) unit(k) = cusps[k].width / cusps.d_gamma();
  rows.push_back(unit);
  MatZ m(static_cast<Index>(rows.size()), c);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i].transpose();
  auto idx = sublattice_index(MatZ::Identity(c, c), m);
  REQUIRE(idx.has_value());
  return *idx;
}

}  // namespace

TEST_CASE("ranks") {
  CHECK(build_space(make_spec(Family::FullSL2, 1)).rank() == 0);
  CHECK(build_space(make_spec(Family::Gamma0, 11)).rank() == 4);
  CHECK(build_space(make_spec(Family::Gamma0, 7)).rank() == 2);
  for (long n = 1; n <= 30; ++n) {
    for (Family f : {Family::Gamma0, Family::Gamma1}) {
      if (f == Family::Gamma1 && n > 16) continue;
      SymbolSpace s = build_space(make_spec(f, n));
      const auto& inv = s.invariants();
      CHECK(s.rank() == 2 * inv.genus + 2 * (inv.cusps - 1));
      CHECK(s.classical_rank() == 2 * inv.genus + inv.cusps - 1);
    }
  }
}

TEST_CASE("reduce_pair examples") {
  SymbolSpace s = build_space(make_spec(Family::Gamma0, 11));
  const UnimodularMatrix id;
  std::size_t idc = s.cosets().index_of(id);
  CHECK(is_zero(reduce_pair(s, UnimodularMatrix::S(), UnimodularMatrix::S())));
  CHECK(reduce_pair(s, id, UnimodularMatrix::T(5)) == VecZ(Integer(5) * s.generator_image(s.cusp_gen(0))));
  CHECK(reduce_pair(s, id, UnimodularMatrix::S()) == s.generator_image(s.manin_gen(idc)));
}

TEST_CASE("presentation relations hold in the image") {
  for (const GroupSpec& spec : level_set()) {
    SymbolSpace s = build_space(spec);
    const CosetTable& tab = s.cosets();
    for (std::size_t i = 0; i < tab.size(); ++i) {
      VecZ two = s.generator_image(i) + s.generator_image(tab.next(i, Generator::S));
      CHECK(is_zero(two));
      std::size_t j = tab.next(i, Generator::U), k = tab.next(j, Generator::U);
      VecZ manin = s.generator_image(i) + s.generator_image(j) + s.generator_image(k);
      VecZ cusp = VecZ::Zero(s.rank());
      for (std::size_t x : {i, j, k}) cusp += s.generator_image(s.cusp_gen(s.cusps().cusp_of(x)));
      CHECK(manin == cusp);
    }
    VecZ total = VecZ::Zero(s.rank());
    for (std::size_t c = 0; c < s.cusps().size(); ++c)
      total += Integer(s.cusps()[c].width) * s.generator_image(s.cusp_gen(c));
    CHECK(is_zero(total));
    // Generators evaluate to their own images.
    for (std::size_t gen = 0; gen < s.num_generators(); ++gen) {
      auto [g, h] = s.generator_pair(gen);
      CHECK(reduce_pair(s, g, h) == s.generator_image(gen));
    }
  }
}

TEST_CASE("reduce_pair is a Gamma-invariant cocycle") {
  std::mt19937_64 rng(1);
  for (auto spec : {make_spec(Family::Gamma0, 11), make_spec(Family::Gamma1, 7), make_spec(Family::Gamma0, 25)}) {
    SymbolSpace s = build_space(spec);
    for (int t = 0; t < 500; ++t) {
      UnimodularMatrix a = random_sl2(rng, 1000), b = random_sl2(rng, 1000), c = random_sl2(rng, 1000);
      VecZ ab = reduce_pair(s, a, b), bc = reduce_pair(s, b, c), ac = reduce_pair(s, a, c);
      REQUIRE(ac == VecZ(ab + bc));
      if (t % 5 == 0) {
        UnimodularMatrix gam = random_member(rng, spec);
        CHECK(reduce_pair(s, gam * a, gam * b) == ab);
        CHECK(reduce_pair(s, -a, b) == ab);
      }
    }
  }
}

TEST_CASE("reduce_pair_rational") {
  SymbolSpace s = build_space(make_spec(Family::Gamma0, 11));
  Mat2Q id = Mat2Q::Identity();
  CHECK(is_zero(reduce_pair_rational(s, id, id)));
  Mat2Q half;
  half << 1, 1, 0, 2;
  VecQ expect = s.generator_image(s.cusp_gen(0)).cast<Rational>() / Rational(2);
  CHECK(reduce_pair_rational(s, id, half) == expect);

  std::mt19937_64 rng(9);
  for (int t = 0; t < 100; ++t) {
    UnimodularMatrix a = random_sl2(rng, 500), b = random_sl2(rng, 500);
    CHECK(reduce_pair_rational(s, to_rational(a), to_rational(b)) == reduce_pair(s, a, b).cast<Rational>());
    // Scalars and upper-triangular right factors.
    Mat2Q up;
    up << 3, 5, 0, 7;
    Mat2Q ga = to_rational(a);
    VecQ shifted = reduce_pair_rational(s, ga, ga * up);
    VecQ cusp = reduce_pair(s, a, a * UnimodularMatrix::T()).cast<Rational>() * Rational(5, 7);
    CHECK(shifted == cusp);
    Mat2Q scaled = ga * Rational(-2, 3);
    CHECK(reduce_pair_rational(s, scaled, to_rational(b) * Rational(5)) == reduce_pair(s, a, b).cast<Rational>());
    Mat2Q c = to_rational(random_sl2(rng, 40)) * up;
    VecQ lhs = reduce_pair_rational(s, ga, c);
    VecQ rhs = reduce_pair_rational(s, ga, to_rational(b)) + reduce_pair_rational(s, to_rational(b), c);
    CHECK(lhs == rhs);
  }
  Mat2Q bad;
  bad << 0, 1, 1, 0;
  CHECK_THROWS_AS(reduce_pair_rational(s, id, bad), InvalidInput);
}

TEST_CASE("boundary map") {
  SymbolSpace s = build_space(make_spec(Family::Gamma0, 11));
  VecZ b = boundary(s, reduce_pair(s, UnimodularMatrix(), UnimodularMatrix::S()));
  CHECK(b == cusp_vector(s, 0, 1));
  for (std::size_t c = 0; c < s.cusps().size(); ++c)
    CHECK(is_zero(boundary(s, s.generator_image(s.cusp_gen(c)))));
  CHECK(is_zero(boundary(s, VecZ(VecZ::Zero(s.rank())))));

  std::mt19937_64 rng(2);
  for (auto spec : level_set()) {
    SymbolSpace sp = build_space(spec);
    for (int t = 0; t < 50; ++t) {
      UnimodularMatrix g = random_sl2(rng, 300), h = random_sl2(rng, 300);
      VecZ d = boundary(sp, reduce_pair(sp, g, h));
      CHECK(d.sum() == 0);
      CHECK(d == cusp_vector(sp, sp.cusps().cusp_of(sp.cosets(), g), sp.cusps().cusp_of(sp.cosets(), h)));
    }
  }
}

TEST_CASE("pi agrees with continued-fraction classical symbols") {
  std::mt19937_64 rng(3);
  for (auto spec : level_set()) {
    SymbolSpace s = build_space(spec);
    for (std::size_t c = 0; c < s.cusps().size(); ++c)
      CHECK(is_zero(pi_classical(s, s.generator_image(s.cusp_gen(c)))));
    for (std::size_t i = 0; i < s.cosets().size(); ++i)
      CHECK(pi_classical(s, s.generator_image(i)) == VecZ(s.classical().project.col(i)));
    for (int t = 0; t < 40; ++t) {
      UnimodularMatrix g = random_sl2(rng, 10000), h = random_sl2(rng, 10000);
      VecZ direct = classical_symbol(s, cusp_of_matrix(g), cusp_of_matrix(h));
      CHECK(pi_classical(s, reduce_pair(s, g, h)) == direct);
    }
  }
}

TEST_CASE("exact sequence and cusp lattice") {
  for (auto spec : level_set()) {
    SymbolSpace s = build_space(spec);
    auto rep = exact_sequence_check(s);
    CHECK(rep.holds);
    CHECK(rep.kernel_rank == static_cast<Index>(s.cusps().size()) - 1);
    if (spec.family == Family::Gamma0 && (spec.level == 5 || spec.level == 7 || spec.level == 11 ||
                                          spec.level == 13 || spec.level == 23)) {
      CHECK(rep.kernel_rank == 1);
      CHECK(rep.coker_torsion.empty());
    }
  }
}

TEST_CASE("homology lattice index in ker(boundary)") {
  for (auto spec : level_set()) {
    SymbolSpace s = build_space(spec);
    MatZ ker = boundary_kernel(s);
    MatZ h = homology_sublattice(s);
    auto idx = sublattice_index(ker, h);
    Integer expect = 1;
    for (auto& c : s.cusps().classes()) expect *= c.width;
    expect /= s.cusps().d_gamma();
    REQUIRE(idx.has_value());
    CHECK(*idx == expect);
  }
  auto idx11 = sublattice_index(boundary_kernel(build_space(make_spec(Family::Gamma0, 11))),
                                homology_sublattice(build_space(make_spec(Family::Gamma0, 11))));
  CHECK(*idx11 == 11);
  SymbolSpace full = build_space(make_spec(Family::FullSL2, 1));
  CHECK(homology_sublattice(full).cols() == 0);
}

TEST_CASE("Manin index against the cusp-divisor oracle") {
  // Index 1 exactly for Gamma0(p^n) with p = 1 mod 3; otherwise 3.
  struct Case {
    Family f;
    long n;
    long expect;
  };
  const Case cases[] = {{Family::Gamma0, 5, 3},  {Family::Gamma0, 7, 1},  {Family::Gamma0, 11, 3},
                        {Family::Gamma0, 13, 1}, {Family::Gamma0, 25, 3}, {Family::Gamma0, 49, 1},
                        {Family::Gamma1, 5, 3},  {Family::Gamma1, 7, 3},  {Family::Gamma1, 11, 3},
                        {Family::Gamma1, 13, 3}, {Family::Gamma1, 25, 3}};
  for (auto& c : cases) {
    SymbolSpace s = build_space(make_spec(c.f, c.n));
    auto idx = manin_index(s);
    REQUIRE(idx.has_value());
    CHECK(*idx == manin_index_oracle(s));
    CHECK(*idx == c.expect);
  }
  CHECK(*manin_index(build_space(make_spec(Family::FullSL2, 1))) == 1);
}
