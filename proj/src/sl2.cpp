#include "mms/sl2.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mms/errors.hpp"

namespace mms {

namespace {

long residue(const Integer& x, long n) { return static_cast<long>(mpz_fdiv_ui(x.get_mpz_t(), n)); }

Mat2Z make2(const Integer& a, const Integer& b, const Integer& c, const Integer& d) {
  Mat2Z m;
  m << a, b, c, d;
  return m;
}

}  // namespace

UnimodularMatrix::UnimodularMatrix() : m_(make2(1, 0, 0, 1)) {}

UnimodularMatrix::UnimodularMatrix(Integer a, Integer b, Integer c, Integer d) : m_(make2(a, b, c, d)) {
  if (a * d - b * c != 1) throw InvalidInput("matrix does not have determinant 1");
}

UnimodularMatrix::UnimodularMatrix(const Mat2Z& m) : m_(m) {
  if (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) != 1) throw InvalidInput("matrix does not have determinant 1");
}

UnimodularMatrix UnimodularMatrix::S() { return {0, -1, 1, 0}; }
UnimodularMatrix UnimodularMatrix::T(long k) { return {1, k, 0, 1}; }
UnimodularMatrix UnimodularMatrix::U() { return {1, -1, 1, 0}; }
UnimodularMatrix UnimodularMatrix::tau() { return S() * T(); }

UnimodularMatrix UnimodularMatrix::operator*(const UnimodularMatrix& o) const {
  const Mat2Z& x = m_;
  const Mat2Z& y = o.m_;
  Mat2Z r;
  r(0, 0) = x(0, 0) * y(0, 0) + x(0, 1) * y(1, 0);
  r(0, 1) = x(0, 0) * y(0, 1) + x(0, 1) * y(1, 1);
  r(1, 0) = x(1, 0) * y(0, 0) + x(1, 1) * y(1, 0);
  r(1, 1) = x(1, 0) * y(0, 1) + x(1, 1) * y(1, 1);
  return UnimodularMatrix(r, Unchecked{});
}

UnimodularMatrix UnimodularMatrix::operator-() const { return UnimodularMatrix(Mat2Z(-m_), Unchecked{}); }

UnimodularMatrix UnimodularMatrix::inverse() const {
  return UnimodularMatrix(make2(d(), -b(), -c(), a()), Unchecked{});
}

UnimodularMatrix UnimodularMatrix::bar() const {
  return UnimodularMatrix(make2(a(), -b(), -c(), d()), Unchecked{});
}

std::string UnimodularMatrix::str() const {
  std::ostringstream os;
  os << "((" << a() << "," << b() << "),(" << c() << "," << d() << "))";
  return os.str();
}

GroupSpec make_spec(Family family, long level) {
  if (level < 1) throw InvalidSpec("level must be positive");
  if (family == Family::FullSL2 && level != 1) throw InvalidSpec("FullSL2 requires level 1");
  return {family, level};
}

std::string family_name(Family f) {
  switch (f) {
    case Family::Gamma0: return "gamma0";
    case Family::Gamma1: return "gamma1";
    case Family::FullSL2: return "full";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "gamma0" || name == "Gamma0") return Family::Gamma0;
  if (name == "gamma1" || name == "Gamma1") return Family::Gamma1;
  if (name == "full" || name == "FullSL2") return Family::FullSL2;
  throw InvalidSpec("unknown family: " + name);
}

bool in_group(const GroupSpec& spec, const UnimodularMatrix& g) {
  const long n = spec.level;
  switch (spec.family) {
    case Family::FullSL2: return true;
    case Family::Gamma0: return residue(g.c(), n) == 0;
    case Family::Gamma1: return residue(g.c(), n) == 0 && residue(g.d(), n) == 1 % n;
  }
  return false;
}

UnimodularMatrix generator_matrix(Generator g) {
  switch (g) {
    case Generator::S: return UnimodularMatrix::S();
    case Generator::T: return UnimodularMatrix::T(1);
    case Generator::TInv: return UnimodularMatrix::T(-1);
    case Generator::U: return UnimodularMatrix::U();
    case Generator::U2: return UnimodularMatrix::U() * UnimodularMatrix::U();
  }
  return {};
}

long inverse_mod(long a, long n) {
  Integer r;
  if (n == 1) return 0;
  if (!mpz_invert(r.get_mpz_t(), Integer(mod(a, n)).get_mpz_t(), Integer(n).get_mpz_t()))
    throw InvalidInput("not invertible modulo n");
  return r.get_si();
}

UnimodularMatrix complete_column(const Integer& a, const Integer& c) {
  Integer g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
  if (g != 1) throw InvalidInput("column is not primitive");
  return UnimodularMatrix(a, -t, c, s);
}

CosetTable::CosetTable(const GroupSpec& spec) : spec_(make_spec(spec.family, spec.level)), n_(spec.level) {
  const long n = n_;
  std::vector<long> units;
  for (long u = 1; u <= n; ++u)
    if (std::gcd(u, n) == 1) units.push_back(u % n);
  // Normalized key of every admissible bottom row.
  std::vector<std::pair<long, long>> norm(n * n, {-1, -1});
  for (long c = 0; c < n; ++c) {
    for (long d = 0; d < n; ++d) {
      if (std::gcd(std::gcd(c, d), n) != 1) continue;
      std::pair<long, long> best{c, d};
      if (spec_.family == Family::Gamma0) {
        for (long u : units) best = std::min(best, {u * c % n, u * d % n});
      } else if (spec_.family == Family::Gamma1) {
        best = std::min(best, {mod(-c, n), mod(-d, n)});
      }
      norm[c * n + d] = best;
    }
  }
  std::vector<std::pair<long, long>> keys;
  for (auto& k : norm)
    if (k.first >= 0) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  keys_ = keys;
  table_.assign(n * n, -1);
  for (long i = 0; i < n * n; ++i) {
    if (norm[i].first < 0) continue;
    table_[i] = std::lower_bound(keys.begin(), keys.end(), norm[i]) - keys.begin();
  }
  const std::size_t identity = lookup(0, 1 % n);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i == identity) {
      reps_.emplace_back();
      continue;
    }
    auto [c, d] = keys[i];
    long cc = c == 0 ? n : c;
    long dd = d;
    while (std::gcd(cc, dd) != 1) dd += n;
    Integer g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), Integer(dd).get_mpz_t(), Integer(cc).get_mpz_t());
    // s*dd + t*cc = 1, so ((s, -t), (cc, dd)) has determinant 1.
    reps_.emplace_back(s, -t, Integer(cc), Integer(dd));
  }
  const Generator gens[] = {Generator::S, Generator::T, Generator::TInv, Generator::U, Generator::U2};
  for (Generator gen : gens) {
    auto& tab = action_[static_cast<int>(gen)];
    UnimodularMatrix m = generator_matrix(gen);
    for (std::size_t i = 0; i < reps_.size(); ++i) tab.push_back(locate(reps_[i] * m));
  }
}

std::size_t CosetTable::lookup(long c, long d) const {
  long v = table_[mod(c, n_) * n_ + mod(d, n_)];
  if (v < 0) throw InvalidInput("bottom row is not primitive modulo N");
  return static_cast<std::size_t>(v);
}

std::size_t CosetTable::index_of_row(long c, long d) const { return lookup(c, d); }

std::size_t CosetTable::index_of(const UnimodularMatrix& g) const {
  return lookup(residue(g.c(), n_), residue(g.d(), n_));
}

CosetMove CosetTable::locate(const UnimodularMatrix& g) const {
  CosetMove mv;
  mv.index = index_of(g);
  UnimodularMatrix gamma = g * reps_[mv.index].inverse();
  const bool plus = in_group(spec_, gamma);
  const bool minus = in_group(spec_, -gamma);
  int s = 1;
  if (plus && minus) {
    const Integer& key = gamma.d() != 0 ? gamma.d() : gamma.c();
    s = key < 0 ? -1 : 1;
  } else if (!plus) {
    if (!minus) throw Error("coset lookup produced a witness outside the group");
    s = -1;
  }
  mv.gamma = s > 0 ? gamma : -gamma;
  mv.sign = s;
  return mv;
}

const CosetMove& CosetTable::act(std::size_t i, Generator g) const { return action_[static_cast<int>(g)][i]; }

CosetTable enumerate_cosets(const GroupSpec& spec) { return CosetTable(spec); }

CosetMove coset_of(const CosetTable& table, const UnimodularMatrix& g) { return table.locate(g); }

CosetMove act_right(const CosetTable& table, std::size_t idx, Generator g) { return table.act(idx, g); }

std::string Cusp::str() const {
  if (q == 0) return "oo";
  if (q == 1) return p.get_str();
  return p.get_str() + "/" + q.get_str();
}

CuspTable::CuspTable(const GroupSpec& spec, const CosetTable& table) {
  const std::size_t n = table.size();
  const std::size_t none = static_cast<std::size_t>(-1);
  // T-orbits.
  std::vector<std::size_t> orbit(n, none);
  std::vector<std::vector<std::size_t>> orbits;
  for (std::size_t i = 0; i < n; ++i) {
    if (orbit[i] != none) continue;
    std::vector<std::size_t> members;
    for (std::size_t j = i; orbit[j] == none; j = table.next(j, Generator::T)) {
      orbit[j] = orbits.size();
      members.push_back(j);
    }
    orbits.push_back(std::move(members));
  }
  // Representatives: infinity first, then by (denominator, numerator).
  std::vector<std::size_t> order;
  std::vector<Cusp> reps(orbits.size());
  std::vector<bool> seen(orbits.size(), false);
  auto claim = [&](const Cusp& x, std::size_t o) {
    if (seen[o]) return;
    seen[o] = true;
    reps[o] = x;
    order.push_back(o);
  };
  claim({1, 0}, orbit[table.index_of(UnimodularMatrix())]);
  const long limit = 16 * spec.level * spec.level + 16;
  for (long q = 1; order.size() < orbits.size(); ++q) {
    if (q > limit) throw Error("cusp representative search did not terminate");
    for (long p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      claim({p, q}, orbit[table.index_of(complete_column(p, q))]);
    }
  }
  std::vector<std::size_t> position(orbits.size());
  for (std::size_t k = 0; k < order.size(); ++k) position[order[k]] = k;
  cusp_of_.resize(n);
  for (std::size_t i = 0; i < n; ++i) cusp_of_[i] = position[orbit[i]];
  long g = 0;
  for (std::size_t o : order) {
    CuspClass cls;
    cls.rep = reps[o];
    cls.cosets = orbits[o];
    cls.width = static_cast<long>(orbits[o].size());
    g = std::gcd(g, cls.width);
    classes_.push_back(std::move(cls));
  }
  d_gamma_ = g;
}

long CuspTable::lcm_width() const {
  long l = 1;
  for (auto& c : classes_) l = std::lcm(l, c.width);
  return l;
}

CuspTable cusp_table(const GroupSpec& spec, const CosetTable& table) { return CuspTable(spec, table); }

bool cusps_equivalent(const GroupSpec& spec, const Cusp& x, const Cusp& y) {
  const long n = spec.level;
  if (spec.family == Family::FullSL2 || n == 1) return true;
  auto rp = [&](const Integer& v, long m) { return m == 0 ? v.get_si() : residue(v, m); };
  if (spec.family == Family::Gamma1) {
    const long g = std::gcd(rp(x.q, n), n);
    for (int s : {1, -1}) {
      if (mod(s * rp(x.q, n) - rp(y.q, n), n) != 0) continue;
      if (mod(s * rp(x.p, g) - rp(y.p, g), g) == 0) return true;
    }
    return false;
  }
  // Gamma0: s1 q2 = s2 q1 modulo gcd(q1 q2, N), p_j s_j = 1 modulo q_j.
  auto inv = [](const Cusp& z) -> Integer {
    if (z.q == 0) return z.p;
    if (z.q == 1) return 0;
    Integer r;
    mpz_invert(r.get_mpz_t(), z.p.get_mpz_t(), z.q.get_mpz_t());
    return r;
  };
  Integer m;
  Integer qq = x.q * y.q;
  mpz_gcd_ui(m.get_mpz_t(), qq.get_mpz_t(), n);
  Integer diff = inv(x) * y.q - inv(y) * x.q;
  return mpz_divisible_p(diff.get_mpz_t(), m.get_mpz_t());
}

Word stword_decompose(const UnimodularMatrix& g) {
  Integer c = g.c(), d = g.d();
  Integer a = g.a(), b = g.b();
  std::vector<WordLetter> applied;
  // Right-multiply by T^k then S until the bottom-left entry vanishes.
  while (c != 0) {
    Integer ac = abs(c);
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), d.get_mpz_t(), ac.get_mpz_t());
    if (2 * r > ac) r -= ac;
    Integer k;
    mpz_divexact(k.get_mpz_t(), Integer(r - d).get_mpz_t(), c.get_mpz_t());
    if (k != 0) {
      applied.push_back({false, k});
      b += k * a;
      d = r;
    }
    applied.push_back({true, 0});
    Integer na = b, nb = -a, nc = d, nd = -c;
    a = na;
    b = nb;
    c = nc;
    d = nd;
  }
  // Now g * W = +-T^m with W the product of the applied letters.
  Word w;
  Integer m = a * b;
  if (m != 0) w.letters.push_back({false, m});
  for (auto it = applied.rbegin(); it != applied.rend(); ++it) {
    if (it->is_s)
      w.letters.push_back({true, 0});
    else
      w.letters.push_back({false, -it->power});
  }
  UnimodularMatrix p = word_product(w);
  if (p == g) {
    w.sign = 1;
  } else if (-p == g) {
    w.sign = -1;
  } else {
    throw Error("stword_decompose: product check failed");
  }
  return w;
}

UnimodularMatrix word_product(const Word& w) {
  UnimodularMatrix p;
  for (auto& l : w.letters) {
    if (l.is_s)
      p = p * UnimodularMatrix::S();
    else
      p = p * UnimodularMatrix(1, l.power, 0, 1);
  }
  return w.sign > 0 ? p : -p;
}

GroupInvariants group_invariants(const CosetTable& table, const CuspTable& cusps) {
  GroupInvariants inv;
  inv.index = static_cast<long>(table.size());
  inv.cusps = static_cast<long>(cusps.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.next(i, Generator::S) == i) ++inv.elliptic2;
    if (table.next(i, Generator::U) == i) ++inv.elliptic3;
  }
  long twelve_g = 12 + inv.index - 3 * inv.elliptic2 - 4 * inv.elliptic3 - 6 * inv.cusps;
  if (twelve_g % 12 != 0 || twelve_g < 0) throw Error("genus formula gave a non-integer");
  inv.genus = twelve_g / 12;
  return inv;
}

}  // namespace mms
