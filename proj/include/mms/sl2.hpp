#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mms/numeric.hpp"

namespace mms {

using Mat2Z = Eigen::Matrix<Integer, 2, 2>;
using Mat2Q = Eigen::Matrix<Rational, 2, 2>;

// Element of SL2(Z).
class UnimodularMatrix {
 public:
  UnimodularMatrix();
  UnimodularMatrix(Integer a, Integer b, Integer c, Integer d);  // throws InvalidInput unless ad - bc = 1
  explicit UnimodularMatrix(const Mat2Z& m);

  static UnimodularMatrix S();
  static UnimodularMatrix T(long k = 1);
  static UnimodularMatrix U();
  static UnimodularMatrix tau();

  const Integer& a() const { return m_(0, 0); }
  const Integer& b() const { return m_(0, 1); }
  const Integer& c() const { return m_(1, 0); }
  const Integer& d() const { return m_(1, 1); }
  const Mat2Z& matrix() const { return m_; }

  UnimodularMatrix operator*(const UnimodularMatrix& o) const;
  UnimodularMatrix operator-() const;
  UnimodularMatrix inverse() const;
  // ((a,-b),(-c,d)), i.e. conjugation by diag(1,-1).
  UnimodularMatrix bar() const;

  bool operator==(const UnimodularMatrix& o) const { return m_ == o.m_; }
  bool operator!=(const UnimodularMatrix& o) const { return !(*this == o); }

  std::string str() const;

 private:
  struct Unchecked {};
  UnimodularMatrix(const Mat2Z& m, Unchecked) : m_(m) {}
  Mat2Z m_;
};

enum class Family { Gamma0, Gamma1, FullSL2 };

struct GroupSpec {
  Family family = Family::FullSL2;
  long level = 1;
};

GroupSpec make_spec(Family family, long level);  // validates
std::string family_name(Family f);
Family parse_family(const std::string& name);

bool in_group(const GroupSpec& spec, const UnimodularMatrix& g);

enum class Generator { S, T, TInv, U, U2 };

// g = sign * gamma * rep(index), gamma in the group.
struct CosetMove {
  std::size_t index = 0;
  UnimodularMatrix gamma;
  int sign = 1;
};

// Right cosets Gamma \ PSL2(Z), keyed by the bottom row modulo N.
class CosetTable {
 public:
  explicit CosetTable(const GroupSpec& spec);

  const GroupSpec& spec() const { return spec_; }
  std::size_t size() const { return reps_.size(); }
  const UnimodularMatrix& rep(std::size_t i) const { return reps_[i]; }
  const std::vector<UnimodularMatrix>& reps() const { return reps_; }
  // Normalized bottom-row key of coset i.
  std::pair<long, long> key(std::size_t i) const { return keys_[i]; }

  // Coset index of any matrix with bottom row congruent to (c, d).
  std::size_t index_of_row(long c, long d) const;
  std::size_t index_of(const UnimodularMatrix& g) const;

  CosetMove locate(const UnimodularMatrix& g) const;
  // Stored action of a generator on a coset, with witness.
  const CosetMove& act(std::size_t i, Generator g) const;
  std::size_t next(std::size_t i, Generator g) const { return act(i, g).index; }

 private:
  std::size_t lookup(long c, long d) const;

  GroupSpec spec_;
  long n_;
  std::vector<UnimodularMatrix> reps_;
  std::vector<std::pair<long, long>> keys_;
  std::vector<long> table_;  // N*N entries, -1 where gcd(c, d, N) > 1
  std::array<std::vector<CosetMove>, 5> action_;
};

CosetTable enumerate_cosets(const GroupSpec& spec);
CosetMove coset_of(const CosetTable& table, const UnimodularMatrix& g);
CosetMove act_right(const CosetTable& table, std::size_t idx, Generator g);

UnimodularMatrix generator_matrix(Generator g);

// A point of P^1(Q); q = 0 means infinity (p = 1).
struct Cusp {
  Integer p;
  Integer q;
  bool is_infinity() const { return q == 0; }
  std::string str() const;
};

struct CuspClass {
  Cusp rep;
  long width = 0;
  std::vector<std::size_t> cosets;
};

class CuspTable {
 public:
  CuspTable(const GroupSpec& spec, const CosetTable& table);

  std::size_t size() const { return classes_.size(); }
  const CuspClass& operator[](std::size_t i) const { return classes_[i]; }
  const std::vector<CuspClass>& classes() const { return classes_; }
  long d_gamma() const { return d_gamma_; }
  // Class of Gamma * rep(idx) * infinity.
  std::size_t cusp_of(std::size_t coset) const { return cusp_of_[coset]; }
  std::size_t cusp_of(const CosetTable& table, const UnimodularMatrix& g) const {
    return cusp_of_[table.index_of(g)];
  }
  long lcm_width() const;

 private:
  std::vector<CuspClass> classes_;
  std::vector<std::size_t> cusp_of_;
  long d_gamma_ = 1;
};

CuspTable cusp_table(const GroupSpec& spec, const CosetTable& table);

// Standard congruence criteria for Gamma0(N) / Gamma1(N).
bool cusps_equivalent(const GroupSpec& spec, const Cusp& x, const Cusp& y);

struct WordLetter {
  bool is_s = false;
  Integer power;  // exponent of T when !is_s
};

struct Word {
  std::vector<WordLetter> letters;
  int sign = 1;
};

// sign * (product of letters) == g.
Word stword_decompose(const UnimodularMatrix& g);
UnimodularMatrix word_product(const Word& w);

// Counts entering the genus formula.
struct GroupInvariants {
  long index = 0;    // [PSL2(Z) : image of Gamma]
  long cusps = 0;
  long elliptic2 = 0;  // cosets fixed by S
  long elliptic3 = 0;  // cosets fixed by U
  long genus = 0;
};

GroupInvariants group_invariants(const CosetTable& table, const CuspTable& cusps);

// x with a x = 1 mod n (gcd(a, n) = 1).
long inverse_mod(long a, long n);
// g = ((a, b), (c, d)) in SL2(Z) with first column (a, c), gcd(a, c) = 1.
UnimodularMatrix complete_column(const Integer& a, const Integer& c);

}  // namespace mms
