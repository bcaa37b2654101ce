#include "mms/lattice.hpp"

#include <algorithm>
#include <utility>

#include "mms/errors.hpp"

namespace mms {

namespace {

void addmul(Integer& dst, const Integer& k, const Integer& src) {
  mpz_addmul(dst.get_mpz_t(), k.get_mpz_t(), src.get_mpz_t());
}

bool abs_less(const Integer& x, const Integer& y) { return mpz_cmpabs(x.get_mpz_t(), y.get_mpz_t()) < 0; }

bool is_unit(const Integer& x) { return mpz_cmpabs_ui(x.get_mpz_t(), 1) == 0; }

// Diagonalizes a in place.  Optional transforms keep A = row_inv * D * col_inv and
// col = col_inv^{-1}.  Unit pivots are preferred to limit fill-in; zero rows are
// parked at the bottom so that they are never rescanned.
class SmithEngine {
 public:
  SmithEngine(MatZ m, bool want_row_inv, bool want_col, bool want_col_inv)
      : a(std::move(m)), want_row_inv_(want_row_inv), want_col_(want_col), want_col_inv_(want_col_inv) {
    rows_ = a.rows();
    cols_ = a.cols();
    active_rows_ = rows_;
    if (want_row_inv_) row_inv = MatZ::Identity(rows_, rows_);
    if (want_col_) col = MatZ::Identity(cols_, cols_);
    if (want_col_inv_) col_inv = MatZ::Identity(cols_, cols_);
  }

  Index run() {
    Index t = 0;
    while (t < std::min(active_rows_, cols_)) {
      if (!place_pivot(t)) break;
      clear_cross(t);
      ++t;
    }
    rank_ = t;
    for (Index i = 0; i < rank_; ++i) {
      for (Index j = i + 1; j < rank_; ++j) {
        if (!mpz_divisible_p(a(j, j).get_mpz_t(), a(i, i).get_mpz_t())) {
          add_row(i, j, Integer(1), i);
          clear_cross(i);
        }
      }
    }
    for (Index i = 0; i < rank_; ++i)
      if (a(i, i) < 0) negate_row(i);
    return rank_;
  }

  MatZ a, row_inv, col, col_inv;

 private:
  // Finds a pivot in the trailing block and moves it to (t, t).
  bool place_pivot(Index t) {
    Index best_r = -1, best_c = -1;
    Index i = t;
    while (i < active_rows_) {
      bool any = false;
      for (Index j = t; j < cols_; ++j) {
        const Integer& x = a(i, j);
        if (x == 0) continue;
        any = true;
        if (is_unit(x)) {
          best_r = i;
          best_c = j;
          break;
        }
        if (best_r < 0 || abs_less(x, a(best_r, best_c))) {
          best_r = i;
          best_c = j;
        }
      }
      if (best_r == i && is_unit(a(best_r, best_c))) break;
      if (!any) {
        --active_rows_;
        if (i != active_rows_) swap_rows(i, active_rows_);
        continue;
      }
      ++i;
    }
    if (best_r < 0) return false;
    if (best_r != t) swap_rows(t, best_r);
    if (best_c != t) swap_cols(t, best_c);
    return true;
  }

  // Euclid on row t and column t until only the pivot survives.
  void clear_cross(Index t) {
    for (;;) {
      Index smallest = -1;
      for (Index i = t + 1; i < active_rows_; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = floor_div(a(i, t), a(t, t));
        if (q != 0) add_row(i, t, -q, t);
        if (a(i, t) != 0 && (smallest < 0 || abs_less(a(i, t), a(smallest, t)))) smallest = i;
      }
      if (smallest >= 0) {
        swap_rows(t, smallest);
        continue;
      }
      for (Index j = t + 1; j < cols_; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = floor_div(a(t, j), a(t, t));
        if (q != 0) add_col(j, t, -q, t);
        if (a(t, j) != 0 && (smallest < 0 || abs_less(a(t, j), a(t, smallest)))) smallest = j;
      }
      if (smallest >= 0) {
        swap_cols(t, smallest);
        continue;
      }
      break;
    }
    if (a(t, t) < 0) negate_row(t);
  }

  // row dst += k * row src (entries left of `from` are zero in src).
  void add_row(Index dst, Index src, const Integer& k, Index from) {
    for (Index j = from; j < cols_; ++j)
      if (a(src, j) != 0) addmul(a(dst, j), k, a(src, j));
    if (want_row_inv_) {
      Integer mk = -k;
      for (Index i = 0; i < rows_; ++i)
        if (row_inv(i, dst) != 0) addmul(row_inv(i, src), mk, row_inv(i, dst));
    }
  }

  // col dst += k * col src.
  void add_col(Index dst, Index src, const Integer& k, Index from) {
    for (Index i = from; i < active_rows_; ++i)
      if (a(i, src) != 0) addmul(a(i, dst), k, a(i, src));
    if (want_col_) {
      for (Index i = 0; i < cols_; ++i)
        if (col(i, src) != 0) addmul(col(i, dst), k, col(i, src));
    }
    if (want_col_inv_) {
      Integer mk = -k;
      for (Index j = 0; j < cols_; ++j)
        if (col_inv(dst, j) != 0) addmul(col_inv(src, j), mk, col_inv(dst, j));
    }
  }

  void swap_rows(Index i, Index j) {
    for (Index c = 0; c < cols_; ++c) mpz_swap(a(i, c).get_mpz_t(), a(j, c).get_mpz_t());
    if (want_row_inv_) row_inv.col(i).swap(row_inv.col(j));
  }

  void swap_cols(Index i, Index j) {
    a.col(i).swap(a.col(j));
    if (want_col_) col.col(i).swap(col.col(j));
    if (want_col_inv_) {
      for (Index c = 0; c < cols_; ++c) mpz_swap(col_inv(i, c).get_mpz_t(), col_inv(j, c).get_mpz_t());
    }
  }

  void negate_row(Index i) {
    for (Index c = 0; c < cols_; ++c) mpz_neg(a(i, c).get_mpz_t(), a(i, c).get_mpz_t());
    if (want_row_inv_) {
      for (Index r = 0; r < rows_; ++r) mpz_neg(row_inv(r, i).get_mpz_t(), row_inv(r, i).get_mpz_t());
    }
  }

  bool want_row_inv_, want_col_, want_col_inv_;
  Index rows_ = 0, cols_ = 0, active_rows_ = 0, rank_ = 0;
};

// Fraction-free (Bareiss) forward elimination; returns pivot (row, col) positions.
std::vector<std::pair<Index, Index>> bareiss(MatZ& m, Index coefficient_cols) {
  std::vector<std::pair<Index, Index>> pivots;
  Integer prev = 1;
  Index r = 0;
  for (Index c = 0; c < coefficient_cols && r < m.rows(); ++c) {
    Index p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r) m.row(p).swap(m.row(r));
    for (Index i = r + 1; i < m.rows(); ++i) {
      for (Index j = c + 1; j < m.cols(); ++j) {
        Integer v = m(r, c) * m(i, j) - m(i, c) * m(r, j);
        mpz_divexact(m(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, c) = 0;
    }
    prev = m(r, c);
    pivots.emplace_back(r, c);
    ++r;
  }
  return pivots;
}

MatZ clear_row_denominators(const MatQ& a) {
  MatZ out(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    Integer l = 1;
    for (Index j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    for (Index j = 0; j < a.cols(); ++j) {
      Rational v = a(i, j) * l;
      out(i, j) = v.get_num();
    }
  }
  return out;
}

// Gauss-Jordan over Q; returns pivot columns.
std::vector<Index> rref(MatQ& m) {
  std::vector<Index> pivots;
  Index r = 0;
  for (Index c = 0; c < m.cols() && r < m.rows(); ++c) {
    Index p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r) m.row(p).swap(m.row(r));
    Rational inv = 1 / m(r, c);
    for (Index j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (Index i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (Index j = c; j < m.cols(); ++j)
        if (m(r, j) != 0) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw InvalidInput("not a rational number: " + text);
  q.canonicalize();
  return q;
}

Integer parse_integer(const std::string& text) {
  Integer z;
  if (z.set_str(text, 10) != 0) throw InvalidInput("not an integer: " + text);
  return z;
}

Integer common_denominator(const MatQ& m) {
  Integer l = 1;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
  return l;
}

Integer common_denominator(const VecQ& v) {
  Integer l = 1;
  for (Index i = 0; i < v.size(); ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v(i).get_den_mpz_t());
  return l;
}

MatZ to_integer(const MatQ& m) {
  MatZ out(m.rows(), m.cols());
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      if (m(i, j).get_den() != 1) throw InvalidInput("matrix is not integral");
      out(i, j) = m(i, j).get_num();
    }
  return out;
}

MatZ multiply(const MatZ& a, const MatZ& b) {
  if (a.cols() != b.rows()) throw InvalidInput("multiply: dimension mismatch");
  MatZ out = MatZ::Zero(a.rows(), b.cols());
  for (Index k = 0; k < a.cols(); ++k) {
    std::vector<Index> nz;
    for (Index j = 0; j < b.cols(); ++j)
      if (b(k, j) != 0) nz.push_back(j);
    if (nz.empty()) continue;
    for (Index i = 0; i < a.rows(); ++i) {
      if (a(i, k) == 0) continue;
      for (Index j : nz) addmul(out(i, j), a(i, k), b(k, j));
    }
  }
  return out;
}

HermiteForm hnf(const MatZ& a) {
  const Index m = a.rows(), n = a.cols();
  MatZ h = a;
  MatZ u = MatZ::Identity(m, m);
  auto row_addmul = [&](Index dst, Index src, const Integer& k) {
    for (Index j = 0; j < n; ++j)
      if (h(src, j) != 0) addmul(h(dst, j), k, h(src, j));
    for (Index j = 0; j < m; ++j)
      if (u(src, j) != 0) addmul(u(dst, j), k, u(src, j));
  };
  Index r = 0;
  for (Index c = 0; c < n && r < m; ++c) {
    for (;;) {
      Index best = -1;
      for (Index i = r; i < m; ++i)
        if (h(i, c) != 0 && (best < 0 || abs_less(h(i, c), h(best, c)))) best = i;
      if (best < 0) break;
      if (best != r) {
        h.row(best).swap(h.row(r));
        u.row(best).swap(u.row(r));
      }
      bool done = true;
      for (Index i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        row_addmul(i, r, -floor_div(h(i, c), h(r, c)));
        if (h(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) {
      h.row(r) = -h.row(r);
      u.row(r) = -u.row(r);
    }
    for (Index i = 0; i < r; ++i) {
      Integer q = floor_div(h(i, c), h(r, c));
      if (q != 0) row_addmul(i, r, -q);
    }
    ++r;
  }
  return {std::move(h), std::move(u)};
}

MatZ hnf_basis(const MatZ& a) {
  const Index m = a.rows(), n = a.cols();
  MatZ h = a;
  Index r = 0;
  for (Index c = 0; c < n && r < m; ++c) {
    for (;;) {
      Index best = -1;
      for (Index i = r; i < m; ++i)
        if (h(i, c) != 0 && (best < 0 || abs_less(h(i, c), h(best, c)))) best = i;
      if (best < 0) break;
      if (best != r) h.row(best).swap(h.row(r));
      bool done = true;
      for (Index i = r + 1; i < m; ++i) {
        if (h(i, c) == 0) continue;
        Integer q = -floor_div(h(i, c), h(r, c));
        for (Index j = c; j < n; ++j)
          if (h(r, j) != 0) addmul(h(i, j), q, h(r, j));
        if (h(i, c) != 0) done = false;
      }
      if (done) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) h.row(r) = -h.row(r);
    for (Index i = 0; i < r; ++i) {
      Integer q = -floor_div(h(i, c), h(r, c));
      if (q == 0) continue;
      for (Index j = c; j < n; ++j)
        if (h(r, j) != 0) addmul(h(i, j), q, h(r, j));
    }
    ++r;
  }
  return h.topRows(r);
}

SmithForm snf(const MatZ& a) {
  SmithEngine e(a, true, false, true);
  e.run();
  return {std::move(e.row_inv), std::move(e.a), std::move(e.col_inv)};
}

std::vector<Integer> elementary_divisors(const MatZ& a) {
  SmithEngine e(a, false, false, false);
  Index r = e.run();
  std::vector<Integer> d;
  for (Index i = 0; i < r; ++i) d.push_back(e.a(i, i));
  return d;
}

Index rank(const MatZ& a) {
  MatZ m = a;
  return static_cast<Index>(bareiss(m, m.cols()).size());
}

Index rank(const MatQ& a) {
  MatZ m = clear_row_denominators(a);
  return static_cast<Index>(bareiss(m, m.cols()).size());
}

MatZ integer_kernel(const MatZ& a) {
  SmithEngine e(a, false, true, false);
  Index r = e.run();
  return e.col.rightCols(a.cols() - r);
}

LatticeQuotient torsion_free_quotient(const MatZ& relations, Index ambient_rank) {
  if (relations.rows() > 0 && relations.cols() != ambient_rank)
    throw InvalidInput("relation matrix width differs from ambient rank");
  LatticeQuotient q;
  q.ambient_rank = ambient_rank;
  q.relations = relations.rows() > 0 ? relations : MatZ(0, ambient_rank);
  SmithEngine e(q.relations, false, true, true);
  Index r = e.run();
  q.basis_rank = ambient_rank - r;
  q.project = e.col.rightCols(q.basis_rank).transpose();
  q.lift = e.col_inv.bottomRows(q.basis_rank).transpose();
  for (Index i = 0; i < r; ++i)
    if (e.a(i, i) != 1) q.torsion.push_back(e.a(i, i));
  if (!(multiply(q.project, q.lift) == MatZ::Identity(q.basis_rank, q.basis_rank)))
    throw Error("torsion_free_quotient: project * lift is not the identity");
  if (q.relations.rows() > 0 && !is_zero(multiply(q.relations, q.project.transpose())))
    throw Error("torsion_free_quotient: projection does not kill the relations");
  return q;
}

std::optional<VecZ> coordinates_in(const MatZ& basis, const VecZ& v) {
  VecZ rest = v;
  VecZ x = VecZ::Zero(basis.rows());
  Index c = 0;
  for (Index i = 0; i < basis.rows(); ++i) {
    while (c < basis.cols() && basis(i, c) == 0) {
      if (rest(c) != 0) return std::nullopt;
      ++c;
    }
    if (!mpz_divisible_p(rest(c).get_mpz_t(), basis(i, c).get_mpz_t())) return std::nullopt;
    mpz_divexact(x(i).get_mpz_t(), rest(c).get_mpz_t(), basis(i, c).get_mpz_t());
    Integer mk = -x(i);
    for (Index j = c; j < basis.cols(); ++j)
      if (basis(i, j) != 0) addmul(rest(j), mk, basis(i, j));
    ++c;
  }
  for (Index j = c; j < rest.size(); ++j)
    if (rest(j) != 0) return std::nullopt;
  return x;
}

std::optional<Integer> sublattice_index(const MatZ& a, const MatZ& b) {
  if (a.cols() != b.cols()) throw InvalidInput("sublattice_index: ambient dimensions differ");
  MatZ basis = hnf_basis(a);
  MatZ coords(b.rows(), basis.rows());
  for (Index i = 0; i < b.rows(); ++i) {
    auto x = coordinates_in(basis, b.row(i).transpose());
    if (!x) throw ContainmentError("sublattice_index: generator not contained in the ambient lattice");
    coords.row(i) = x->transpose();
  }
  if (basis.rows() == 0) return Integer(1);
  MatZ h = hnf_basis(coords);
  if (h.rows() < basis.rows()) return std::nullopt;
  Integer index = 1;
  for (Index i = 0; i < h.rows(); ++i) index *= h(i, i);
  return index;
}

std::optional<VecQ> solve_rational(const MatQ& a, const VecQ& b) {
  if (a.rows() != b.size()) throw InvalidInput("solve_rational: dimension mismatch");
  MatQ aug(a.rows(), a.cols() + 1);
  aug.leftCols(a.cols()) = a;
  aug.col(a.cols()) = b;
  MatZ m = clear_row_denominators(aug);
  auto pivots = bareiss(m, a.cols());
  for (Index i = static_cast<Index>(pivots.size()); i < m.rows(); ++i)
    if (m(i, a.cols()) != 0) return std::nullopt;
  VecQ x = VecQ::Zero(a.cols());
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    auto [r, c] = *it;
    Rational s = m(r, a.cols());
    for (Index j = c + 1; j < a.cols(); ++j)
      if (m(r, j) != 0 && x(j) != 0) s -= m(r, j) * x(j);
    x(c) = s / m(r, c);
  }
  return x;
}

Integer determinant(const MatZ& a) {
  if (a.rows() != a.cols()) throw InvalidInput("determinant of a non-square matrix");
  if (a.rows() == 0) return 1;
  MatZ m = a;
  Integer sign = 1;
  Integer prev = 1;
  const Index n = m.rows();
  for (Index k = 0; k < n; ++k) {
    Index p = k;
    while (p < n && m(p, k) == 0) ++p;
    if (p == n) return 0;
    if (p != k) {
      m.row(p).swap(m.row(k));
      sign = -sign;
    }
    for (Index i = k + 1; i < n; ++i) {
      for (Index j = k + 1; j < n; ++j) {
        Integer v = m(k, k) * m(i, j) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

Rational determinant(const MatQ& a) {
  if (a.rows() != a.cols()) throw InvalidInput("determinant of a non-square matrix");
  Integer scale = 1;
  MatZ m(a.rows(), a.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    Integer l = 1;
    for (Index j = 0; j < a.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
    scale *= l;
    for (Index j = 0; j < a.cols(); ++j) m(i, j) = Rational(a(i, j) * l).get_num();
  }
  Rational d(determinant(m), scale);
  d.canonicalize();
  return d;
}

MatZ rational_kernel(const MatQ& a) {
  MatQ m = a;
  auto pivots = rref(m);
  std::vector<Index> free;
  for (Index c = 0, p = 0; c < a.cols(); ++c) {
    if (p < static_cast<Index>(pivots.size()) && pivots[p] == c)
      ++p;
    else
      free.push_back(c);
  }
  MatZ k(a.cols(), static_cast<Index>(free.size()));
  for (Index f = 0; f < static_cast<Index>(free.size()); ++f) {
    VecQ v = VecQ::Zero(a.cols());
    v(free[f]) = 1;
    for (Index r = 0; r < static_cast<Index>(pivots.size()); ++r) v(pivots[r]) = -m(r, free[f]);
    Integer den = common_denominator(v);
    Integer g = 0;
    VecZ w(a.cols());
    for (Index i = 0; i < v.size(); ++i) {
      w(i) = Rational(v(i) * den).get_num();
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w(i).get_mpz_t());
    }
    for (Index i = 0; i < w.size(); ++i) mpz_divexact(w(i).get_mpz_t(), w(i).get_mpz_t(), g.get_mpz_t());
    k.col(f) = w;
  }
  return k;
}

std::vector<Rational> charpoly(const MatQ& a) {
  // Faddeev-LeVerrier: exact over Q.
  const Index n = a.rows();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  MatQ m = MatQ::Zero(n, n);
  for (Index k = 1; k <= n; ++k) {
    MatQ next = a * m;
    for (Index i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = std::move(next);
    MatQ am = a * m;
    Rational tr = 0;
    for (Index i = 0; i < n; ++i) tr += am(i, i);
    c[n - k] = -tr / Rational(k);
  }
  return c;
}

MatQ restrict_to(const MatQ& a, const MatQ& basis) {
  MatQ image = a * basis;
  MatQ x(basis.cols(), basis.cols());
  for (Index j = 0; j < basis.cols(); ++j) {
    auto col = solve_rational(basis, image.col(j));
    if (!col) throw InvalidInput("restrict_to: subspace is not invariant");
    x.col(j) = *col;
  }
  if (!(basis * x == image)) throw InvalidInput("restrict_to: subspace is not invariant");
  return x;
}

}  // namespace mms
