#include "bhk/zlinalg.hpp"

#include <algorithm>
#include <optional>
#include <sstream>
#include <utility>

namespace bhk {

namespace {
int cmpabs_(const Integer& a, const Integer& b) {
  return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t());
}
int cmpabs_(const Integer& a, unsigned long b) {
  return mpz_cmpabs_ui(a.get_mpz_t(), b);
}
}  // namespace

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols,
                     std::vector<Integer> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw DimensionError("matrix entry count does not match its shape");
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw DimensionError("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(std::span<const IntVector> columns,
                                  std::size_t height) {
  IntMatrix m(height, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != height) {
      throw DimensionError("column length does not match matrix height");
    }
    for (std::size_t i = 0; i < height; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

IntVector IntMatrix::column(std::size_t c) const {
  IntVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

IntVector IntMatrix::row(std::size_t r) const {
  return IntVector(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::hconcat(const IntMatrix& rhs) const {
  if (rhs.rows_ != rows_) throw DimensionError("hconcat: row count mismatch");
  IntMatrix m(rows_, cols_ + rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j);
    for (std::size_t j = 0; j < rhs.cols_; ++j) m(i, cols_ + j) = rhs(i, j);
  }
  return m;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Integer& x) { return sgn(x) == 0; });
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product: shape mismatch");
  IntMatrix p(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Integer& x = a(i, k);
      if (sgn(x) == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (sgn(b(k, j)) == 0) continue;
        mpz_addmul(p(i, j).get_mpz_t(), x.get_mpz_t(), b(k, j).get_mpz_t());
      }
    }
  }
  return p;
}

IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw DimensionError("matrix difference: shape mismatch");
  }
  IntMatrix d(a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.data_.size(); ++k) {
    d.data_[k] = a.data_[k] - b.data_[k];
  }
  return d;
}

IntVector operator*(const IntMatrix& a, const IntVector& x) {
  if (a.cols_ != x.size()) throw DimensionError("matrix-vector: shape mismatch");
  IntVector y(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j)
      mpz_addmul(y[i].get_mpz_t(), a(i, j).get_mpz_t(), x[j].get_mpz_t());
  return y;
}

bool operator==(const IntMatrix& a, const IntMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string to_string(const IntMatrix& m) {
  std::ostringstream out;
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// FreeRank / AbelianGroup

std::size_t FreeRank::value() const {
  if (omega_) throw std::logic_error("free rank is omega");
  return value_;
}

std::string FreeRank::to_string() const {
  return omega_ ? "omega" : std::to_string(value_);
}

AbelianGroup AbelianGroup::from_cyclic(std::size_t rank,
                                       std::span<const Integer> orders) {
  IntMatrix diag(orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) diag(i, i) = abs(orders[i]);
  AbelianGroup g = cokernel(diag);
  g.free_rank = FreeRank(g.free_rank.value() + rank);
  return g;
}

Integer AbelianGroup::torsion_order() const {
  Integer order = 1;
  for (const auto& t : torsion) order *= t;
  return order;
}

std::string AbelianGroup::to_string() const {
  std::string s;
  if (free_rank.is_omega()) {
    s = "Z^omega";
  } else if (free_rank.value() == 1) {
    s = "Z";
  } else if (free_rank.value() > 1) {
    s = "Z^" + std::to_string(free_rank.value());
  }
  for (const auto& t : torsion) {
    if (!s.empty()) s += " + ";
    s += "Z/" + t.get_str();
  }
  return s.empty() ? "0" : s;
}

bool operator==(const AbelianGroup& a, const AbelianGroup& b) {
  return a.free_rank == b.free_rank && a.torsion == b.torsion;
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

// Elimination state. Row operations are mirrored into `u`, column operations
// into `v`, when those are tracked.
class Reducer {
 public:
  Reducer(IntMatrix a, bool track_u, bool track_v) : a_(std::move(a)) {
    if (track_u) u_ = IntMatrix::identity(a_.rows());
    if (track_v) v_ = IntMatrix::identity(a_.cols());
  }

  void run() {
    const std::size_t r = a_.rows();
    const std::size_t c = a_.cols();
    const std::size_t n = std::min(r, c);
    for (std::size_t t = 0; t < n; ++t) {
      auto pivot = find_pivot(t);
      if (!pivot) break;
      swap_rows(t, pivot->first);
      swap_cols(t, pivot->second);
      reduce_at(t);
      if (sgn(a_(t, t)) < 0) negate_row(t);
    }
  }

  IntMatrix& a() { return a_; }
  std::optional<IntMatrix>& u() { return u_; }
  std::optional<IntMatrix>& v() { return v_; }

 private:
  // Least nonzero |entry| in the trailing block, first in row-major order.
  std::optional<std::pair<std::size_t, std::size_t>> find_pivot(
      std::size_t t) const {
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = t; i < a_.rows(); ++i) {
      for (std::size_t j = t; j < a_.cols(); ++j) {
        const Integer& x = a_(i, j);
        if (sgn(x) == 0) continue;
        if (!best || cmpabs_(x, a_(best->first, best->second)) < 0) {
          best = {i, j};
          if (x == 1 || x == -1) return best;
        }
      }
    }
    return best;
  }

  void reduce_at(std::size_t t) {
    for (;;) {
      bool clear = true;
      for (std::size_t i = t + 1; i < a_.rows(); ++i) {
        if (sgn(a_(i, t)) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), a_(i, t).get_mpz_t(), a_(t, t).get_mpz_t());
        if (sgn(q) != 0) sub_row_multiple(i, t, q, t);
        if (sgn(a_(i, t)) != 0) clear = false;
      }
      for (std::size_t j = t + 1; j < a_.cols(); ++j) {
        if (sgn(a_(t, j)) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), a_(t, j).get_mpz_t(), a_(t, t).get_mpz_t());
        if (sgn(q) != 0) sub_col_multiple(j, t, q, t);
        if (sgn(a_(t, j)) != 0) clear = false;
      }
      if (!clear) {
        repivot_cross(t);
        continue;
      }
      if (cmpabs_(a_(t, t), 1) == 0) return;
      auto bad = find_non_multiple(t);
      if (!bad) return;
      // Pull the offending row into the pivot row; the next pass shrinks the
      // pivot to a gcd that divides it.
      add_row(t, *bad, t);
    }
  }

  // After a partial pass the pivot row/column hold remainders smaller than
  // the pivot; move the smallest of them onto the diagonal.
  void repivot_cross(std::size_t t) {
    std::size_t best_i = t, best_j = t;
    for (std::size_t i = t + 1; i < a_.rows(); ++i) {
      if (sgn(a_(i, t)) != 0 && cmpabs_(a_(i, t), a_(best_i, best_j)) < 0) {
        best_i = i;
        best_j = t;
      }
    }
    for (std::size_t j = t + 1; j < a_.cols(); ++j) {
      if (sgn(a_(t, j)) != 0 && cmpabs_(a_(t, j), a_(best_i, best_j)) < 0) {
        best_i = t;
        best_j = j;
      }
    }
    swap_rows(t, best_i);
    swap_cols(t, best_j);
  }

  std::optional<std::size_t> find_non_multiple(std::size_t t) const {
    for (std::size_t i = t + 1; i < a_.rows(); ++i)
      for (std::size_t j = t + 1; j < a_.cols(); ++j)
        if (sgn(a_(i, j)) != 0 &&
            !mpz_divisible_p(a_(i, j).get_mpz_t(), a_(t, t).get_mpz_t()))
          return i;
    return std::nullopt;
  }

  static void row_submul(IntMatrix& m, std::size_t dst, std::size_t src,
                         const Integer& q, std::size_t from) {
    for (std::size_t j = from; j < m.cols(); ++j) {
      if (sgn(m(src, j)) == 0) continue;
      mpz_submul(m(dst, j).get_mpz_t(), q.get_mpz_t(), m(src, j).get_mpz_t());
    }
  }

  static void col_submul(IntMatrix& m, std::size_t dst, std::size_t src,
                         const Integer& q, std::size_t from) {
    for (std::size_t i = from; i < m.rows(); ++i) {
      if (sgn(m(i, src)) == 0) continue;
      mpz_submul(m(i, dst).get_mpz_t(), q.get_mpz_t(), m(i, src).get_mpz_t());
    }
  }

  // row[dst] -= q * row[src]. Entries left of the active block `t` are zero
  // in every row at or below it, so `a` is only touched from column t on.
  void sub_row_multiple(std::size_t dst, std::size_t src, const Integer& q,
                        std::size_t t) {
    row_submul(a_, dst, src, q, t);
    if (u_) row_submul(*u_, dst, src, q, 0);
  }

  void sub_col_multiple(std::size_t dst, std::size_t src, const Integer& q,
                        std::size_t t) {
    col_submul(a_, dst, src, q, t);
    if (v_) col_submul(*v_, dst, src, q, 0);
  }

  void add_row(std::size_t dst, std::size_t src, std::size_t t) {
    static const Integer minus_one = -1;
    sub_row_multiple(dst, src, minus_one, t);
  }

  static void swap_matrix_rows(IntMatrix& m, std::size_t i, std::size_t k) {
    for (std::size_t j = 0; j < m.cols(); ++j) swap(m(i, j), m(k, j));
  }

  static void swap_matrix_cols(IntMatrix& m, std::size_t j, std::size_t k) {
    for (std::size_t i = 0; i < m.rows(); ++i) swap(m(i, j), m(i, k));
  }

  void swap_rows(std::size_t i, std::size_t k) {
    if (i == k) return;
    swap_matrix_rows(a_, i, k);
    if (u_) swap_matrix_rows(*u_, i, k);
  }

  void swap_cols(std::size_t j, std::size_t k) {
    if (j == k) return;
    swap_matrix_cols(a_, j, k);
    if (v_) swap_matrix_cols(*v_, j, k);
  }

  void negate_row(std::size_t t) {
    for (std::size_t j = 0; j < a_.cols(); ++j) a_(t, j) = -a_(t, j);
    if (u_)
      for (std::size_t j = 0; j < u_->cols(); ++j) (*u_)(t, j) = -(*u_)(t, j);
  }

  IntMatrix a_;
  std::optional<IntMatrix> u_;
  std::optional<IntMatrix> v_;
};

std::vector<Integer> diagonal_of(const IntMatrix& d) {
  const std::size_t n = std::min(d.rows(), d.cols());
  std::vector<Integer> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = d(i, i);
  return diag;
}

std::size_t nonzero_count(const std::vector<Integer>& diag) {
  return static_cast<std::size_t>(std::count_if(
      diag.begin(), diag.end(), [](const Integer& x) { return sgn(x) != 0; }));
}

// Unreduced kernel basis: trailing columns of the column transform.
std::vector<IntVector> raw_kernel(const IntMatrix& a) {
  Reducer red(a, false, true);
  red.run();
  const std::size_t r = nonzero_count(diagonal_of(red.a()));
  std::vector<IntVector> basis;
  for (std::size_t j = r; j < a.cols(); ++j) basis.push_back(red.v()->column(j));
  return basis;
}

}  // namespace

SnfResult snf(const IntMatrix& a) {
  Reducer red(a, true, true);
  red.run();
  return {std::move(red.a()), std::move(*red.u()), std::move(*red.v())};
}

std::vector<Integer> snf_diagonal(const IntMatrix& a) {
  Reducer red(a, false, false);
  red.run();
  return diagonal_of(red.a());
}

std::size_t rank(const IntMatrix& a) { return nonzero_count(snf_diagonal(a)); }

AbelianGroup cokernel(const IntMatrix& a) {
  const auto diag = snf_diagonal(a);
  AbelianGroup g;
  g.free_rank = FreeRank(a.rows() - nonzero_count(diag));
  for (const auto& x : diag)
    if (x > 1) g.torsion.push_back(x);
  return g;
}

std::vector<IntVector> hermite_basis(std::span<const IntVector> vectors) {
  if (vectors.empty()) return {};
  const std::size_t n = vectors.front().size();
  std::vector<IntVector> rows(vectors.begin(), vectors.end());
  for (const auto& v : rows)
    if (v.size() != n) throw DimensionError("hermite_basis: ragged vectors");

  auto submul = [n](IntVector& dst, const IntVector& src, const Integer& q) {
    for (std::size_t j = 0; j < n; ++j)
      if (sgn(src[j]) != 0)
        mpz_submul(dst[j].get_mpz_t(), q.get_mpz_t(), src[j].get_mpz_t());
  };

  std::size_t done = 0;
  for (std::size_t col = 0; col < n && done < rows.size(); ++col) {
    for (;;) {
      std::optional<std::size_t> best;
      for (std::size_t i = done; i < rows.size(); ++i) {
        if (sgn(rows[i][col]) == 0) continue;
        if (!best || cmpabs_(rows[i][col], rows[*best][col]) < 0) best = i;
      }
      if (!best) break;
      std::swap(rows[done], rows[*best]);
      bool clear = true;
      for (std::size_t i = done + 1; i < rows.size(); ++i) {
        if (sgn(rows[i][col]) == 0) continue;
        Integer q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(),
                   rows[done][col].get_mpz_t());
        submul(rows[i], rows[done], q);
        if (sgn(rows[i][col]) != 0) clear = false;
      }
      if (clear) break;
    }
    if (sgn(rows[done][col]) == 0) continue;
    if (sgn(rows[done][col]) < 0)
      for (auto& x : rows[done]) x = -x;
    for (std::size_t i = 0; i < done; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(),
                 rows[done][col].get_mpz_t());
      if (sgn(q) != 0) submul(rows[i], rows[done], q);
    }
    ++done;
  }
  rows.resize(done);
  return rows;
}

std::vector<IntVector> kernel_basis(const IntMatrix& a) {
  return hermite_basis(raw_kernel(a));
}

AbelianGroup subgroup_invariants(const IntMatrix& relations,
                                 std::span<const IntVector> generators) {
  if (generators.empty()) return AbelianGroup::trivial();
  const std::size_t n = relations.rows();
  for (const auto& g : generators)
    if (g.size() != n)
      throw DimensionError(
          "subgroup_invariants: generator length does not match ambient rank");

  // The subgroup is Z^g / {c : G c in image(R)}; those c are the first g
  // coordinates of ker [G | R].
  const IntMatrix stacked =
      IntMatrix::from_columns(generators, n).hconcat(relations);
  const auto ker = raw_kernel(stacked);
  IntMatrix rel(generators.size(), ker.size());
  for (std::size_t k = 0; k < ker.size(); ++k)
    for (std::size_t i = 0; i < generators.size(); ++i) rel(i, k) = ker[k][i];
  return cokernel(rel);
}

Integer determinant(const IntMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("determinant: non-square");
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  IntMatrix m = a;
  Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (sgn(m(k, k)) == 0) {
      std::size_t p = k + 1;
      while (p < n && sgn(m(p, k)) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) swap(m(k, j), m(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer x = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        mpz_divexact(m(i, j).get_mpz_t(), x.get_mpz_t(), prev.get_mpz_t());
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

}  // namespace bhk
