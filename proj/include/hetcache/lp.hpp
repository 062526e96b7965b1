#pragma once
// Dense two-phase primal simplex for small equality-form LPs:
//   max c^T x  subject to  A x = b, x >= 0.
// Bland's rule for anti-cycling; redundant consistent rows are detected in
// phase 1 and dropped.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace hetcache {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
  int dropped_rows = 0;
};

namespace detail {

class SimplexTableau {
 public:
  // n structural + m artificial columns; rows hold [A | I | b].
  SimplexTableau(const std::vector<std::vector<double>>& A,
                 const std::vector<double>& b, double eps)
      : m_(A.size()), n_(A.empty() ? 0 : A[0].size()), eps_(eps) {
    rows_.assign(m_, std::vector<double>(n_ + m_ + 1, 0.0));
    basis_.resize(m_);
    for (size_t i = 0; i < m_; ++i) {
      const double sign = b[i] < 0.0 ? -1.0 : 1.0;
      for (size_t j = 0; j < n_; ++j) rows_[i][j] = sign * A[i][j];
      rows_[i][n_ + i] = 1.0;
      rows_[i].back() = sign * b[i];
      basis_[i] = n_ + i;
    }
  }

  size_t num_rows() const { return m_; }
  size_t num_cols() const { return n_; }
  const std::vector<size_t>& basis() const { return basis_; }
  double rhs(size_t i) const { return rows_[i].back(); }
  double coeff(size_t i, size_t j) const { return rows_[i][j]; }

  void pivot(size_t row, size_t col) {
    std::vector<double>& pr = rows_[row];
    const double pv = pr[col];
    for (double& v : pr) v /= pv;
    for (size_t i = 0; i < m_; ++i) {
      if (i == row) continue;
      const double f = rows_[i][col];
      if (f == 0.0) continue;
      for (size_t j = 0; j < pr.size(); ++j) rows_[i][j] -= f * pr[j];
    }
    basis_[row] = col;
  }

  // Bland: entering = lowest-index column with positive reduced cost;
  // leaving = min ratio, ties by lowest basic variable index.
  // cost covers structural columns only; artificials priced via art_cost.
  LpStatus iterate(const std::vector<double>& cost, double art_cost,
                   int max_iters, int& iters) {
    const size_t total = n_ + m_;
    while (iters < max_iters) {
      std::vector<double> y(m_);  // multipliers via basis costs
      for (size_t i = 0; i < m_; ++i)
        y[i] = basis_[i] < n_ ? cost[basis_[i]] : art_cost;
      size_t enter = total;
      for (size_t j = 0; j < n_ && enter == total; ++j) {
        if (is_basic(j)) continue;  // artificial columns never re-enter
        double red = cost[j];
        for (size_t i = 0; i < m_; ++i) red -= y[i] * rows_[i][j];
        if (red > eps_) enter = j;
      }
      if (enter == total) return LpStatus::optimal;
      size_t leave = m_;
      double best_ratio = 0.0;
      for (size_t i = 0; i < m_; ++i) {
        if (rows_[i][enter] > eps_) {
          const double ratio = rows_[i].back() / rows_[i][enter];
          if (leave == m_ || ratio < best_ratio - eps_ ||
              (ratio < best_ratio + eps_ && basis_[i] < basis_[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave == m_) return LpStatus::unbounded;
      pivot(leave, enter);
      ++iters;
    }
    return LpStatus::iteration_limit;
  }

  // After phase 1: pivot basic artificials onto structural columns where
  // possible; rows with no structural support are redundant. Returns the
  // number of dropped rows.
  int drive_out_artificials() {
    int dropped = 0;
    for (size_t i = 0; i < m_;) {
      if (basis_[i] < n_) {
        ++i;
        continue;
      }
      size_t col = n_;
      for (size_t j = 0; j < n_ && col == n_; ++j)
        if (std::fabs(rows_[i][j]) > eps_ && !is_basic(j)) col = j;
      if (col < n_) {
        pivot(i, col);
        ++i;
      } else {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
        --m_;
        ++dropped;
      }
    }
    return dropped;
  }

 private:
  bool is_basic(size_t j) const {
    for (size_t b : basis_)
      if (b == j) return true;
    return false;
  }

  size_t m_, n_;
  double eps_;
  std::vector<std::vector<double>> rows_;
  std::vector<size_t> basis_;
};

}  // namespace detail

inline LpResult solve_lp_equality(const std::vector<std::vector<double>>& A,
                                  const std::vector<double>& b,
                                  const std::vector<double>& c,
                                  double eps = 1e-9, int max_iters = 200000) {
  const size_t m = A.size(), n = A.empty() ? (c.size()) : A[0].size();
  if (b.size() != m || c.size() != n)
    throw std::invalid_argument("solve_lp_equality: shape mismatch");
  for (const auto& row : A)
    if (row.size() != n)
      throw std::invalid_argument("solve_lp_equality: ragged matrix");

  LpResult res;
  if (m == 0) {
    // No constraints: optimum is 0 unless some cost is positive.
    res.x.assign(n, 0.0);
    for (double cj : c)
      if (cj > eps) {
        res.status = LpStatus::unbounded;
        return res;
      }
    res.status = LpStatus::optimal;
    return res;
  }

  detail::SimplexTableau tab(A, b, eps);
  const std::vector<double> zero(n, 0.0);

  // Phase 1: maximize -sum(artificials).
  LpStatus st = tab.iterate(zero, -1.0, max_iters, res.iterations);
  if (st != LpStatus::optimal) {
    res.status = st;
    return res;
  }
  double art_sum = 0.0;
  for (size_t i = 0; i < tab.num_rows(); ++i)
    if (tab.basis()[i] >= n) art_sum += tab.rhs(i);
  if (art_sum > std::sqrt(eps)) {
    res.status = LpStatus::infeasible;
    return res;
  }
  res.dropped_rows = tab.drive_out_artificials();

  // Phase 2 on the true objective.
  st = tab.iterate(c, 0.0, max_iters, res.iterations);
  res.status = st;
  if (st != LpStatus::optimal && st != LpStatus::unbounded) return res;

  res.x.assign(n, 0.0);
  for (size_t i = 0; i < tab.num_rows(); ++i)
    if (tab.basis()[i] < n) res.x[tab.basis()[i]] = std::max(0.0, tab.rhs(i));
  res.objective = 0.0;
  for (size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
  return res;
}

}  // namespace hetcache
