#pragma once
// Enumeration of the pico cache combinations and conversions between
// combination distributions p and per-file marginals T.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetcache/lp.hpp"
#include "hetcache/model.hpp"

namespace hetcache {

inline constexpr long long kDefaultComboCap = 2'000'000;

// All K-subsets of a sorted file list in lexicographic order, plus the
// reverse map file -> combination ids containing it.
struct CombinationIndex {
  std::vector<int> files;  // sorted F2c
  int K = 0;
  std::vector<int> combo_files;              // flattened, stride K
  std::vector<std::vector<int>> containing;  // per files[] position

  long long count() const {
    return K == 0 ? 0 : static_cast<long long>(combo_files.size()) / K;
  }
  const int* combo(long long i) const {
    return combo_files.data() + static_cast<size_t>(i) * static_cast<size_t>(K);
  }
  int position_of(int file) const {
    auto it = std::lower_bound(files.begin(), files.end(), file);
    if (it == files.end() || *it != file) return -1;
    return static_cast<int>(it - files.begin());
  }
};

inline CombinationIndex enumerate_combinations(std::vector<int> files, int K,
                                               long long cap = kDefaultComboCap) {
  std::sort(files.begin(), files.end());
  const int F = static_cast<int>(files.size());
  if (K < 1 || K > F)
    throw std::invalid_argument("enumerate_combinations: need 1 <= K <= |files|");
  const long long total = detail::binomial_capped(F, K, cap);
  if (total > cap)
    throw std::length_error(
        "enumerate_combinations: combination count exceeds cap (" +
        std::to_string(cap) + "); use the marginal-based workflow instead");

  CombinationIndex idx;
  idx.files = files;
  idx.K = K;
  idx.combo_files.reserve(static_cast<size_t>(total) * static_cast<size_t>(K));
  idx.containing.assign(files.size(), {});

  std::vector<int> sel(static_cast<size_t>(K));
  for (int i = 0; i < K; ++i) sel[static_cast<size_t>(i)] = i;
  long long id = 0;
  while (true) {
    for (int pos : sel) {
      idx.combo_files.push_back(files[static_cast<size_t>(pos)]);
      idx.containing[static_cast<size_t>(pos)].push_back(static_cast<int>(id));
    }
    ++id;
    int i = K - 1;
    while (i >= 0 && sel[static_cast<size_t>(i)] == F - K + i) --i;
    if (i < 0) break;
    ++sel[static_cast<size_t>(i)];
    for (int j = i + 1; j < K; ++j)
      sel[static_cast<size_t>(j)] = sel[static_cast<size_t>(j - 1)] + 1;
  }
  return idx;
}

inline Marginals marginals_from_p(const CombinationIndex& idx,
                                  const std::vector<double>& p) {
  if (static_cast<long long>(p.size()) != idx.count())
    throw std::invalid_argument("marginals_from_p: p length mismatch");
  Marginals m;
  m.files = idx.files;
  m.T.assign(idx.files.size(), 0.0);
  for (size_t f = 0; f < idx.files.size(); ++f)
    for (int i : idx.containing[f]) m.T[f] += p[static_cast<size_t>(i)];
  return m;
}

// Any distribution over combinations realizing the requested marginals.
// Feasible whenever T lies in the capped simplex {0 <= T <= 1, sum T = K}.
inline std::vector<double> feasible_p_from_T(const CombinationIndex& idx,
                                             const Marginals& T) {
  if (T.files != idx.files)
    throw std::invalid_argument("feasible_p_from_T: marginal files mismatch");
  double sum = 0.0;
  for (double t : T.T) {
    if (t < -1e-9 || t > 1.0 + 1e-9)
      throw std::invalid_argument("feasible_p_from_T: marginals must lie in [0,1]");
    sum += t;
  }
  if (std::fabs(sum - idx.K) > 1e-7)
    throw std::invalid_argument("feasible_p_from_T: marginals must sum to K");

  const size_t n = static_cast<size_t>(idx.count());
  const size_t F = idx.files.size();
  std::vector<std::vector<double>> A(F + 1, std::vector<double>(n, 0.0));
  std::vector<double> b(F + 1, 0.0);
  for (size_t f = 0; f < F; ++f) {
    for (int i : idx.containing[f]) A[f][static_cast<size_t>(i)] = 1.0;
    b[f] = std::clamp(T.T[f], 0.0, 1.0);
  }
  for (size_t i = 0; i < n; ++i) A[F][i] = 1.0;
  b[F] = 1.0;

  LpResult r = solve_lp_equality(A, b, std::vector<double>(n, 0.0));
  if (r.status != LpStatus::optimal)
    throw std::runtime_error("feasible_p_from_T: no distribution found");
  for (double& v : r.x) v = std::max(0.0, v);
  return r.x;
}

}  // namespace hetcache
