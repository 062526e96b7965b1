#pragma once
// Core parameter records and design validation. File ids are 1-based
// throughout; popularity entry a[n-1] belongs to file n.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetcache {

struct PhyParams {
  double lambda1;   // macro-BS density [1/m^2]
  double lambda2;   // pico-BS density [1/m^2]
  double lambda_u;  // user density [1/m^2]
  double P1;        // macro transmit power [W]
  double P2;        // pico transmit power [W]
  double N0;        // noise power [W]; 0 evaluates the interference-limited case
  double alpha1;    // macro path-loss exponent, > 2
  double alpha2;    // pico path-loss exponent, > 2
  double W_hz;      // multicast bandwidth [Hz]
  double tau;       // per-file target rate [bit/s]
};

struct ContentParams {
  int N = 0;              // library size
  std::vector<double> a;  // popularity, nonincreasing, sums to 1
  int K1c = 0;            // macro cache size
  int K2c = 0;            // pico cache size
  int K1b = 0;            // macro backhaul budget per slot
};

// Hybrid placement: F1c cached at every macro-BS, F2c randomly cached at
// pico-BSs through a distribution p over its K2c-subsets (lexicographic
// order), remaining files reachable over macro backhaul only.
struct HybridDesign {
  std::vector<int> F1c;
  std::vector<int> F2c;
  std::vector<double> p;
};

// Per-file pico caching probabilities over F2c.
struct Marginals {
  std::vector<int> files;  // sorted, equals F2c
  std::vector<double> T;   // same order as files, each in [0,1]

  double at(int file) const {
    auto it = std::lower_bound(files.begin(), files.end(), file);
    if (it == files.end() || *it != file) return 0.0;
    return T[static_cast<size_t>(it - files.begin())];
  }
};

struct ValidationResult {
  bool ok = false;
  std::vector<int> F1b;  // derived complement, sorted
  std::vector<std::string> errors;
};

namespace detail {

inline long long binomial_capped(int n, int k, long long cap) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;  // exact at each step
    if (r > cap) return cap + 1;
  }
  return r;
}

inline bool sorted_unique_in_range(const std::vector<int>& v, int N) {
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 1 || v[i] > N) return false;
    if (i > 0 && v[i] <= v[i - 1]) return false;
  }
  return true;
}

}  // namespace detail

inline std::vector<std::string> check_phy(const PhyParams& phy) {
  std::vector<std::string> errs;
  auto pos = [&](double v, const char* name) {
    if (!(v > 0.0)) errs.push_back(std::string(name) + " must be positive");
  };
  pos(phy.lambda1, "lambda1");
  pos(phy.lambda2, "lambda2");
  pos(phy.lambda_u, "lambda_u");
  pos(phy.P1, "P1");
  pos(phy.P2, "P2");
  pos(phy.W_hz, "W_hz");
  pos(phy.tau, "tau");
  if (!(phy.N0 >= 0.0)) errs.push_back("N0 must be nonnegative");
  if (!(phy.alpha1 > 2.0)) errs.push_back("alpha1 must exceed 2");
  if (!(phy.alpha2 > 2.0)) errs.push_back("alpha2 must exceed 2");
  return errs;
}

inline std::vector<std::string> check_content(const ContentParams& c) {
  std::vector<std::string> errs;
  if (c.N < 1) errs.push_back("library size N must be at least 1");
  if (static_cast<int>(c.a.size()) != c.N)
    errs.push_back("popularity vector length must equal N");
  double sum = 0.0;
  bool positive = true, sorted = true;
  for (size_t i = 0; i < c.a.size(); ++i) {
    sum += c.a[i];
    if (!(c.a[i] > 0.0)) positive = false;
    if (i > 0 && c.a[i] > c.a[i - 1] + 1e-12) sorted = false;
  }
  if (!positive) errs.push_back("popularity entries must be positive");
  if (!sorted) errs.push_back("popularity must be nonincreasing in file id");
  if (!c.a.empty() && std::fabs(sum - 1.0) > 1e-9)
    errs.push_back("popularity must sum to 1");
  if (c.K1c < 0) errs.push_back("K1c must be nonnegative");
  if (c.K2c < 1) errs.push_back("K2c must be at least 1");
  if (c.K1b < 0) errs.push_back("K1b must be nonnegative");
  if (c.K1c + c.K2c > c.N)
    errs.push_back("cache sizes K1c + K2c must not exceed N");
  return errs;
}

inline ValidationResult validate_design(const ContentParams& content,
                                        const HybridDesign& d) {
  ValidationResult r;
  r.errors = check_content(content);
  const int N = content.N;
  if (!detail::sorted_unique_in_range(d.F1c, N))
    r.errors.push_back("F1c must be sorted distinct file ids within 1..N");
  if (!detail::sorted_unique_in_range(d.F2c, N))
    r.errors.push_back("F2c must be sorted distinct file ids within 1..N");
  if (static_cast<int>(d.F1c.size()) != content.K1c)
    r.errors.push_back("F1c must contain exactly K1c files");
  if (static_cast<int>(d.F2c.size()) < content.K2c)
    r.errors.push_back("F2c must contain at least K2c files");
  std::vector<int> inter;
  std::set_intersection(d.F1c.begin(), d.F1c.end(), d.F2c.begin(), d.F2c.end(),
                        std::back_inserter(inter));
  if (!inter.empty()) r.errors.push_back("F1c and F2c must be disjoint");

  const long long combos = detail::binomial_capped(
      static_cast<int>(d.F2c.size()), content.K2c, (1LL << 62));
  if (static_cast<long long>(d.p.size()) != combos)
    r.errors.push_back(
        "p must have one entry per K2c-subset of F2c, lexicographic order");
  double psum = 0.0;
  bool pnn = true;
  for (double v : d.p) {
    psum += v;
    if (v < -1e-12) pnn = false;
  }
  if (!pnn) r.errors.push_back("p entries must be nonnegative");
  if (!d.p.empty() && std::fabs(psum - 1.0) > 1e-9)
    r.errors.push_back("p must sum to 1");

  if (r.errors.empty()) {
    std::vector<char> taken(static_cast<size_t>(N) + 1, 0);
    for (int f : d.F1c) taken[static_cast<size_t>(f)] = 1;
    for (int f : d.F2c) taken[static_cast<size_t>(f)] = 1;
    for (int f = 1; f <= N; ++f)
      if (!taken[static_cast<size_t>(f)]) r.F1b.push_back(f);
    r.ok = true;
  }
  return r;
}

// Throwing wrapper used by evaluation entry points.
inline std::vector<int> validated_backhaul_set(const ContentParams& content,
                                               const HybridDesign& d) {
  ValidationResult r = validate_design(content, d);
  if (!r.ok) {
    std::string msg = "invalid design:";
    for (const auto& e : r.errors) msg += " [" + e + "]";
    throw std::invalid_argument(msg);
  }
  return r.F1b;
}

// Zipf popularity with exponent gamma >= 0 (gamma = 0 is uniform).
inline std::vector<double> zipf_popularity(int N, double gamma) {
  if (N < 1) throw std::invalid_argument("zipf_popularity: N must be >= 1");
  if (!(gamma >= 0.0))
    throw std::invalid_argument("zipf_popularity: gamma must be >= 0");
  std::vector<double> a(static_cast<size_t>(N));
  double sum = 0.0;
  for (int n = 1; n <= N; ++n) {
    a[static_cast<size_t>(n - 1)] = std::pow(static_cast<double>(n), -gamma);
    sum += a[static_cast<size_t>(n - 1)];
  }
  for (double& v : a) v /= sum;
  return a;
}

}  // namespace hetcache
