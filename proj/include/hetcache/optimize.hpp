#pragma once
// Two-step maximization of the successful transmission probability:
// continuous optimization of the pico caching marginals, structured
// enumeration of the tier partition, and an LP pass selecting the best
// caching distribution among those realizing the optimal marginals.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hetcache/analysis.hpp"
#include "hetcache/combinatorics.hpp"
#include "hetcache/kernels.hpp"
#include "hetcache/lp.hpp"
#include "hetcache/model.hpp"

namespace hetcache {

// Euclidean projection onto {T : 0 <= T_n <= 1, sum T_n = K}.
inline std::vector<double> project_capped_simplex(const std::vector<double>& x,
                                                  int K) {
  const size_t n = x.size();
  if (K < 0 || static_cast<size_t>(K) > n)
    throw std::invalid_argument(
        "project_capped_simplex: budget outside [0, len]");
  if (K == 0) return std::vector<double>(n, 0.0);
  if (static_cast<size_t>(K) == n) return std::vector<double>(n, 1.0);
  const auto clamped_sum = [&](double nu) {
    double s = 0.0;
    for (double v : x) s += std::clamp(v - nu, 0.0, 1.0);
    return s;
  };
  double lo = *std::min_element(x.begin(), x.end()) - 1.0;
  double hi = *std::max_element(x.begin(), x.end());
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (clamped_sum(mid) >= static_cast<double>(K))
      lo = mid;
    else
      hi = mid;
  }
  const double nu = 0.5 * (lo + hi);
  std::vector<double> T(n);
  double sum = 0.0;
  int interior = 0;
  for (size_t i = 0; i < n; ++i) {
    T[i] = std::clamp(x[i] - nu, 0.0, 1.0);
    sum += T[i];
    if (T[i] > 0.0 && T[i] < 1.0) ++interior;
  }
  if (interior > 0) {
    // The interior coordinates carry unit slope in nu; one corrective shift
    // removes the residual bisection error.
    const double shift = (static_cast<double>(K) - sum) / interior;
    for (double& v : T)
      if (v > 0.0 && v < 1.0) v = std::clamp(v + shift, 0.0, 1.0);
  }
  return T;
}

struct KktCertificate {
  double residual = 0.0;
  double nu = 0.0;
};

// Stationarity gap for maximizing sum_n a_n f(T_n) over the capped simplex;
// grad holds a_n f'(T_n). Gap 0 means one multiplier separates the
// coordinates: interior gradients equal it, gradients at 0 sit below, at 1
// above.
inline KktCertificate kkt_certificate(const std::vector<double>& grad,
                                      const std::vector<double>& T,
                                      double boundary_tol = 1e-9) {
  double low = -std::numeric_limits<double>::infinity();
  double high = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < T.size(); ++i) {
    const bool at_zero = T[i] <= boundary_tol;
    const bool at_one = T[i] >= 1.0 - boundary_tol;
    if (!at_one) low = std::max(low, grad[i]);   // interior and zeros
    if (!at_zero) high = std::min(high, grad[i]);  // interior and ones
  }
  KktCertificate cert;
  if (!std::isfinite(low)) {
    cert.nu = high;
  } else if (!std::isfinite(high)) {
    cert.nu = low;
  } else {
    cert.nu = 0.5 * (low + high);
    cert.residual = std::max(0.0, 0.5 * (low - high));
  }
  return cert;
}

struct OptConfig {
  double step_c = 0.5;        // diminishing stepsize step_c / t
  int max_iters = 100000;     // diminishing-phase cap
  double conv_tol = 1e-8;     // infinity-norm step termination
  double lp_tol = 1e-9;
  int polish_iters = 20000;   // certificate-driven refinement cap
  double kkt_tol = 1e-10;     // refinement target, below the 1e-8 certificate
  int random_starts = 5;      // only when the concavity probe fails
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  long long combo_cap = kDefaultComboCap;
  bool asymptotic_scoring = false;  // score candidates by the saturated value
};

namespace detail {

// Saturated pico kernel at fixed batch size as a 1-D curve: closed form when
// the exponents match, quadrature otherwise. The derivative grid serves the
// iteration hot loop; refinement and certificates use exact evaluations.
class LimitCurve {
 public:
  LimitCurve(const KernelTable& kt, int k) : kt_(kt), k_(k) {
    const PhyParams& phy = kt.phy();
    closed_ = phy.alpha1 == phy.alpha2;
    if (closed_) terms_ = closed_form_terms(phy, k);
  }

  double value(double x) const {
    if (x <= 0.0) return 0.0;
    if (closed_) return x / (terms_.theta2 + terms_.theta1 * x);
    return kt_.pico_coverage_limit(k_, x);
  }

  double deriv_exact(double x) const {
    if (closed_) {
      const double den = terms_.theta2 + terms_.theta1 * std::max(x, 0.0);
      return terms_.theta2 / (den * den);
    }
    return kt_.pico_coverage_limit_deriv(k_, x);
  }

  double deriv_fast(double x) {
    if (closed_) return deriv_exact(x);
    if (grid_.empty()) {
      grid_.resize(kGridPoints + 1);
      for (size_t i = 0; i <= kGridPoints; ++i)
        grid_[i] = deriv_exact(static_cast<double>(i) / kGridPoints);
    }
    const double pos = std::clamp(x, 0.0, 1.0) * kGridPoints;
    const size_t i0 = std::min(static_cast<size_t>(pos), kGridPoints - 1);
    const double frac = pos - static_cast<double>(i0);
    return grid_[i0] * (1.0 - frac) + grid_[i0 + 1] * frac;
  }

  bool concave() const {
    if (closed_) return true;
    const int m = 100;
    double prev2 = value(0.0), prev1 = value(1.0 / m);
    for (int i = 2; i <= m; ++i) {
      const double cur = value(static_cast<double>(i) / m);
      if (cur - 2.0 * prev1 + prev2 > 1e-10) return false;
      prev2 = prev1;
      prev1 = cur;
    }
    return true;
  }

 private:
  static constexpr size_t kGridPoints = 1000;
  const KernelTable& kt_;
  int k_;
  bool closed_;
  ClosedFormTerms terms_{};
  std::vector<double> grid_;
};

}  // namespace detail

struct MarginalResult {
  Marginals T;
  double q2_limit = 0.0;
  double kkt_residual = 0.0;
  double nu = 0.0;
  int iterations = 0;
  bool converged = false;  // step-difference criterion met before the cap
};

// Projected gradient ascent of the saturated pico objective over the capped
// simplex. The diminishing-stepsize loop terminates on the step-difference
// criterion; a backtracking refinement then drives the stationarity gap to
// certificate precision. Non-concave kernels trigger a multistart.
inline MarginalResult optimize_marginals_gradient(const KernelTable& kt,
                                                  const ContentParams& content,
                                                  std::vector<int> F2c,
                                                  const OptConfig& cfg = {}) {
  std::sort(F2c.begin(), F2c.end());
  const size_t n = F2c.size();
  if (n < static_cast<size_t>(content.K2c))
    throw std::invalid_argument("optimize_marginals_gradient: pool too small");
  std::vector<double> a(n);
  for (size_t i = 0; i < n; ++i)
    a[i] = content.a[static_cast<size_t>(F2c[i] - 1)];

  detail::LimitCurve curve(kt, content.K2c);
  const auto objective = [&](const std::vector<double>& T) {
    double q = 0.0;
    for (size_t i = 0; i < n; ++i) q += a[i] * curve.value(T[i]);
    return q;
  };
  const auto gradient_exact = [&](const std::vector<double>& T) {
    std::vector<double> g(n);
    for (size_t i = 0; i < n; ++i) g[i] = a[i] * curve.deriv_exact(T[i]);
    return g;
  };

  std::vector<std::vector<double>> starts;
  starts.emplace_back(n, static_cast<double>(content.K2c) /
                             static_cast<double>(n));
  if (!curve.concave()) {
    std::mt19937_64 gen(cfg.seed);
    std::exponential_distribution<double> expo(1.0);
    for (int s = 1; s < cfg.random_starts; ++s) {
      std::vector<double> y(n);
      for (auto& v : y) v = expo(gen);
      const double scale =
          static_cast<double>(content.K2c) /
          std::accumulate(y.begin(), y.end(), 0.0);
      for (auto& v : y) v *= scale;
      starts.push_back(project_capped_simplex(y, content.K2c));
    }
  }

  MarginalResult best;
  best.q2_limit = -1.0;
  for (auto& T : starts) {
    MarginalResult run;
    for (int t = 1; t <= cfg.max_iters; ++t) {
      std::vector<double> g(n);
      for (size_t i = 0; i < n; ++i) g[i] = a[i] * curve.deriv_fast(T[i]);
      const double step = cfg.step_c / static_cast<double>(t);
      std::vector<double> y(n);
      for (size_t i = 0; i < n; ++i) y[i] = T[i] + step * g[i];
      std::vector<double> next = project_capped_simplex(y, content.K2c);
      double diff = 0.0;
      for (size_t i = 0; i < n; ++i)
        diff = std::max(diff, std::abs(next[i] - T[i]));
      T = std::move(next);
      run.iterations = t;
      if (diff < cfg.conv_tol) {
        run.converged = true;
        break;
      }
    }

    double step = 1.0;
    for (int it = 0; it < cfg.polish_iters; ++it) {
      const std::vector<double> g = gradient_exact(T);
      const KktCertificate cert = kkt_certificate(g, T);
      if (cert.residual <= cfg.kkt_tol) break;
      const double base = objective(T);
      bool moved = false;
      while (step > 1e-16) {
        std::vector<double> y(n);
        for (size_t i = 0; i < n; ++i) y[i] = T[i] + step * g[i];
        std::vector<double> cand = project_capped_simplex(y, content.K2c);
        double dir = 0.0;
        for (size_t i = 0; i < n; ++i) dir += g[i] * (cand[i] - T[i]);
        if (objective(cand) >= base + 1e-4 * dir && dir > 0.0) {
          T = std::move(cand);
          step = std::min(step * 2.0, 1e6);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      ++run.iterations;
      if (!moved) break;
    }

    const KktCertificate cert = kkt_certificate(gradient_exact(T), T);
    run.T.files = F2c;
    run.T.T = T;
    run.q2_limit = objective(T);
    run.kkt_residual = cert.residual;
    run.nu = cert.nu;
    if (run.q2_limit > best.q2_limit) best = std::move(run);
  }
  return best;
}

// Closed-form water-level solution of the same problem, exponents equal.
inline MarginalResult optimize_marginals_waterfill(const PhyParams& phy,
                                                   const ContentParams& content,
                                                   std::vector<int> F2c) {
  std::sort(F2c.begin(), F2c.end());
  const size_t n = F2c.size();
  if (n < static_cast<size_t>(content.K2c))
    throw std::invalid_argument("optimize_marginals_waterfill: pool too small");
  const ClosedFormTerms terms = closed_form_terms(phy, content.K2c);
  const double th1 = terms.theta1, th2 = terms.theta2;
  std::vector<double> a(n);
  for (size_t i = 0; i < n; ++i)
    a[i] = content.a[static_cast<size_t>(F2c[i] - 1)];

  const auto level = [&](double an, double nu) {
    return std::clamp((std::sqrt(an * th2 / nu) - th2) / th1, 0.0, 1.0);
  };
  const auto filled = [&](double nu) {
    double s = 0.0;
    for (double an : a) s += level(an, nu);
    return s;
  };
  const double cap = th2 + th1;
  double lo = *std::min_element(a.begin(), a.end()) * th2 / (cap * cap);
  double hi = *std::max_element(a.begin(), a.end()) / th2;
  const double budget = static_cast<double>(content.K2c);
  MarginalResult res;
  if (filled(lo) <= budget) {
    hi = lo;  // caps bind for every file already at the lowest level
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (filled(mid) >= budget)
      lo = mid;
    else
      hi = mid;
    ++res.iterations;
  }
  const double nu = 0.5 * (lo + hi);
  res.T.files = F2c;
  res.T.T.resize(n);
  for (size_t i = 0; i < n; ++i) res.T.T[i] = level(a[i], nu);

  std::vector<double> g(n);
  res.q2_limit = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double den = th2 + th1 * res.T.T[i];
    g[i] = a[i] * th2 / (den * den);
    res.q2_limit += a[i] * res.T.T[i] / den;
  }
  const KktCertificate cert = kkt_certificate(g, res.T.T);
  res.kkt_residual = cert.residual;
  res.nu = nu;
  res.converged = true;
  return res;
}

// One tier partition under the consecutive-popularity structure: the macro
// cache holds files n1c..n1c+K1c-1, the backhaul span follows, the pico pool
// takes the rest.
struct Candidate {
  std::vector<int> F1c, F1b, F2c;
  int n1c = 1;
};

inline std::vector<Candidate> structured_candidates(
    const ContentParams& content) {
  const int N = content.N;
  const int size_lo = std::max(content.K2c, N - content.K1c - content.K1b);
  const int size_hi = N - content.K1c;
  std::vector<Candidate> out;
  for (int s = size_lo; s <= size_hi; ++s) {
    const int backhaul = N - content.K1c - s;
    for (int n1c = 1; n1c <= s + 1; ++n1c) {
      Candidate c;
      c.n1c = n1c;
      for (int f = n1c; f < n1c + content.K1c; ++f) c.F1c.push_back(f);
      for (int f = n1c + content.K1c; f < n1c + content.K1c + backhaul; ++f)
        c.F1b.push_back(f);
      std::vector<char> used(static_cast<size_t>(N) + 1, 0);
      for (int f : c.F1c) used[static_cast<size_t>(f)] = 1;
      for (int f : c.F1b) used[static_cast<size_t>(f)] = 1;
      for (int f = 1; f <= N; ++f)
        if (!used[static_cast<size_t>(f)]) c.F2c.push_back(f);
      out.push_back(std::move(c));
    }
  }
  return out;
}

enum class TierPreference { macro_first, pico_first, undecided };

// Decides which tier should carry the most popular files by comparing the
// saturated kernels at their extreme operating points.
inline TierPreference tier_preference(const KernelTable& kt,
                                      const ContentParams& content) {
  const int macro_load = content.K1c + content.K1b;
  if (macro_load >= 1 &&
      kt.macro_coverage_limit(macro_load) >
          kt.pico_coverage_limit(content.K2c, 1.0))
    return TierPreference::macro_first;
  const int pool = content.N - content.K1c;
  if (content.K1c >= 1 &&
      kt.macro_coverage_limit(content.K1c) <
          kt.pico_coverage_limit(content.K2c,
                                 static_cast<double>(content.K2c) / pool))
    return TierPreference::pico_first;
  return TierPreference::undecided;
}

inline std::vector<Candidate> prune_candidates(TierPreference pref,
                                               std::vector<Candidate> cands) {
  if (pref == TierPreference::undecided) return cands;
  std::vector<Candidate> out;
  for (auto& c : cands) {
    if (pref == TierPreference::macro_first && c.n1c != 1) continue;
    if (pref == TierPreference::pico_first && c.n1c == 1) continue;
    out.push_back(std::move(c));
  }
  return out;
}

struct LpRefineResult {
  std::vector<double> p;  // over the full combination list
  double q2 = 0.0;
  LpStatus status = LpStatus::optimal;
  int iterations = 0;
  int dropped_rows = 0;
  int fixed_zero = 0;  // combinations pre-fixed by the marginal bounds
};

// Picks, among the caching distributions realizing the marginals T, the one
// maximizing the noisy-region pico objective. Combinations touching a T=0
// file or missing a T=1 file are fixed to zero up front; the rest solve a
// dense equality-form LP.
inline LpRefineResult lp_refine(const KernelTable& kt,
                                const ContentParams& content,
                                const CombinationIndex& idx,
                                const Marginals& T, double tol = 1e-9) {
  const PhyParams& phy = kt.phy();
  const size_t I = static_cast<size_t>(idx.count());
  const size_t F = idx.files.size();

  std::vector<char> is_zero(F, 0), is_one(F, 0);
  for (size_t f = 0; f < F; ++f) {
    if (T.T[f] <= tol) is_zero[f] = 1;
    if (T.T[f] >= 1.0 - tol) is_one[f] = 1;
  }
  std::vector<double> act(F, 0.0);
  for (size_t f = 0; f < F; ++f)
    act[f] = cell_request_probability(content.a[static_cast<size_t>(idx.files[f] - 1)],
                                      phy.lambda_u, T.T[f] * phy.lambda2);

  int ones_total = 0;
  for (size_t f = 0; f < F; ++f) ones_total += is_one[f];

  LpRefineResult res;
  res.p.assign(I, 0.0);
  std::vector<int> free_combos;
  for (size_t i = 0; i < I; ++i) {
    const int* c = idx.combo(static_cast<long long>(i));
    int ones = 0;
    bool zero_file = false;
    for (int j = 0; j < idx.K; ++j) {
      const size_t f = static_cast<size_t>(idx.position_of(c[j]));
      if (is_zero[f]) zero_file = true;
      if (is_one[f]) ++ones;
    }
    if (zero_file || ones != ones_total)
      ++res.fixed_zero;
    else
      free_combos.push_back(static_cast<int>(i));
  }

  std::vector<double> cost(free_combos.size(), 0.0);
  std::vector<double> acts_sub;
  for (size_t v = 0; v < free_combos.size(); ++v) {
    const int* c = idx.combo(free_combos[v]);
    double ci = 0.0;
    for (int j = 0; j < idx.K; ++j) {
      const size_t f = static_cast<size_t>(idx.position_of(c[j]));
      acts_sub.clear();
      for (int j2 = 0; j2 < idx.K; ++j2)
        if (j2 != j)
          acts_sub.push_back(act[static_cast<size_t>(idx.position_of(c[j2]))]);
      const std::vector<double> pmf = poisson_binomial_pmf(acts_sub);
      double per = 0.0;
      for (size_t k = 0; k < pmf.size(); ++k)
        per += pmf[k] * kt.pico_coverage(static_cast<int>(k) + 1, T.T[f]);
      ci += content.a[static_cast<size_t>(idx.files[f] - 1)] / T.T[f] * per;
    }
    cost[v] = ci;
  }

  std::vector<std::vector<double>> A;
  std::vector<double> b;
  A.emplace_back(free_combos.size(), 1.0);
  b.push_back(1.0);
  for (size_t f = 0; f < F; ++f) {
    if (is_zero[f]) continue;
    std::vector<double> row(free_combos.size(), 0.0);
    for (size_t v = 0; v < free_combos.size(); ++v) {
      const int* c = idx.combo(free_combos[v]);
      for (int j = 0; j < idx.K; ++j)
        if (c[j] == idx.files[f]) row[v] = 1.0;
    }
    A.push_back(std::move(row));
    b.push_back(T.T[f]);
  }

  const LpResult lp = solve_lp_equality(A, b, cost);
  res.status = lp.status;
  res.iterations = lp.iterations;
  res.dropped_rows = lp.dropped_rows;
  if (lp.status != LpStatus::optimal)
    throw std::runtime_error("lp_refine: marginal system not solvable");
  for (size_t v = 0; v < free_combos.size(); ++v)
    res.p[static_cast<size_t>(free_combos[v])] = std::max(0.0, lp.x[v]);
  res.q2 = lp.objective;
  return res;
}

struct Solution {
  HybridDesign design;
  std::vector<int> F1b;
  Marginals T;
  double q_general = 0.0;
  double q1_general = 0.0;
  double q2_general = 0.0;
  double q_asymptotic = 0.0;
  int n1c = 1;
  int candidate_count = 0;
  int evaluated_count = 0;
  int gradient_iterations = 0;
  double kkt_residual = 0.0;
  bool used_waterfill = false;
  bool asymptotic_scored = false;
};

namespace detail {

inline MarginalResult best_marginals(const KernelTable& kt,
                                     const ContentParams& content,
                                     const std::vector<int>& F2c,
                                     const OptConfig& cfg) {
  if (kt.phy().alpha1 == kt.phy().alpha2)
    return optimize_marginals_waterfill(kt.phy(), content, F2c);
  return optimize_marginals_gradient(kt, content, F2c, cfg);
}

inline double limit_score(const KernelTable& kt, const ContentParams& content,
                          const Candidate& c, const MarginalResult& mr) {
  if (kt.phy().alpha1 == kt.phy().alpha2)
    return evaluate_limit_closed(kt.phy(), content, c.F1c, c.F2c, mr.T).q;
  return evaluate_limit(kt, content, c.F1c, c.F2c, mr.T).q;
}

}  // namespace detail

// Structured candidate sweep scored in the noisy region: marginals first,
// then the LP pass, then the full evaluation. Ties go to the smaller pico
// pool, then the smaller cache start.
inline Solution near_optimal(const PhyParams& phy, const ContentParams& content,
                             const OptConfig& cfg = {}) {
  if (const auto errs = check_phy(phy); !errs.empty())
    throw std::invalid_argument("near_optimal: " + errs.front());
  if (const auto errs = check_content(content); !errs.empty())
    throw std::invalid_argument("near_optimal: " + errs.front());

  KernelTable kt(phy);
  std::vector<Candidate> cands =
      prune_candidates(tier_preference(kt, content),
                       structured_candidates(content));

  Solution best;
  best.q_general = -1.0;
  best.candidate_count = static_cast<int>(cands.size());
  best.asymptotic_scored = cfg.asymptotic_scoring;
  for (const Candidate& c : cands) {
    const MarginalResult mr = detail::best_marginals(kt, content, c.F2c, cfg);
    const CombinationIndex idx =
        enumerate_combinations(c.F2c, content.K2c, cfg.combo_cap);
    const LpRefineResult lpr = lp_refine(kt, content, idx, mr.T, cfg.lp_tol);

    HybridDesign design{c.F1c, c.F2c, lpr.p};
    const EvalReport rep = evaluate_general(kt, content, design, cfg.combo_cap);
    const double limit_q = detail::limit_score(kt, content, c, mr);
    const double score = cfg.asymptotic_scoring ? limit_q : rep.q;
    const double incumbent =
        cfg.asymptotic_scoring ? best.q_asymptotic : best.q_general;

    bool better = best.evaluated_count == 0 || score > incumbent;
    if (!better && score == incumbent) {
      if (c.F2c.size() < best.design.F2c.size())
        better = true;
      else if (c.F2c.size() == best.design.F2c.size() && c.n1c < best.n1c)
        better = true;
    }
    const int seen = best.evaluated_count + 1;
    const int total = best.candidate_count;
    if (better) {
      best.design = std::move(design);
      best.F1b = c.F1b;
      best.T = mr.T;
      best.q_general = rep.q;
      best.q1_general = rep.q1;
      best.q2_general = rep.q2;
      best.q_asymptotic = limit_q;
      best.n1c = c.n1c;
      best.gradient_iterations = mr.iterations;
      best.kkt_residual = mr.kkt_residual;
      best.used_waterfill = phy.alpha1 == phy.alpha2;
    }
    best.evaluated_count = seen;
    best.candidate_count = total;
  }
  return best;
}

// Same sweep scored purely by the saturated value; the returned caching
// distribution is one feasible realization of the winning marginals.
inline Solution asymptotic_optimum(const PhyParams& phy,
                                   const ContentParams& content,
                                   const OptConfig& cfg = {}) {
  if (const auto errs = check_phy(phy); !errs.empty())
    throw std::invalid_argument("asymptotic_optimum: " + errs.front());
  if (const auto errs = check_content(content); !errs.empty())
    throw std::invalid_argument("asymptotic_optimum: " + errs.front());

  KernelTable kt(phy);
  std::vector<Candidate> cands =
      prune_candidates(tier_preference(kt, content),
                       structured_candidates(content));

  Solution best;
  best.q_asymptotic = -1.0;
  best.candidate_count = static_cast<int>(cands.size());
  best.asymptotic_scored = true;
  int seen = 0;
  for (const Candidate& c : cands) {
    const MarginalResult mr = detail::best_marginals(kt, content, c.F2c, cfg);
    const double score = detail::limit_score(kt, content, c, mr);
    ++seen;
    if (score <= best.q_asymptotic && seen > 1) continue;
    best.q_asymptotic = score;
    best.T = mr.T;
    best.design.F1c = c.F1c;
    best.design.F2c = c.F2c;
    best.F1b = c.F1b;
    best.n1c = c.n1c;
    best.gradient_iterations = mr.iterations;
    best.kkt_residual = mr.kkt_residual;
    best.used_waterfill = phy.alpha1 == phy.alpha2;
  }
  best.evaluated_count = seen;

  const CombinationIndex idx =
      enumerate_combinations(best.design.F2c, content.K2c, cfg.combo_cap);
  best.design.p = feasible_p_from_T(idx, best.T);
  const EvalReport rep = evaluate_general(kt, content, best.design,
                                          cfg.combo_cap);
  best.q_general = rep.q;
  best.q1_general = rep.q1;
  best.q2_general = rep.q2;
  return best;
}

// Exhaustive partition search over all (F1c, F2c) splits, saturated scoring.
// Exists to confirm the structured sweep loses nothing; sized for small N.
inline Solution exhaustive_search(const PhyParams& phy,
                                  const ContentParams& content,
                                  const OptConfig& cfg = {}) {
  if (content.N > 10)
    throw std::length_error("exhaustive_search: library too large");
  KernelTable kt(phy);

  std::vector<int> all(static_cast<size_t>(content.N));
  std::iota(all.begin(), all.end(), 1);

  std::map<std::uint32_t, MarginalResult> pool_cache;
  const auto marginals_for = [&](const std::vector<int>& F2c)
      -> const MarginalResult& {
    std::uint32_t mask = 0;
    for (int f : F2c) mask |= 1u << (f - 1);
    auto it = pool_cache.find(mask);
    if (it != pool_cache.end()) return it->second;
    if (detail::binomial_capped(static_cast<int>(F2c.size()), content.K2c,
                                200) > 200)
      throw std::length_error("exhaustive_search: combination space too large");
    MarginalResult mr = detail::best_marginals(kt, content, F2c, cfg);
    return pool_cache.emplace(mask, std::move(mr)).first->second;
  };

  const auto subsets_of = [](const std::vector<int>& base, int K) {
    std::vector<std::vector<int>> out;
    if (K == 0) {
      out.emplace_back();
      return out;
    }
    const CombinationIndex idx = enumerate_combinations(base, K);
    for (long long i = 0; i < idx.count(); ++i)
      out.emplace_back(idx.combo(i), idx.combo(i) + K);
    return out;
  };

  Solution best;
  best.q_asymptotic = -1.0;
  best.asymptotic_scored = true;
  int seen = 0;
  for (int s = content.K2c; s <= content.N - content.K1c; ++s) {
    for (const auto& pool : subsets_of(all, s)) {
      std::vector<int> rest;
      for (int f : all)
        if (!std::binary_search(pool.begin(), pool.end(), f))
          rest.push_back(f);
      const MarginalResult& mr = marginals_for(pool);
      for (const auto& cache : subsets_of(rest, content.K1c)) {
        Candidate c;
        c.F1c = cache;
        c.F2c = pool;
        const double score = detail::limit_score(kt, content, c, mr);
        ++seen;
        if (score <= best.q_asymptotic && seen > 1) continue;
        best.q_asymptotic = score;
        best.design.F1c = cache;
        best.design.F2c = pool;
        best.T = mr.T;
        best.kkt_residual = mr.kkt_residual;
      }
    }
  }
  best.evaluated_count = seen;
  best.candidate_count = seen;
  best.F1b.clear();
  for (int f : all)
    if (!std::binary_search(best.design.F1c.begin(), best.design.F1c.end(), f) &&
        !std::binary_search(best.design.F2c.begin(), best.design.F2c.end(), f))
      best.F1b.push_back(f);
  const CombinationIndex idx =
      enumerate_combinations(best.design.F2c, content.K2c, cfg.combo_cap);
  best.design.p = feasible_p_from_T(idx, best.T);
  best.used_waterfill = phy.alpha1 == phy.alpha2;
  return best;
}

}  // namespace hetcache
