#pragma once
// Multicast load distributions at the serving BS and assembly of the
// successful transmission probability, exact region and saturated limit.

#include <algorithm>
#include <cmath>
#include <vector>

#include "hetcache/combinatorics.hpp"
#include "hetcache/kernels.hpp"
#include "hetcache/model.hpp"

namespace hetcache {

// P[some cell user requests the file], under the 3.5-parameter Voronoi cell
// population model. serving_density is the density of BSs eligible to serve
// the file (thinned for pico random caching); zero density means the file is
// never carried, so the probability is 0 by convention.
inline double cell_request_probability(double popularity, double lambda_u,
                                       double serving_density) {
  if (serving_density <= 0.0) return 0.0;
  return 1.0 -
         std::pow(1.0 + popularity * lambda_u / (3.5 * serving_density), -4.5);
}

// pmf of the success count of independent Bernoulli trials; O(n^2) rolling
// convolution, exact for the small trial counts used here.
inline std::vector<double> poisson_binomial_pmf(const std::vector<double>& pr) {
  std::vector<double> pmf{1.0};
  pmf.reserve(pr.size() + 1);
  for (double p : pr) {
    pmf.push_back(0.0);
    for (size_t k = pmf.size() - 1; k >= 1; --k)
      pmf[k] = pmf[k] * (1.0 - p) + pmf[k - 1] * p;
    pmf[0] *= 1.0 - p;
  }
  return pmf;
}

// Load pmfs at the macro-BS serving the typical user requesting file n.
// For cached n: `cached` is the pmf of the number of distinct cached files
// multicast (support 1..K1c, includes n), `backhaul` the pmf of distinct
// backhaul files requested by cell users (support 0..|F1b|).
// For backhaul n the roles flip: `cached` has support 0..K1c and `backhaul`
// includes the typical request (support 1..|F1b|).
struct MacroLoadPmfs {
  std::vector<double> cached;
  std::vector<double> backhaul;
};

inline MacroLoadPmfs macro_load_pmfs(const PhyParams& phy,
                                     const ContentParams& content,
                                     const std::vector<int>& F1c,
                                     const std::vector<int>& F1b, int n) {
  auto acts = [&](const std::vector<int>& files, int skip) {
    std::vector<double> v;
    v.reserve(files.size());
    for (int m : files)
      if (m != skip)
        v.push_back(cell_request_probability(content.a[static_cast<size_t>(m - 1)],
                                             phy.lambda_u, phy.lambda1));
    return v;
  };
  auto shift1 = [](std::vector<double> pmf) {
    pmf.insert(pmf.begin(), 0.0);
    return pmf;
  };
  const bool cached_file = std::binary_search(F1c.begin(), F1c.end(), n);
  if (!cached_file && !std::binary_search(F1b.begin(), F1b.end(), n))
    throw std::invalid_argument("macro_load_pmfs: file not served by macro tier");
  MacroLoadPmfs r;
  if (cached_file) {
    r.cached = shift1(poisson_binomial_pmf(acts(F1c, n)));
    r.backhaul = poisson_binomial_pmf(acts(F1b, -1));
  } else {
    r.cached = poisson_binomial_pmf(acts(F1c, -1));
    r.backhaul = shift1(poisson_binomial_pmf(acts(F1b, n)));
  }
  return r;
}

// Load pmf at the pico-BS serving the typical user requesting file n, a
// mixture over the combinations containing n weighted by p_i / T_n.
// Support 1..K2c (the request itself is always multicast).
inline std::vector<double> pico_load_pmf(const PhyParams& phy,
                                         const ContentParams& content,
                                         const CombinationIndex& idx,
                                         const std::vector<double>& p,
                                         const Marginals& T, int n) {
  const int pos = idx.position_of(n);
  if (pos < 0) throw std::invalid_argument("pico_load_pmf: file not in F2c");
  const double Tn = T.T[static_cast<size_t>(pos)];
  if (!(Tn > 0.0))
    throw std::domain_error("pico_load_pmf: file has zero caching probability");
  std::vector<double> pmf(static_cast<size_t>(idx.K) + 1, 0.0);
  std::vector<double> acts;
  for (int i : idx.containing[static_cast<size_t>(pos)]) {
    const double w = p[static_cast<size_t>(i)] / Tn;
    if (w == 0.0) continue;
    acts.clear();
    const int* c = idx.combo(i);
    for (int j = 0; j < idx.K; ++j) {
      const int m = c[j];
      if (m == n) continue;
      acts.push_back(cell_request_probability(content.a[static_cast<size_t>(m - 1)],
                                              phy.lambda_u,
                                              T.at(m) * phy.lambda2));
    }
    const std::vector<double> sub = poisson_binomial_pmf(acts);
    for (size_t k = 0; k < sub.size(); ++k) pmf[k + 1] += w * sub[k];
  }
  return pmf;
}

struct EvalReport {
  double q = 0.0;
  double q1 = 0.0;  // macro-tier contribution
  double q2 = 0.0;  // pico-tier contribution
  std::vector<double> per_file;  // index n-1
};

// Exact-region successful transmission probability of a validated design.
inline EvalReport evaluate_general(const KernelTable& kt,
                                   const ContentParams& content,
                                   const HybridDesign& design,
                                   long long combo_cap = kDefaultComboCap) {
  const PhyParams& phy = kt.phy();
  const std::vector<int> F1b = validated_backhaul_set(content, design);
  const int Fb = static_cast<int>(F1b.size());
  const int sel_max = std::min(content.K1b, Fb);

  EvalReport rep;
  rep.per_file.assign(static_cast<size_t>(content.N), 0.0);

  for (int n : design.F1c) {
    const MacroLoadPmfs pm = macro_load_pmfs(phy, content, design.F1c, F1b, n);
    // Collapse the backhaul count through the min{K1b, .} selection cap.
    std::vector<double> w(static_cast<size_t>(sel_max) + 1, 0.0);
    for (size_t kb = 0; kb < pm.backhaul.size(); ++kb)
      w[std::min<size_t>(kb, static_cast<size_t>(sel_max))] += pm.backhaul[kb];
    double val = 0.0;
    for (size_t kc = 1; kc < pm.cached.size(); ++kc) {
      if (pm.cached[kc] == 0.0) continue;
      for (size_t m = 0; m < w.size(); ++m)
        if (w[m] != 0.0)
          val += pm.cached[kc] * w[m] *
                 kt.macro_coverage(static_cast<int>(kc + m));
    }
    rep.per_file[static_cast<size_t>(n - 1)] = val;
    rep.q1 += content.a[static_cast<size_t>(n - 1)] * val;
  }

  if (content.K1b > 0) {
    for (int n : F1b) {
      const MacroLoadPmfs pm = macro_load_pmfs(phy, content, design.F1c, F1b, n);
      double val = 0.0;
      for (size_t kb = 1; kb < pm.backhaul.size(); ++kb) {
        if (pm.backhaul[kb] == 0.0) continue;
        const int sel = std::min(content.K1b, static_cast<int>(kb));
        const double pick = static_cast<double>(sel) / static_cast<double>(kb);
        for (size_t kc = 0; kc < pm.cached.size(); ++kc)
          if (pm.cached[kc] != 0.0)
            val += pm.backhaul[kb] * pm.cached[kc] * pick *
                   kt.macro_coverage(static_cast<int>(kc) + sel);
      }
      rep.per_file[static_cast<size_t>(n - 1)] = val;
      rep.q1 += content.a[static_cast<size_t>(n - 1)] * val;
    }
  }

  const CombinationIndex idx =
      enumerate_combinations(design.F2c, content.K2c, combo_cap);
  const Marginals T = marginals_from_p(idx, design.p);
  for (size_t f = 0; f < idx.files.size(); ++f) {
    const int n = idx.files[f];
    const double Tn = T.T[f];
    if (!(Tn > 1e-15)) continue;
    const std::vector<double> pmf =
        pico_load_pmf(phy, content, idx, design.p, T, n);
    double val = 0.0;
    for (size_t k = 1; k < pmf.size(); ++k)
      if (pmf[k] != 0.0) val += pmf[k] * kt.pico_coverage(static_cast<int>(k), Tn);
    rep.per_file[static_cast<size_t>(n - 1)] = val;
    rep.q2 += content.a[static_cast<size_t>(n - 1)] * val;
  }

  rep.q = rep.q1 + rep.q2;
  return rep;
}

inline EvalReport evaluate_general(const PhyParams& phy,
                                   const ContentParams& content,
                                   const HybridDesign& design) {
  KernelTable kt(phy);
  return evaluate_general(kt, content, design);
}

struct AsymptoticReport {
  double q = 0.0, q1 = 0.0, q2 = 0.0;
};

// Saturated-regime probability: every served file is requested, the macro
// backhaul quota is fully used, and noise vanishes relative to power.
inline AsymptoticReport evaluate_limit(const KernelTable& kt,
                                       const ContentParams& content,
                                       const std::vector<int>& F1c,
                                       const std::vector<int>& F2c,
                                       const Marginals& T) {
  std::vector<char> in_fast(static_cast<size_t>(content.N) + 1, 0);
  for (int f : F1c) in_fast[static_cast<size_t>(f)] = 1;
  for (int f : F2c) in_fast[static_cast<size_t>(f)] = 2;
  double a1 = 0.0, ab = 0.0;
  int Fb = 0;
  for (int n = 1; n <= content.N; ++n) {
    const double an = content.a[static_cast<size_t>(n - 1)];
    if (in_fast[static_cast<size_t>(n)] == 1) a1 += an;
    if (in_fast[static_cast<size_t>(n)] == 0) {
      ab += an;
      ++Fb;
    }
  }
  AsymptoticReport rep;
  const int sel = std::min(content.K1b, Fb);
  double weight = a1;
  if (Fb > 0 && sel > 0)
    weight += ab * static_cast<double>(sel) / static_cast<double>(Fb);
  if (weight > 0.0) {
    const int k = static_cast<int>(F1c.size()) + sel;
    rep.q1 = kt.macro_coverage_limit(k) * weight;
  }
  for (int n : F2c)
    rep.q2 += content.a[static_cast<size_t>(n - 1)] *
              kt.pico_coverage_limit(content.K2c, T.at(n));
  rep.q = rep.q1 + rep.q2;
  return rep;
}

inline AsymptoticReport evaluate_limit(const PhyParams& phy,
                                       const ContentParams& content,
                                       const std::vector<int>& F1c,
                                       const std::vector<int>& F2c,
                                       const Marginals& T) {
  KernelTable kt(phy);
  return evaluate_limit(kt, content, F1c, F2c, T);
}

// Same quantity through the equal-exponent rational forms.
inline AsymptoticReport evaluate_limit_closed(const PhyParams& phy,
                                              const ContentParams& content,
                                              const std::vector<int>& F1c,
                                              const std::vector<int>& F2c,
                                              const Marginals& T) {
  std::vector<char> seen(static_cast<size_t>(content.N) + 1, 0);
  for (int f : F1c) seen[static_cast<size_t>(f)] = 1;
  for (int f : F2c) seen[static_cast<size_t>(f)] = 2;
  double a1 = 0.0, ab = 0.0;
  int Fb = 0;
  for (int n = 1; n <= content.N; ++n) {
    if (seen[static_cast<size_t>(n)] == 1) a1 += content.a[static_cast<size_t>(n - 1)];
    if (seen[static_cast<size_t>(n)] == 0) {
      ab += content.a[static_cast<size_t>(n - 1)];
      ++Fb;
    }
  }
  AsymptoticReport rep;
  const int sel = std::min(content.K1b, Fb);
  double weight = a1;
  if (Fb > 0 && sel > 0)
    weight += ab * static_cast<double>(sel) / static_cast<double>(Fb);
  if (weight > 0.0)
    rep.q1 = weight *
             macro_coverage_limit_closed(phy, static_cast<int>(F1c.size()) + sel);
  for (int n : F2c)
    rep.q2 += content.a[static_cast<size_t>(n - 1)] *
              pico_coverage_limit_closed(phy, content.K2c, T.at(n));
  rep.q = rep.q1 + rep.q2;
  return rep;
}

}  // namespace hetcache
