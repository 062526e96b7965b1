#pragma once
// Conditional coverage kernels: probability that a typical user attached to a
// macro- or pico-BS decodes its file when the multicast load is k, averaged
// over Rayleigh fading, cell geometry, and both interference tiers.
//
// "limit" variants evaluate the saturated regime (noise negligible, only the
// power ratio P1/P2 enters); with equal path-loss exponents they collapse to
// rational closed forms, used both as fast paths and as cross-checks.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

#include "hetcache/model.hpp"
#include "hetcache/numerics.hpp"

namespace hetcache {

struct ClosedFormTerms {
  double omega;   // macro kernel denominator
  double theta1;  // pico kernel slope term
  double theta2;  // pico kernel offset term
};

// Closed forms require alpha1 == alpha2.
inline ClosedFormTerms closed_form_terms(const PhyParams& phy, int k) {
  if (phy.alpha1 != phy.alpha2)
    throw std::domain_error("closed_form_terms: requires alpha1 == alpha2");
  const double alpha = phy.alpha1;
  const double ratio = phy.P1 / phy.P2;
  const double e = static_cast<double>(k) * phy.tau / phy.W_hz;
  const double theta = std::exp2(e) - 1.0;
  if (theta == 0.0) return {1.0, 1.0, 0.0};
  const double B = beta(2.0 / alpha, 1.0 - 2.0 / alpha);
  const double Bt = comp_inc_beta(2.0 / alpha, 1.0 - 2.0 / alpha, std::exp2(-e));
  const double t = std::pow(theta, 2.0 / alpha);
  ClosedFormTerms r;
  r.omega = (2.0 / alpha) * t * Bt +
            (2.0 * phy.lambda2 / (alpha * phy.lambda1)) *
                std::pow(theta / ratio, 2.0 / alpha) * B +
            1.0;
  r.theta1 = (2.0 / alpha) * t * Bt - (2.0 / alpha) * t * B + 1.0;
  r.theta2 = (2.0 / alpha) * t * B +
             (2.0 * phy.lambda1 / (alpha * phy.lambda2)) *
                 std::pow(ratio * theta, 2.0 / alpha) * B;
  return r;
}

inline double macro_coverage_limit_closed(const PhyParams& phy, int k) {
  return 1.0 / closed_form_terms(phy, k).omega;
}

inline double pico_coverage_limit_closed(const PhyParams& phy, int k, double x) {
  if (x <= 0.0) return 0.0;
  const ClosedFormTerms t = closed_form_terms(phy, k);
  return x / (t.theta2 + t.theta1 * x);
}

inline double pico_coverage_limit_deriv_closed(const PhyParams& phy, int k,
                                               double x) {
  const ClosedFormTerms t = closed_form_terms(phy, k);
  if (t.theta2 == 0.0 && x <= 0.0) return 0.0;  // tau = 0 degenerate case
  const double den = t.theta2 + t.theta1 * std::max(x, 0.0);
  return t.theta2 / (den * den);
}

class KernelTable {
 public:
  explicit KernelTable(const PhyParams& phy, QuadratureConfig cfg = {})
      : phy_(phy), cfg_(cfg) {
    auto errs = check_phy(phy);
    if (!errs.empty())
      throw std::invalid_argument("KernelTable: " + errs.front());
    B1_ = beta(2.0 / phy.alpha1, 1.0 - 2.0 / phy.alpha1);
    B2_ = beta(2.0 / phy.alpha2, 1.0 - 2.0 / phy.alpha2);
  }

  const PhyParams& phy() const { return phy_; }

  double macro_coverage(int k) const {
    return lookup_int(f1_, k, [&] { return macro_core(k, true); });
  }
  double macro_coverage_limit(int k) const {
    return lookup_int(f1inf_, k, [&] { return macro_core(k, false); });
  }
  double pico_coverage(int k, double x) const {
    return lookup_kx(f2_, k, x, [&] { return pico_core(k, x, true); });
  }
  double pico_coverage_limit(int k, double x) const {
    return lookup_kx(f2inf_, k, x, [&] { return pico_core(k, x, false); });
  }

  // d/dx of pico_coverage_limit; at x = 0 the right-sided limit is returned
  // through a one-sided difference quotient.
  double pico_coverage_limit_deriv(int k, double x) const {
    return lookup_kx(f2d_, k, x, [&] { return pico_deriv_core(k, x); });
  }

 private:
  struct Terms {
    double theta;  // SINR threshold 2^{k tau / W} - 1
    double Bt1;    // beta tail at exponent alpha1
    double Bt2;    // beta tail at exponent alpha2
  };

  Terms terms(int k) const {
    {
      std::lock_guard<std::mutex> g(mu_);
      auto it = tk_.find(k);
      if (it != tk_.end()) return it->second;
    }
    const double e = static_cast<double>(k) * phy_.tau / phy_.W_hz;
    Terms t;
    t.theta = std::exp2(e) - 1.0;
    const double z = std::exp2(-e);
    t.Bt1 = comp_inc_beta(2.0 / phy_.alpha1, 1.0 - 2.0 / phy_.alpha1, z, cfg_);
    t.Bt2 = comp_inc_beta(2.0 / phy_.alpha2, 1.0 - 2.0 / phy_.alpha2, z, cfg_);
    std::lock_guard<std::mutex> g(mu_);
    return tk_.emplace(k, t).first->second;
  }

  double macro_core(int k, bool with_noise) const {
    if (k < 0) throw std::domain_error("macro coverage: load must be >= 0");
    const double pi = std::acos(-1.0);
    const Terms t = terms(k);
    if (t.theta == 0.0) return 1.0;
    const double c0 = with_noise ? t.theta * phy_.N0 / phy_.P1 : 0.0;
    const double cx = (2.0 * pi * phy_.lambda2 / phy_.alpha2) *
                      std::pow((phy_.P2 / phy_.P1) * t.theta, 2.0 / phy_.alpha2) * B2_;
    const double rate = pi * phy_.lambda1 *
                            (1.0 + (2.0 / phy_.alpha1) *
                                       std::pow(t.theta, 2.0 / phy_.alpha1) * t.Bt1);
    const double cross_exp = 2.0 * phy_.alpha1 / phy_.alpha2;
    auto f = [&](double d) {
      double a = -rate * d * d - cx * std::pow(d, cross_exp);
      if (c0 > 0.0) a -= c0 * std::pow(d, phy_.alpha1);
      return 2.0 * pi * phy_.lambda1 * d * std::exp(a);
    };
    return integrate_semi_infinite(f, rate, cfg_);
  }

  double pico_core(int k, double x, bool with_noise) const {
    if (k < 0) throw std::domain_error("pico coverage: load must be >= 0");
    if (x <= 0.0) return 0.0;
    x = std::min(x, 1.0);
    const double pi = std::acos(-1.0);
    const Terms t = terms(k);
    if (t.theta == 0.0) return 1.0;
    const double c0 = with_noise ? t.theta * phy_.N0 / phy_.P2 : 0.0;
    const double cx = (2.0 * pi * phy_.lambda1 / phy_.alpha1) *
                      std::pow((phy_.P1 / phy_.P2) * t.theta, 2.0 / phy_.alpha1) * B1_;
    const double rate =
        pi * phy_.lambda2 *
        (x + (2.0 / phy_.alpha2) * std::pow(t.theta, 2.0 / phy_.alpha2) *
                 (x * t.Bt2 + (1.0 - x) * B2_));
    const double cross_exp = 2.0 * phy_.alpha2 / phy_.alpha1;
    auto f = [&](double d) {
      double a = -rate * d * d - cx * std::pow(d, cross_exp);
      if (c0 > 0.0) a -= c0 * std::pow(d, phy_.alpha2);
      return 2.0 * pi * phy_.lambda2 * x * d * std::exp(a);
    };
    return integrate_semi_infinite(f, rate, cfg_);
  }

  double pico_deriv_core(int k, double x) const {
    if (x <= 0.0) {
      // Right-sided difference quotient of f(x)/x with Richardson step.
      const double h = 1e-6;
      const double a = pico_core(k, h, false) / h;
      const double b = pico_core(k, 2.0 * h, false) / (2.0 * h);
      return 2.0 * a - b;
    }
    x = std::min(x, 1.0);
    const double pi = std::acos(-1.0);
    const Terms t = terms(k);
    if (t.theta == 0.0) return 0.0;
    const double cx = (2.0 * pi * phy_.lambda1 / phy_.alpha1) *
                      std::pow((phy_.P1 / phy_.P2) * t.theta, 2.0 / phy_.alpha1) * B1_;
    const double rate =
        pi * phy_.lambda2 *
        (x + (2.0 / phy_.alpha2) * std::pow(t.theta, 2.0 / phy_.alpha2) *
                 (x * t.Bt2 + (1.0 - x) * B2_));
    // d(rate)/dx of the exponent, constant in d.
    const double drate =
        pi * phy_.lambda2 *
        (1.0 + (2.0 / phy_.alpha2) * std::pow(t.theta, 2.0 / phy_.alpha2) *
                   (t.Bt2 - B2_));
    const double cross_exp = 2.0 * phy_.alpha2 / phy_.alpha1;
    auto f = [&](double d) {
      return d * d * d * std::exp(-rate * d * d - cx * std::pow(d, cross_exp));
    };
    const double cubic = integrate_semi_infinite(f, rate, cfg_);
    return pico_core(k, x, false) / x -
           2.0 * pi * phy_.lambda2 * x * drate * cubic;
  }

  template <class Fn>
  double lookup_int(std::map<int, double>& cache, int k, Fn&& compute) const {
    {
      std::lock_guard<std::mutex> g(mu_);
      auto it = cache.find(k);
      if (it != cache.end()) return it->second;
    }
    const double v = compute();
    std::lock_guard<std::mutex> g(mu_);
    return cache.emplace(k, v).first->second;
  }

  template <class Fn>
  double lookup_kx(std::map<std::pair<int, uint64_t>, double>& cache, int k,
                   double x, Fn&& compute) const {
    const std::pair<int, uint64_t> key{k, std::bit_cast<uint64_t>(x)};
    {
      std::lock_guard<std::mutex> g(mu_);
      auto it = cache.find(key);
      if (it != cache.end()) return it->second;
    }
    const double v = compute();
    std::lock_guard<std::mutex> g(mu_);
    return cache.emplace(key, v).first->second;
  }

  PhyParams phy_;
  QuadratureConfig cfg_;
  double B1_ = 0.0, B2_ = 0.0;
  mutable std::mutex mu_;
  mutable std::map<int, Terms> tk_;
  mutable std::map<int, double> f1_, f1inf_;
  mutable std::map<std::pair<int, uint64_t>, double> f2_, f2inf_, f2d_;
};

}  // namespace hetcache
