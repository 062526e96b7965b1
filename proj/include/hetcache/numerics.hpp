#pragma once
// Scalar quadrature, beta integrals, and root bracketing shared by the
// analytic kernels and the optimizer.

#include <cmath>
#include <cstddef>
#include <functional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace hetcache {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 4000;
};

namespace detail {

// Gauss-Kronrod 7/15 pair on [-1,1]; nonnegative abscissae, symmetric.
inline constexpr double kGkNode[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kGkWeight[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeight[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
Segment gk15(const F& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kGkNode[i];
    const double fsum = f(mid - dx) + f(mid + dx);
    kron += kGkWeight[i] * fsum;
    if (i % 2 == 1) gauss += kGaussWeight[i / 2] * fsum;
  }
  const double fc = f(mid);
  kron += kGkWeight[7] * fc;
  gauss += kGaussWeight[3] * fc;
  return {a, b, kron * h, std::fabs((kron - gauss) * h)};
}

}  // namespace detail

// Adaptive Gauss-Kronrod on a finite interval; refines the segment with the
// largest error estimate until abs/rel tolerance or the subdivision cap.
template <class F>
double integrate_adaptive(const F& f, double a, double b,
                          const QuadratureConfig& cfg = {}) {
  if (!(a < b)) return 0.0;
  std::priority_queue<detail::Segment> heap;
  detail::Segment s0 = detail::gk15(f, a, b);
  double total = s0.value, err = s0.error;
  heap.push(s0);
  int splits = 0;
  while (err > std::max(cfg.abs_tol, cfg.rel_tol * std::fabs(total)) &&
         splits < cfg.max_subdivisions) {
    detail::Segment top = heap.top();
    heap.pop();
    const double m = 0.5 * (top.a + top.b);
    if (m <= top.a || m >= top.b) break;  // interval exhausted in double
    detail::Segment l = detail::gk15(f, top.a, m);
    detail::Segment r = detail::gk15(f, m, top.b);
    total += l.value + r.value - top.value;
    err += l.error + r.error - top.error;
    heap.push(l);
    heap.push(r);
    ++splits;
  }
  return total;
}

// Euler beta B(x, y), x > 0, y > 0.
inline double beta(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::domain_error("beta: arguments must be positive");
  return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

// Upper tail of the beta integral: int_z^1 u^{x-1}(1-u)^{y-1} du.
// The u = 1 - v^{1/y} substitution removes the (1-u)^{y-1} endpoint
// singularity, leaving (1/y) int_0^{(1-z)^y} (1 - v^{1/y})^{x-1} dv.
inline double comp_inc_beta(double x, double y, double z,
                            const QuadratureConfig& cfg = {}) {
  if (!(x > 0.0) || !(y > 0.0))
    throw std::domain_error("comp_inc_beta: x and y must be positive");
  if (!(z >= 0.0 && z <= 1.0))
    throw std::domain_error("comp_inc_beta: z must lie in [0, 1]");
  if (z == 0.0) return beta(x, y);
  if (z == 1.0) return 0.0;
  const double vmax = std::pow(1.0 - z, y);
  const double inv_y = 1.0 / y;
  auto h = [&](double v) { return std::pow(1.0 - std::pow(v, inv_y), x - 1.0); };
  return inv_y * integrate_adaptive(h, 0.0, vmax, cfg);
}

// int_0^inf f(d) dd for integrands dominated by exp(-gaussian_rate * d^2).
// Maps to (0,1) through u = exp(-gaussian_rate * d^2); the rate should match
// (or at least not exceed) the true Gaussian decay of f.
template <class F>
double integrate_semi_infinite(const F& f, double gaussian_rate,
                               const QuadratureConfig& cfg = {}) {
  if (!(gaussian_rate > 0.0))
    throw std::domain_error("integrate_semi_infinite: rate must be positive");
  const double c = gaussian_rate;
  auto t = [&](double u) {
    const double d = std::sqrt(-std::log(u) / c);
    if (d == 0.0) return 0.0;
    return f(d) / (2.0 * c * d * u);
  };
  return integrate_adaptive(t, 0.0, 1.0, cfg);
}

// Bisection for nondecreasing g; returns m with g(m) ~ target.
// Throws if [lo, hi] does not bracket the target (small slack for roundoff).
template <class G>
double bisect_monotone(const G& g, double target, double lo, double hi,
                       double tol = 1e-12) {
  if (!(lo < hi)) throw std::domain_error("bisect_monotone: empty interval");
  const double glo = g(lo), ghi = g(hi);
  const double slack =
      1e-9 * (std::fabs(glo) + std::fabs(ghi) + std::fabs(target)) + 1e-12;
  if (glo > target + slack || ghi < target - slack)
    throw std::domain_error("bisect_monotone: target not bracketed");
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace hetcache
