#pragma once
// Monte Carlo ground truth. Worlds are sampled on a square window with the
// typical user at the center; only that user is scored. Replicates are
// deterministic functions of (seed, replicate, stream), so results do not
// depend on the thread count.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "hetcache/combinatorics.hpp"
#include "hetcache/model.hpp"
#include "hetcache/rng.hpp"

namespace hetcache {

enum class EdgePolicy { plain_window, torus };

struct SimConfig {
  double window_side = 15000.0;  // meters
  int realizations = 10000;
  std::uint64_t seed = 1;
  EdgePolicy edge_policy = EdgePolicy::plain_window;
  bool stratified = true;  // condition on every file, mix by popularity
  int threads = 1;         // 0 picks the hardware concurrency
};

inline std::vector<std::string> check_sim(const SimConfig& cfg) {
  std::vector<std::string> errs;
  if (!(cfg.window_side > 0.0))
    errs.push_back("window_side must be positive");
  if (cfg.realizations < 1)
    errs.push_back("realizations must be at least 1");
  if (cfg.threads < 0) errs.push_back("threads must be nonnegative");
  return errs;
}

// One sampled network: positions, requests, and the fading gains seen at the
// typical user. Coordinates live in [0, window).
struct World {
  double window = 0.0;
  bool torus = false;
  std::vector<double> macro_x, macro_y, h_macro;
  std::vector<double> pico_x, pico_y, h_pico;
  std::vector<double> user_x, user_y;
  std::vector<int> user_file;
  double u0_x = 0.0, u0_y = 0.0;
  int u0_file = 0;  // mixture draw, used by the non-stratified estimator
};

namespace detail {

inline double wrap_delta(double d, double window) {
  d = std::fabs(d);
  return d > 0.5 * window ? window - d : d;
}

}  // namespace detail

inline double dist2_between(double ax, double ay, double bx, double by,
                            double window, bool torus) {
  double dx = ax - bx, dy = ay - by;
  if (torus) {
    dx = detail::wrap_delta(dx, window);
    dy = detail::wrap_delta(dy, window);
  }
  return dx * dx + dy * dy;
}

inline World sample_world(const PhyParams& phy, const ContentParams& content,
                          const SimConfig& cfg, std::uint64_t replicate) {
  World w;
  w.window = cfg.window_side;
  w.torus = cfg.edge_policy == EdgePolicy::torus;
  w.u0_x = 0.5 * w.window;
  w.u0_y = 0.5 * w.window;

  SplitMix64 g = substream(cfg.seed, replicate, 0);
  const double area = w.window * w.window;
  const auto poisson_count = [&](double mean) {
    if (!(mean > 0.0)) return 0;
    return std::poisson_distribution<int>(mean)(g);
  };
  const int nm = poisson_count(phy.lambda1 * area);
  const int np = poisson_count(phy.lambda2 * area);
  const int nu = poisson_count(phy.lambda_u * area);

  std::uniform_real_distribution<double> pos(0.0, w.window);
  w.macro_x.resize(nm);
  w.macro_y.resize(nm);
  for (int j = 0; j < nm; ++j) {
    w.macro_x[j] = pos(g);
    w.macro_y[j] = pos(g);
  }
  w.pico_x.resize(np);
  w.pico_y.resize(np);
  for (int j = 0; j < np; ++j) {
    w.pico_x[j] = pos(g);
    w.pico_y[j] = pos(g);
  }
  std::discrete_distribution<int> req(content.a.begin(), content.a.end());
  w.user_x.resize(nu);
  w.user_y.resize(nu);
  w.user_file.resize(nu);
  for (int u = 0; u < nu; ++u) {
    w.user_x[u] = pos(g);
    w.user_y[u] = pos(g);
    w.user_file[u] = req(g) + 1;
  }
  std::exponential_distribution<double> fad(1.0);
  w.h_macro.resize(nm);
  for (int j = 0; j < nm; ++j) w.h_macro[j] = fad(g);
  w.h_pico.resize(np);
  for (int j = 0; j < np; ++j) w.h_pico[j] = fad(g);
  w.u0_file = req(g) + 1;
  return w;
}

// Nearest member of a point subset. Plain windows above the cutoff use a
// uniform bucket grid with ring search; the torus metric falls back to a
// linear scan. Ties resolve to the lower index.
class NearestFinder {
 public:
  NearestFinder() = default;

  NearestFinder(const std::vector<double>& xs, const std::vector<double>& ys,
                std::vector<int> members, double window, bool torus)
      : xs_(&xs), ys_(&ys), members_(std::move(members)), window_(window),
        torus_(torus) {
    if (torus_ || members_.size() < kGridCutoff) return;
    side_ = std::clamp(
        static_cast<int>(std::sqrt(static_cast<double>(members_.size()))), 1,
        128);
    cell_w_ = window_ / side_;
    const size_t cells = static_cast<size_t>(side_) * static_cast<size_t>(side_);
    start_.assign(cells + 1, 0);
    std::vector<int> cell_of(members_.size());
    for (size_t i = 0; i < members_.size(); ++i) {
      cell_of[i] = cell_index((*xs_)[members_[i]], (*ys_)[members_[i]]);
      ++start_[static_cast<size_t>(cell_of[i]) + 1];
    }
    for (size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    order_.resize(members_.size());
    std::vector<int> cursor(start_.begin(), start_.end() - 1);
    for (size_t i = 0; i < members_.size(); ++i)
      order_[static_cast<size_t>(cursor[cell_of[i]]++)] = members_[i];
    gridded_ = true;
  }

  bool empty() const { return members_.empty(); }

  int nearest(double qx, double qy, double* d2_out = nullptr) const {
    int best = -1;
    double best_d2 = std::numeric_limits<double>::infinity();
    const auto consider = [&](int m) {
      const double d2 = dist2_between(qx, qy, (*xs_)[m], (*ys_)[m], window_,
                                      torus_);
      if (d2 < best_d2 || (d2 == best_d2 && m < best)) {
        best_d2 = d2;
        best = m;
      }
    };
    if (!gridded_) {
      for (int m : members_) consider(m);
    } else {
      const int cx =
          std::clamp(static_cast<int>(qx / cell_w_), 0, side_ - 1);
      const int cy =
          std::clamp(static_cast<int>(qy / cell_w_), 0, side_ - 1);
      const auto scan_cell = [&](int gx, int gy) {
        if (gx < 0 || gy < 0 || gx >= side_ || gy >= side_) return;
        const size_t c = static_cast<size_t>(gy) * side_ + gx;
        for (int k = start_[c]; k < start_[c + 1]; ++k) consider(order_[k]);
      };
      for (int r = 0; r < side_; ++r) {
        if (best >= 0) {
          // Members of ring r lie at least (r-1) cell widths away.
          const double lower = (static_cast<double>(r) - 1.0) * cell_w_;
          if (lower > 0.0 && lower * lower > best_d2) break;
        }
        if (r == 0) {
          scan_cell(cx, cy);
          continue;
        }
        for (int gx = cx - r; gx <= cx + r; ++gx) {
          scan_cell(gx, cy - r);
          scan_cell(gx, cy + r);
        }
        for (int gy = cy - r + 1; gy <= cy + r - 1; ++gy) {
          scan_cell(cx - r, gy);
          scan_cell(cx + r, gy);
        }
      }
    }
    if (d2_out) *d2_out = best_d2;
    return best;
  }

 private:
  static constexpr size_t kGridCutoff = 16;

  int cell_index(double x, double y) const {
    const int gx = std::clamp(static_cast<int>(x / cell_w_), 0, side_ - 1);
    const int gy = std::clamp(static_cast<int>(y / cell_w_), 0, side_ - 1);
    return gy * side_ + gx;
  }

  const std::vector<double>* xs_ = nullptr;
  const std::vector<double>* ys_ = nullptr;
  std::vector<int> members_;
  double window_ = 0.0;
  bool torus_ = false;
  bool gridded_ = false;
  int side_ = 0;
  double cell_w_ = 0.0;
  std::vector<int> start_;
  std::vector<int> order_;
};

// Flat per-entity bitsets over file ids 1..N.
class FileMaskStore {
 public:
  FileMaskStore(int entities, int N)
      : words_(static_cast<size_t>(N) / 64 + 1),
        bits_(static_cast<size_t>(std::max(entities, 0)) * words_, 0) {}

  void set(int e, int file) {
    bits_[static_cast<size_t>(e) * words_ + static_cast<size_t>(file) / 64] |=
        1ull << (static_cast<unsigned>(file) % 64);
  }

  bool test(int e, int file) const {
    return (bits_[static_cast<size_t>(e) * words_ +
                  static_cast<size_t>(file) / 64] >>
            (static_cast<unsigned>(file) % 64)) &
           1ull;
  }

  int count(int e) const {
    int c = 0;
    for (size_t i = 0; i < words_; ++i)
      c += std::popcount(bits_[static_cast<size_t>(e) * words_ + i]);
    return c;
  }

  int count_with(int e, int file) const {
    return count(e) + (test(e, file) ? 0 : 1);
  }

 private:
  size_t words_;
  std::vector<std::uint64_t> bits_;
};

// Typical-user service for one file in one world: whether the file goes on
// the air at all, which BS carries it, and across how many files that BS
// splits its bandwidth.
struct FileOutcome {
  bool transmitted = false;
  int tier = 0;  // 1 macro, 2 pico, 0 unserved
  int bs = -1;
  int load = 0;
};

struct WorldEval {
  std::vector<double> rx_macro, rx_pico;  // P * h * d^-alpha at the center
  double total = 0.0;
};

// Received powers at the typical user. The torus policy is wrap-around: each
// BS contributes one ring of periodic images so the interference field
// approximates the infinite network; the strongest image carries the signal,
// the rest interfere. A plain window simply truncates at the boundary, which
// is exactly the edge bias the option exists to quantify.
inline WorldEval eval_received_power(const World& w, const PhyParams& phy) {
  WorldEval ev;
  const auto accumulate = [&](double bx, double by, double P, double h,
                              double alpha, double& rx_entry) {
    if (!w.torus) {
      const double d2 = std::max(
          dist2_between(w.u0_x, w.u0_y, bx, by, w.window, false), 1e-12);
      rx_entry = P * h * std::pow(d2, -0.5 * alpha);
      ev.total += rx_entry;
      return;
    }
    const double dx = w.u0_x - bx, dy = w.u0_y - by;
    double strongest = 0.0;
    for (int ix = -1; ix <= 1; ++ix) {
      for (int iy = -1; iy <= 1; ++iy) {
        const double ox = dx + ix * w.window;
        const double oy = dy + iy * w.window;
        const double d2 = std::max(ox * ox + oy * oy, 1e-12);
        const double term = P * h * std::pow(d2, -0.5 * alpha);
        ev.total += term;
        strongest = std::max(strongest, term);
      }
    }
    rx_entry = strongest;
  };
  ev.rx_macro.resize(w.macro_x.size());
  for (size_t j = 0; j < w.macro_x.size(); ++j)
    accumulate(w.macro_x[j], w.macro_y[j], phy.P1, w.h_macro[j], phy.alpha1,
               ev.rx_macro[j]);
  ev.rx_pico.resize(w.pico_x.size());
  for (size_t j = 0; j < w.pico_x.size(); ++j)
    accumulate(w.pico_x[j], w.pico_y[j], phy.P2, w.h_pico[j], phy.alpha2,
               ev.rx_pico[j]);
  return ev;
}

// Rate test at one noise level; threshold = 2^(load*tau/W) - 1 precomputed
// by the caller. Every BS interferes.
inline bool transmission_success(const WorldEval& ev, const FileOutcome& o,
                                 double threshold, double N0) {
  if (!o.transmitted || o.tier == 0 || o.bs < 0) return false;
  const double rx = o.tier == 1 ? ev.rx_macro[static_cast<size_t>(o.bs)]
                                : ev.rx_pico[static_cast<size_t>(o.bs)];
  const double interference = std::max(ev.total - rx, 0.0);
  return rx >= threshold * (N0 + interference);
}

// Proposed hybrid scheme: content-centric association. Users after a macro
// file attach to the nearest macro-BS; users after a pico-pool file attach
// to the nearest pico-BS storing it. Macro backhaul picks uniformly among
// the distinct uncached requests of the cell.
class HybridScheme {
 public:
  HybridScheme(const ContentParams& content, const HybridDesign& design,
               long long combo_cap = kDefaultComboCap)
      : content_(content), design_(design),
        F1b_(validated_backhaul_set(content, design)),
        idx_(enumerate_combinations(design.F2c, content.K2c, combo_cap)) {
    class_of_.assign(static_cast<size_t>(content.N) + 1, 0);
    for (int f : design_.F1c) class_of_[static_cast<size_t>(f)] = 1;
    for (int f : F1b_) class_of_[static_cast<size_t>(f)] = 2;
    for (int f : design_.F2c) class_of_[static_cast<size_t>(f)] = 3;
    cdf_.resize(design_.p.size());
    double acc = 0.0;
    for (size_t i = 0; i < design_.p.size(); ++i) {
      acc += design_.p[i];
      cdf_[i] = acc;
    }
    if (!cdf_.empty()) cdf_.back() = 1.0;
  }

  std::vector<FileOutcome> schedule(const World& w, SplitMix64& rng) const {
    const int N = content_.N;
    const int n_macro = static_cast<int>(w.macro_x.size());
    const int n_pico = static_cast<int>(w.pico_x.size());

    std::vector<std::vector<int>> storers(static_cast<size_t>(N) + 1);
    for (int j = 0; j < n_pico; ++j) {
      const double u = rng.uniform01();
      long long i = std::lower_bound(cdf_.begin(), cdf_.end(), u) -
                    cdf_.begin();
      i = std::min(i, idx_.count() - 1);
      const int* files = idx_.combo(i);
      for (int t = 0; t < idx_.K; ++t)
        storers[static_cast<size_t>(files[t])].push_back(j);
    }

    std::vector<int> all_macros(static_cast<size_t>(n_macro));
    std::iota(all_macros.begin(), all_macros.end(), 0);
    const NearestFinder macro_near(w.macro_x, w.macro_y,
                                   std::move(all_macros), w.window, w.torus);
    std::vector<NearestFinder> pico_near(static_cast<size_t>(N) + 1);
    for (int f : design_.F2c)
      if (!storers[static_cast<size_t>(f)].empty())
        pico_near[static_cast<size_t>(f)] =
            NearestFinder(w.pico_x, w.pico_y, storers[static_cast<size_t>(f)],
                          w.window, w.torus);

    FileMaskStore macro_cached(n_macro, N), macro_backhaul(n_macro, N),
        pico_served(n_pico, N);
    for (size_t u = 0; u < w.user_x.size(); ++u) {
      const int m = w.user_file[u];
      const int cls = class_of_[static_cast<size_t>(m)];
      if (cls == 1 || cls == 2) {
        const int b = macro_near.nearest(w.user_x[u], w.user_y[u]);
        if (b < 0) continue;
        if (cls == 1)
          macro_cached.set(b, m);
        else
          macro_backhaul.set(b, m);
      } else if (cls == 3 && !storers[static_cast<size_t>(m)].empty()) {
        const int p = pico_near[static_cast<size_t>(m)].nearest(w.user_x[u],
                                                                w.user_y[u]);
        if (p >= 0) pico_served.set(p, m);
      }
    }

    const int b0 =
        n_macro > 0 ? macro_near.nearest(w.u0_x, w.u0_y) : -1;
    std::vector<FileOutcome> out(static_cast<size_t>(N) + 1);
    for (int n = 1; n <= N; ++n) {
      FileOutcome& o = out[static_cast<size_t>(n)];
      const int cls = class_of_[static_cast<size_t>(n)];
      if (cls == 1 && b0 >= 0) {
        o.tier = 1;
        o.bs = b0;
        o.load = macro_cached.count_with(b0, n) +
                 std::min(content_.K1b, macro_backhaul.count(b0));
        o.transmitted = true;
      } else if (cls == 2 && b0 >= 0) {
        const int kb = macro_backhaul.count_with(b0, n);
        const int sel = std::min(content_.K1b, kb);
        o.tier = 1;
        o.bs = b0;
        o.load = macro_cached.count(b0) + sel;
        o.transmitted = rng.uniform01() * kb <= static_cast<double>(sel);
      } else if (cls == 3 && !storers[static_cast<size_t>(n)].empty()) {
        const int p0 = pico_near[static_cast<size_t>(n)].nearest(w.u0_x,
                                                                 w.u0_y);
        if (p0 >= 0) {
          o.tier = 2;
          o.bs = p0;
          o.load = pico_served.count_with(p0, n);
          o.transmitted = true;
        }
      }
    }
    return out;
  }

 private:
  ContentParams content_;
  HybridDesign design_;
  std::vector<int> F1b_;
  CombinationIndex idx_;
  std::vector<int> class_of_;
  std::vector<double> cdf_;
};

struct SchemePlugin {
  std::string name;
  std::function<std::vector<FileOutcome>(const World&, SplitMix64&)> schedule;
};

inline SchemePlugin hybrid_plugin(const ContentParams& content,
                                  const HybridDesign& design,
                                  long long combo_cap = kDefaultComboCap) {
  auto scheme =
      std::make_shared<const HybridScheme>(content, design, combo_cap);
  return {"hybrid", [scheme](const World& w, SplitMix64& g) {
            return scheme->schedule(w, g);
          }};
}

struct SimResult {
  double q = 0.0;
  double se = 0.0;
  std::vector<double> per_file;  // index 0 unused
  long long realizations = 0;
};

struct SimBatch {
  std::vector<std::vector<SimResult>> results;  // [scheme][N0 value]
  std::vector<std::string> warnings;
};

// Shared-world driver: every scheme sees the same realizations (positions,
// requests, fading), and every noise level reuses the same schedules. Scheme
// randomness runs on stream 1 + scheme index.
inline SimBatch simulate_schemes(const PhyParams& phy,
                                 const ContentParams& content,
                                 const std::vector<SchemePlugin>& schemes,
                                 const SimConfig& cfg,
                                 std::vector<double> N0_values = {}) {
  if (const auto errs = check_phy(phy); !errs.empty())
    throw std::invalid_argument("simulate_schemes: " + errs.front());
  if (const auto errs = check_content(content); !errs.empty())
    throw std::invalid_argument("simulate_schemes: " + errs.front());
  if (const auto errs = check_sim(cfg); !errs.empty())
    throw std::invalid_argument("simulate_schemes: " + errs.front());
  if (schemes.empty())
    throw std::invalid_argument("simulate_schemes: no schemes given");
  if (N0_values.empty()) N0_values.push_back(phy.N0);
  for (double v : N0_values)
    if (!(v >= 0.0))
      throw std::invalid_argument("simulate_schemes: N0 must be nonnegative");

  const int S = static_cast<int>(schemes.size());
  const int M = static_cast<int>(N0_values.size());
  const int R = cfg.realizations;
  const int N = content.N;

  SimBatch batch;
  const double area = cfg.window_side * cfg.window_side;
  if (phy.lambda1 * area < 20.0 || phy.lambda2 * area < 20.0)
    batch.warnings.push_back(
        "window holds fewer than ~20 BSs per tier; edge effects may bias the "
        "estimate");

  std::vector<double> thr(static_cast<size_t>(N) + 1, 0.0);
  for (int k = 0; k <= N; ++k)
    thr[static_cast<size_t>(k)] =
        std::exp2(static_cast<double>(k) * phy.tau / phy.W_hz) - 1.0;

  int T = cfg.threads <= 0
              ? std::max(1u, std::thread::hardware_concurrency())
              : cfg.threads;
  T = std::min(T, R);

  std::vector<std::vector<std::vector<long long>>> local_counts(
      static_cast<size_t>(T),
      std::vector<std::vector<long long>>(
          static_cast<size_t>(S) * M,
          std::vector<long long>(static_cast<size_t>(N) + 1, 0)));
  std::vector<std::vector<long long>> local_draws(
      static_cast<size_t>(T),
      std::vector<long long>(static_cast<size_t>(N) + 1, 0));
  std::vector<std::vector<double>> scores(
      static_cast<size_t>(S) * M, std::vector<double>(static_cast<size_t>(R)));

  const auto worker = [&](int t) {
    auto& counts = local_counts[static_cast<size_t>(t)];
    auto& draws = local_draws[static_cast<size_t>(t)];
    for (int r = t; r < R; r += T) {
      const World w =
          sample_world(phy, content, cfg, static_cast<std::uint64_t>(r));
      const WorldEval ev = eval_received_power(w, phy);
      if (!cfg.stratified) ++draws[static_cast<size_t>(w.u0_file)];
      for (int s = 0; s < S; ++s) {
        SplitMix64 sg = substream(cfg.seed, static_cast<std::uint64_t>(r),
                                  1 + static_cast<std::uint64_t>(s));
        const std::vector<FileOutcome> outcomes = schemes[s].schedule(w, sg);
        for (int m = 0; m < M; ++m) {
          const size_t cell = static_cast<size_t>(s) * M + m;
          double score = 0.0;
          if (cfg.stratified) {
            for (int n = 1; n <= N; ++n) {
              const FileOutcome& o = outcomes[static_cast<size_t>(n)];
              if (transmission_success(ev, o, thr[static_cast<size_t>(o.load)],
                                       N0_values[static_cast<size_t>(m)])) {
                ++counts[cell][static_cast<size_t>(n)];
                score += content.a[static_cast<size_t>(n - 1)];
              }
            }
          } else {
            const FileOutcome& o = outcomes[static_cast<size_t>(w.u0_file)];
            if (transmission_success(ev, o, thr[static_cast<size_t>(o.load)],
                                     N0_values[static_cast<size_t>(m)])) {
              ++counts[cell][static_cast<size_t>(w.u0_file)];
              score = 1.0;
            }
          }
          scores[cell][static_cast<size_t>(r)] = score;
        }
      }
    }
  };

  if (T == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(T));
    for (int t = 0; t < T; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }

  std::vector<std::vector<long long>> counts(
      static_cast<size_t>(S) * M,
      std::vector<long long>(static_cast<size_t>(N) + 1, 0));
  std::vector<long long> draws(static_cast<size_t>(N) + 1, 0);
  for (int t = 0; t < T; ++t) {
    for (size_t cell = 0; cell < counts.size(); ++cell)
      for (int n = 0; n <= N; ++n)
        counts[cell][static_cast<size_t>(n)] +=
            local_counts[static_cast<size_t>(t)][cell][static_cast<size_t>(n)];
    for (int n = 0; n <= N; ++n)
      draws[static_cast<size_t>(n)] +=
          local_draws[static_cast<size_t>(t)][static_cast<size_t>(n)];
  }

  batch.results.assign(static_cast<size_t>(S),
                       std::vector<SimResult>(static_cast<size_t>(M)));
  for (int s = 0; s < S; ++s) {
    for (int m = 0; m < M; ++m) {
      const size_t cell = static_cast<size_t>(s) * M + m;
      SimResult& res = batch.results[static_cast<size_t>(s)]
                                    [static_cast<size_t>(m)];
      res.realizations = R;
      res.per_file.assign(static_cast<size_t>(N) + 1, 0.0);
      if (cfg.stratified) {
        res.q = 0.0;
        for (int n = 1; n <= N; ++n) {
          res.per_file[static_cast<size_t>(n)] =
              static_cast<double>(counts[cell][static_cast<size_t>(n)]) / R;
          res.q += content.a[static_cast<size_t>(n - 1)] *
                   res.per_file[static_cast<size_t>(n)];
        }
      } else {
        long long hits = 0;
        for (int n = 1; n <= N; ++n) {
          hits += counts[cell][static_cast<size_t>(n)];
          res.per_file[static_cast<size_t>(n)] =
              draws[static_cast<size_t>(n)] > 0
                  ? static_cast<double>(counts[cell][static_cast<size_t>(n)]) /
                        static_cast<double>(draws[static_cast<size_t>(n)])
                  : 0.0;
        }
        res.q = static_cast<double>(hits) / R;
      }
      double sum = 0.0;
      for (double v : scores[cell]) sum += v;
      const double mean = sum / R;
      double ss = 0.0;
      for (double v : scores[cell]) {
        const double d = v - mean;
        ss += d * d;
      }
      res.se = R > 1 ? std::sqrt(ss / (static_cast<double>(R) * (R - 1.0)))
                     : 0.0;
    }
  }
  return batch;
}

inline SimResult monte_carlo_q(const PhyParams& phy,
                               const ContentParams& content,
                               const HybridDesign& design,
                               const SimConfig& cfg) {
  return simulate_schemes(phy, content, {hybrid_plugin(content, design)}, cfg,
                          {phy.N0})
      .results[0][0];
}

inline std::vector<SimResult> monte_carlo_n0_sweep(
    const PhyParams& phy, const ContentParams& content,
    const HybridDesign& design, const SimConfig& cfg,
    std::vector<double> N0_values) {
  return simulate_schemes(phy, content, {hybrid_plugin(content, design)}, cfg,
                          std::move(N0_values))
      .results[0];
}

}  // namespace hetcache
