#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hetcache/analysis.hpp"
#include "hetcache/simulate.hpp"

namespace {

hetcache::PhyParams reference_phy(double p_over_n0_db) {
  hetcache::PhyParams phy;
  phy.lambda1 = 5e-7;
  phy.lambda2 = 3e-6;
  phy.lambda_u = 5e-5;
  phy.P1 = std::pow(10.0, 1.5);
  phy.P2 = 1.0;
  phy.N0 = phy.P2 * std::pow(10.0, -p_over_n0_db / 10.0);
  phy.alpha1 = 4.0;
  phy.alpha2 = 4.0;
  phy.W_hz = 2e7;
  phy.tau = 2e4;
  return phy;
}

struct ReferenceCase {
  hetcache::ContentParams content;
  hetcache::HybridDesign design;
};

ReferenceCase reference_case() {
  ReferenceCase rc;
  rc.content.N = 10;
  rc.content.a = hetcache::zipf_popularity(10, 1.0);
  rc.content.K1c = 3;
  rc.content.K2c = 2;
  rc.content.K1b = 1;
  rc.design.F1c = {1, 2, 3};
  rc.design.F2c = {4, 5, 6};
  rc.design.p = {0.7, 0.2, 0.1};
  return rc;
}

// Minimal content/design pair used by crafted-world tests. Files: 1 cached
// at macros, 2 reachable over backhaul, 3 and 4 in the pico pool with the
// pair {3,4} stored deterministically.
struct TinyCase {
  hetcache::ContentParams content;
  hetcache::HybridDesign design;
};

TinyCase tiny_case(int K1b) {
  TinyCase tc;
  tc.content.N = 4;
  tc.content.a = hetcache::zipf_popularity(4, 1.0);
  tc.content.K1c = 1;
  tc.content.K2c = 2;
  tc.content.K1b = K1b;
  tc.design.F1c = {1};
  tc.design.F2c = {3, 4};
  tc.design.p = {1.0};
  return tc;
}

hetcache::World empty_world(double window) {
  hetcache::World w;
  w.window = window;
  w.torus = false;
  w.u0_x = 0.5 * window;
  w.u0_y = 0.5 * window;
  w.u0_file = 1;
  return w;
}

void add_macro(hetcache::World& w, double x, double y, double h = 1.0) {
  w.macro_x.push_back(x);
  w.macro_y.push_back(y);
  w.h_macro.push_back(h);
}

void add_pico(hetcache::World& w, double x, double y, double h = 1.0) {
  w.pico_x.push_back(x);
  w.pico_y.push_back(y);
  w.h_pico.push_back(h);
}

void add_user(hetcache::World& w, double x, double y, int file) {
  w.user_x.push_back(x);
  w.user_y.push_back(y);
  w.user_file.push_back(file);
}

}  // namespace

TEST_CASE("world sampling is reproducible and Poisson", "[simulate]") {
  const auto phy = reference_phy(80.0);
  const auto rc = reference_case();
  hetcache::SimConfig cfg;
  cfg.window_side = 15000.0;
  cfg.seed = 42;

  const auto w1 = hetcache::sample_world(phy, rc.content, cfg, 7);
  const auto w2 = hetcache::sample_world(phy, rc.content, cfg, 7);
  CHECK(w1.macro_x == w2.macro_x);
  CHECK(w1.user_file == w2.user_file);
  CHECK(w1.h_pico == w2.h_pico);
  CHECK(w1.u0_x == Catch::Approx(7500.0));
  CHECK(w1.u0_file >= 1);
  CHECK(w1.u0_file <= 10);

  const auto w3 = hetcache::sample_world(phy, rc.content, cfg, 8);
  CHECK(w1.macro_x != w3.macro_x);

  // Mean and variance of the macro count against the 112.5 target.
  const int reps = 1200;
  double sum = 0.0, sumsq = 0.0;
  for (int r = 0; r < reps; ++r) {
    const auto w = hetcache::sample_world(phy, rc.content, cfg,
                                          static_cast<std::uint64_t>(r));
    const double c = static_cast<double>(w.macro_x.size());
    sum += c;
    sumsq += c * c;
    for (int f : w.user_file) {
      CHECK(f >= 1);
      CHECK(f <= 10);
    }
  }
  const double mean = sum / reps;
  const double var = sumsq / reps - mean * mean;
  CHECK(std::fabs(mean - 112.5) < 3.0 * std::sqrt(112.5 / reps));
  CHECK(std::fabs(var - 112.5) < 3.0 * 112.5 * std::sqrt(2.0 / (reps - 1)));
}

TEST_CASE("pico void probability", "[simulate]") {
  auto phy = reference_phy(80.0);
  phy.lambda2 = 2e-6;
  const auto rc = reference_case();
  hetcache::SimConfig cfg;
  cfg.window_side = 1000.0;  // mean pico count 2
  cfg.seed = 5;
  const int reps = 2000;
  int empties = 0;
  for (int r = 0; r < reps; ++r)
    if (hetcache::sample_world(phy, rc.content, cfg,
                               static_cast<std::uint64_t>(r))
            .pico_x.empty())
      ++empties;
  const double want = std::exp(-2.0);
  const double sigma = std::sqrt(want * (1.0 - want) / reps);
  CHECK(std::fabs(static_cast<double>(empties) / reps - want) < 3.0 * sigma);
}

TEST_CASE("nearest member search", "[simulate]") {
  hetcache::SplitMix64 g(99);
  const double window = 1000.0;
  for (int torus = 0; torus <= 1; ++torus) {
    for (int rep = 0; rep < 25; ++rep) {
      const int n = 3 + static_cast<int>(g() % 120);
      std::vector<double> xs(static_cast<size_t>(n)), ys(xs);
      for (int i = 0; i < n; ++i) {
        xs[static_cast<size_t>(i)] = g.uniform01() * window;
        ys[static_cast<size_t>(i)] = g.uniform01() * window;
      }
      std::vector<int> members;
      for (int i = 0; i < n; ++i)
        if (g() % 4 != 0) members.push_back(i);
      const hetcache::NearestFinder finder(xs, ys, members, window,
                                           torus == 1);
      for (int q = 0; q < 40; ++q) {
        const double qx = g.uniform01() * window;
        const double qy = g.uniform01() * window;
        int want = -1;
        double want_d2 = std::numeric_limits<double>::infinity();
        for (int m : members) {
          const double d2 = hetcache::dist2_between(
              qx, qy, xs[static_cast<size_t>(m)], ys[static_cast<size_t>(m)],
              window, torus == 1);
          if (d2 < want_d2) {
            want_d2 = d2;
            want = m;
          }
        }
        double got_d2 = 0.0;
        const int got = finder.nearest(qx, qy, &got_d2);
        CHECK(got == want);
        if (want >= 0) CHECK(got_d2 == Catch::Approx(want_d2));
      }
    }
  }
  // Torus wrap pulls the far corner close.
  std::vector<double> xs = {990.0}, ys = {990.0};
  const hetcache::NearestFinder wrapped(xs, ys, {0}, 1000.0, true);
  double d2 = 0.0;
  wrapped.nearest(5.0, 5.0, &d2);
  CHECK(d2 == Catch::Approx(15.0 * 15.0 + 15.0 * 15.0));
}

TEST_CASE("file mask store", "[simulate]") {
  hetcache::FileMaskStore st(3, 130);  // three words per entity
  st.set(0, 1);
  st.set(0, 64);
  st.set(0, 65);
  st.set(0, 130);
  st.set(2, 7);
  CHECK(st.test(0, 64));
  CHECK(!st.test(0, 2));
  CHECK(!st.test(1, 7));
  CHECK(st.count(0) == 4);
  CHECK(st.count(1) == 0);
  CHECK(st.count_with(0, 130) == 4);
  CHECK(st.count_with(0, 99) == 5);
  CHECK(st.count_with(2, 7) == 1);
}

TEST_CASE("content-centric association on crafted worlds", "[simulate]") {
  const auto tc = tiny_case(1);
  const hetcache::HybridScheme scheme(tc.content, tc.design);
  hetcache::SplitMix64 rng(1);

  SECTION("typical user reaches the nearest macro") {
    auto w = empty_world(2000.0);
    add_macro(w, 1300.0, 1000.0);  // 300 m
    add_macro(w, 1900.0, 1000.0);  // 900 m
    const auto out = scheme.schedule(w, rng);
    CHECK(out[1].tier == 1);
    CHECK(out[1].bs == 0);
    CHECK(out[1].transmitted);
    CHECK(out[1].load == 1);  // only the typical request
  }

  SECTION("single other user adds one served file") {
    auto w = empty_world(2000.0);
    add_macro(w, 1300.0, 1000.0);
    add_user(w, 1200.0, 1000.0, 1);
    const auto out = scheme.schedule(w, rng);
    CHECK(out[1].load == 1);  // shared file, still one multicast stream
    auto w2 = empty_world(2000.0);
    add_macro(w2, 1300.0, 1000.0);
    add_user(w2, 1200.0, 1000.0, 2);  // backhaul request joins the macro load
    const auto out2 = scheme.schedule(w2, rng);
    CHECK(out2[1].load == 2);
  }

  SECTION("ample backhaul serves every uncached request") {
    // Six files so the fetch pool has two distinct candidates: the typical
    // request (file 2) plus one other user's file 3, both outside any cache.
    const hetcache::ContentParams wide{6, hetcache::zipf_popularity(6, 1.0),
                                       1, 2, 2};
    hetcache::HybridDesign design;
    design.F1c = {1};
    design.F2c = {5, 6};
    design.p = {1.0};
    const hetcache::HybridScheme s2(wide, design);
    auto w = empty_world(2000.0);
    add_macro(w, 1300.0, 1000.0);
    add_user(w, 900.0, 1000.0, 3);
    for (int draw = 0; draw < 200; ++draw) {
      const auto out = s2.schedule(w, rng);
      REQUIRE(out[2].transmitted);  // kb = 2 = K1b, the lottery is a lock
      CHECK(out[2].load == 2);      // no cached hits, two backhaul picks
      REQUIRE(out[3].transmitted);
    }
  }

  SECTION("zero backhaul quota never transmits pool-outside files") {
    const auto none = tiny_case(0);
    const hetcache::HybridScheme s0(none.content, none.design);
    auto w = empty_world(2000.0);
    add_macro(w, 1300.0, 1000.0);
    const auto out = s0.schedule(w, rng);
    CHECK(!out[2].transmitted);
  }

  SECTION("backhaul lottery hits at the selection ratio") {
    auto w = empty_world(8000.0);
    add_macro(w, 4100.0, 4000.0);
    // Two competing uncached requests; with the typical one kb = 3, K1b = 1.
    const hetcache::ContentParams wide{6, hetcache::zipf_popularity(6, 1.0),
                                       1, 2, 1};
    hetcache::HybridDesign design;
    design.F1c = {1};
    design.F2c = {5, 6};
    design.p = {1.0};
    const hetcache::HybridScheme s(wide, design);
    add_user(w, 3900.0, 4000.0, 3);
    add_user(w, 4200.0, 4000.0, 4);
    int hits = 0;
    const int reps = 30000;
    for (int r = 0; r < reps; ++r) {
      const auto out = s.schedule(w, rng);
      CHECK(out[2].load == 1);  // no cached hits, one backhaul slot
      if (out[2].transmitted) ++hits;
    }
    const double rate = static_cast<double>(hits) / reps;
    const double sigma = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / reps);
    CHECK(std::fabs(rate - 1.0 / 3.0) < 3.0 * sigma);
  }

  SECTION("pool files go to the nearest storing pico") {
    auto w = empty_world(2000.0);
    add_macro(w, 100.0, 100.0);
    add_pico(w, 1250.0, 1000.0);  // 250 m
    add_pico(w, 1100.0, 1000.0);  // 100 m
    add_user(w, 1120.0, 1000.0, 4);
    const auto out = scheme.schedule(w, rng);
    CHECK(out[3].tier == 2);
    CHECK(out[3].bs == 1);
    CHECK(out[3].load == 2);  // the user's file 4 plus the typical file 3
    CHECK(out[4].load == 1);  // file 4 is already served there
  }

  SECTION("no storer anywhere means failure") {
    hetcache::ContentParams c = tc.content;
    hetcache::HybridDesign d = tc.design;
    d.F2c = {2, 3, 4};
    c.K1c = 1;
    // All mass on {3,4}: file 2 has zero pico marginal.
    d.p = {0.0, 0.0, 1.0};
    const hetcache::HybridScheme s(c, d);
    auto w = empty_world(2000.0);
    add_macro(w, 1300.0, 1000.0);
    add_pico(w, 1100.0, 1000.0);
    const auto out = s.schedule(w, rng);
    CHECK(!out[2].transmitted);
    CHECK(out[3].transmitted);
  }
}

TEST_CASE("rate test against the Rayleigh closed form", "[simulate]") {
  // Lone macro at 500 m, threshold 1 (tau = W, one stream): success is
  // h >= d^alpha * N0 / P1 and the hit rate must match exp(-x).
  const double d = 500.0;
  const double N0 = 0.7 / (d * d * d * d);
  auto w = empty_world(2000.0);
  add_macro(w, 1000.0 + d, 1000.0);
  const hetcache::FileOutcome o{true, 1, 0, 1};
  hetcache::PhyParams phy = reference_phy(80.0);
  phy.P1 = 1.0;

  hetcache::SplitMix64 g(2024);
  int hits = 0;
  const int reps = 40000;
  for (int r = 0; r < reps; ++r) {
    w.h_macro[0] = -std::log(g.uniform01());
    const auto ev = hetcache::eval_received_power(w, phy);
    if (hetcache::transmission_success(ev, o, 1.0, N0)) ++hits;
  }
  const double want = std::exp(-0.7);
  const double sigma = std::sqrt(want * (1.0 - want) / reps);
  CHECK(std::fabs(static_cast<double>(hits) / reps - want) < 3.0 * sigma);

  // Zero threshold passes whenever the file is on the air.
  w.h_macro[0] = 1e-12;
  const auto ev = hetcache::eval_received_power(w, phy);
  CHECK(hetcache::transmission_success(ev, o, 0.0, N0));
  CHECK(!hetcache::transmission_success(
      ev, hetcache::FileOutcome{false, 1, 0, 1}, 0.0, N0));

  // Two stations: explicit SINR arithmetic.
  auto w2 = empty_world(2000.0);
  add_macro(w2, 1400.0, 1000.0, 2.0);   // rx = 2 * 400^-4 * P1
  add_macro(w2, 1000.0, 1200.0, 1.0);   // rx = 200^-4 * P1
  const auto ev2 = hetcache::eval_received_power(w2, phy);
  const double rx0 = 2.0 * std::pow(400.0, -4.0);
  const double rx1 = std::pow(200.0, -4.0);
  CHECK(ev2.total == Catch::Approx(rx0 + rx1).epsilon(1e-12));
  const double sinr = rx0 / (N0 + rx1);
  CHECK(hetcache::transmission_success(ev2, o, sinr * 0.999, N0));
  CHECK(!hetcache::transmission_success(ev2, o, sinr * 1.001, N0));

  // Wrap-around: one station on a torus contributes a full ring of periodic
  // images to the interference; the strongest image carries the signal.
  auto w3 = empty_world(1000.0);
  w3.torus = true;
  add_macro(w3, 800.0, 500.0, 1.0);  // dx = -300 from the center
  const auto ev3 = hetcache::eval_received_power(w3, phy);
  double want_total = 0.0;
  for (int ix = -1; ix <= 1; ++ix)
    for (int iy = -1; iy <= 1; ++iy) {
      const double ox = -300.0 + ix * 1000.0, oy = iy * 1000.0;
      want_total += std::pow(ox * ox + oy * oy, -2.0);
    }
  CHECK(ev3.total == Catch::Approx(want_total).epsilon(1e-12));
  CHECK(ev3.rx_macro[0] ==
        Catch::Approx(std::pow(300.0, -4.0)).epsilon(1e-12));
}

TEST_CASE("driver determinism and shared worlds", "[simulate]") {
  const auto phy = reference_phy(80.0);
  const auto rc = reference_case();
  hetcache::SimConfig cfg;
  cfg.window_side = 4000.0;
  cfg.realizations = 400;
  cfg.seed = 11;

  cfg.threads = 1;
  const auto one = hetcache::monte_carlo_q(phy, rc.content, rc.design, cfg);
  cfg.threads = 4;
  const auto four = hetcache::monte_carlo_q(phy, rc.content, rc.design, cfg);
  cfg.threads = 7;
  const auto seven = hetcache::monte_carlo_q(phy, rc.content, rc.design, cfg);
  CHECK(one.q == four.q);
  CHECK(one.se == four.se);
  CHECK(one.per_file == four.per_file);
  CHECK(one.q == seven.q);
  CHECK(one.se == seven.se);

  // Adding a second scheme must not disturb the first one's stream.
  const auto solo = hetcache::simulate_schemes(
      phy, rc.content, {hetcache::hybrid_plugin(rc.content, rc.design)}, cfg);
  const auto pair = hetcache::simulate_schemes(
      phy, rc.content,
      {hetcache::hybrid_plugin(rc.content, rc.design),
       hetcache::hybrid_plugin(rc.content, rc.design)},
      cfg);
  CHECK(solo.results[0][0].q == pair.results[0][0].q);
  CHECK(solo.results[0][0].se == pair.results[0][0].se);

  // Mixture draw agrees with the stratified estimate.
  hetcache::SimConfig naive = cfg;
  naive.stratified = false;
  naive.realizations = 3000;
  const auto mixed = hetcache::monte_carlo_q(phy, rc.content, rc.design,
                                             naive);
  hetcache::SimConfig strat = naive;
  strat.stratified = true;
  const auto cond = hetcache::monte_carlo_q(phy, rc.content, rc.design,
                                            strat);
  CHECK(std::fabs(mixed.q - cond.q) <
        4.0 * std::sqrt(mixed.se * mixed.se + cond.se * cond.se) + 1e-9);
  CHECK(cond.se < mixed.se);  // conditioning strictly reduces variance here

  // Quadrupling the sample roughly halves the standard error.
  hetcache::SimConfig big = cfg;
  big.realizations = 1600;
  const auto wide = hetcache::monte_carlo_q(phy, rc.content, rc.design, big);
  CHECK(wide.se < 0.75 * one.se);
  CHECK(wide.se > 0.25 * one.se);
}

TEST_CASE("driver validation and warnings", "[simulate]") {
  const auto phy = reference_phy(80.0);
  const auto rc = reference_case();
  hetcache::SimConfig cfg;
  cfg.realizations = 0;
  CHECK_THROWS_AS(hetcache::monte_carlo_q(phy, rc.content, rc.design, cfg),
                  std::invalid_argument);
  cfg.realizations = 10;
  cfg.window_side = -1.0;
  CHECK_THROWS_AS(hetcache::monte_carlo_q(phy, rc.content, rc.design, cfg),
                  std::invalid_argument);
  cfg.window_side = 1500.0;  // about one macro expected
  const auto batch = hetcache::simulate_schemes(
      phy, rc.content, {hetcache::hybrid_plugin(rc.content, rc.design)}, cfg);
  CHECK(!batch.warnings.empty());

  hetcache::HybridDesign bad = rc.design;
  bad.p = {0.5, 0.5};
  CHECK_THROWS_AS(hetcache::hybrid_plugin(rc.content, bad),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      hetcache::simulate_schemes(phy, rc.content, {}, cfg),
      std::invalid_argument);
}

TEST_CASE("estimate matches the analytic value", "[simulate]") {
  const auto phy = reference_phy(80.0);
  const auto rc = reference_case();
  hetcache::SimConfig cfg;
  cfg.window_side = 15000.0;
  cfg.realizations = 2500;
  cfg.seed = 3;
  cfg.threads = 0;

  const auto sweep = hetcache::monte_carlo_n0_sweep(
      phy, rc.content, rc.design, cfg,
      {std::pow(10.0, -6.0), std::pow(10.0, -8.0), std::pow(10.0, -10.0),
       std::pow(10.0, -12.0)});
  const double analytic[] = {0.121286978637, 0.589668027324, 0.794699007789,
                             0.799481057907};
  for (size_t i = 0; i < sweep.size(); ++i) {
    CAPTURE(i, sweep[i].q, sweep[i].se);
    CHECK(std::fabs(sweep[i].q - analytic[i]) <
          std::max(0.03, 4.0 * sweep[i].se));
    if (i > 0) CHECK(sweep[i].q >= sweep[i - 1].q);
  }

  // Files served by no tier under the design contribute nothing.
  hetcache::ContentParams c = rc.content;
  c.K1b = 0;
  const auto res = hetcache::monte_carlo_q(phy, c, rc.design, cfg);
  for (int n = 7; n <= 10; ++n) CHECK(res.per_file[static_cast<size_t>(n)] == 0.0);
}

TEST_CASE("plain window retains more power than the torus", "[simulate]") {
  // Interference-limited setup so the edge treatment decides outcomes. The
  // wrap-around images raise the interference seen at the center, hence the
  // truncated window must look strictly rosier.
  auto phy = reference_phy(80.0);
  phy.N0 = 0.0;
  phy.alpha1 = phy.alpha2 = 3.0;
  phy.tau = 1e7;
  const auto rc = reference_case();
  hetcache::SimConfig cfg;
  cfg.window_side = 2000.0;
  cfg.realizations = 1500;
  cfg.seed = 17;
  cfg.threads = 0;
  const auto plain = hetcache::monte_carlo_q(phy, rc.content, rc.design, cfg);
  cfg.edge_policy = hetcache::EdgePolicy::torus;
  const auto torus = hetcache::monte_carlo_q(phy, rc.content, rc.design, cfg);
  const double pooled = std::sqrt(plain.se * plain.se + torus.se * torus.se);
  CHECK(plain.q > torus.q + 2.0 * pooled);
}
