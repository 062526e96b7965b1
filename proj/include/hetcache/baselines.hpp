#pragma once
// Comparison caching schemes. Each baseline fixes per-BS cache content by a
// simple rule and associates users to the qualifying BS with the largest
// long-term average receive power, either tier.

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hetcache/model.hpp"
#include "hetcache/rng.hpp"
#include "hetcache/simulate.hpp"

namespace hetcache {

enum class BaselineKind { most_popular, iid_popularity, uniform_combination };

inline const char* baseline_name(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::most_popular: return "most_popular";
    case BaselineKind::iid_popularity: return "iid_popularity";
    case BaselineKind::uniform_combination: return "uniform_combination";
  }
  return "unknown";
}

class BaselineScheme {
 public:
  BaselineScheme(const PhyParams& phy, const ContentParams& content,
                 BaselineKind kind)
      : phy_(phy), content_(content), kind_(kind) {}

  // Macro-BSs hold K1c + K1b slots (stored plus fetched, one multiset),
  // pico-BSs hold K2c. Duplicate draws collapse in the mask, wasting slots.
  void draw_caches(int n_macro, int n_pico, SplitMix64& rng,
                   FileMaskStore& macro_store,
                   FileMaskStore& pico_store) const {
    const int N = content_.N;
    std::discrete_distribution<int> req(content_.a.begin(),
                                        content_.a.end());
    const auto fill = [&](FileMaskStore& st, int b, int size) {
      const int K = std::min(size, N);
      if (K <= 0) return;
      switch (kind_) {
        case BaselineKind::most_popular:
          for (int f = 1; f <= K; ++f) st.set(b, f);
          break;
        case BaselineKind::iid_popularity:
          for (int d = 0; d < size; ++d) st.set(b, req(rng) + 1);
          break;
        case BaselineKind::uniform_combination:
          // Floyd's uniform K-subset of 1..N.
          for (int j = N - K; j < N; ++j) {
            const int t = std::uniform_int_distribution<int>(0, j)(rng);
            if (st.test(b, t + 1))
              st.set(b, j + 1);
            else
              st.set(b, t + 1);
          }
          break;
      }
    };
    for (int b = 0; b < n_macro; ++b)
      fill(macro_store, b, content_.K1c + content_.K1b);
    for (int b = 0; b < n_pico; ++b) fill(pico_store, b, content_.K2c);
  }

  std::vector<FileOutcome> schedule(const World& w, SplitMix64& rng) const {
    const int N = content_.N;
    const int n_macro = static_cast<int>(w.macro_x.size());
    const int n_pico = static_cast<int>(w.pico_x.size());

    FileMaskStore macro_store(n_macro, N), pico_store(n_pico, N);
    draw_caches(n_macro, n_pico, rng, macro_store, pico_store);

    std::vector<std::vector<int>> m_storers(static_cast<size_t>(N) + 1),
        p_storers(static_cast<size_t>(N) + 1);
    for (int b = 0; b < n_macro; ++b)
      for (int f = 1; f <= N; ++f)
        if (macro_store.test(b, f))
          m_storers[static_cast<size_t>(f)].push_back(b);
    for (int b = 0; b < n_pico; ++b)
      for (int f = 1; f <= N; ++f)
        if (pico_store.test(b, f))
          p_storers[static_cast<size_t>(f)].push_back(b);

    std::vector<NearestFinder> m_near(static_cast<size_t>(N) + 1),
        p_near(static_cast<size_t>(N) + 1);
    for (int f = 1; f <= N; ++f) {
      if (!m_storers[static_cast<size_t>(f)].empty())
        m_near[static_cast<size_t>(f)] =
            NearestFinder(w.macro_x, w.macro_y,
                          std::move(m_storers[static_cast<size_t>(f)]),
                          w.window, w.torus);
      if (!p_storers[static_cast<size_t>(f)].empty())
        p_near[static_cast<size_t>(f)] =
            NearestFinder(w.pico_x, w.pico_y,
                          std::move(p_storers[static_cast<size_t>(f)]),
                          w.window, w.torus);
    }

    // Macro wins exact ties (larger power, then shorter distance, then tier).
    struct Server {
      int tier = 0;
      int bs = -1;
    };
    const auto best_server = [&](int m, double x, double y) {
      Server srv;
      double d2m = 0.0, d2p = 0.0;
      const int bm = m_near[static_cast<size_t>(m)].empty()
                         ? -1
                         : m_near[static_cast<size_t>(m)].nearest(x, y, &d2m);
      const int bp = p_near[static_cast<size_t>(m)].empty()
                         ? -1
                         : p_near[static_cast<size_t>(m)].nearest(x, y, &d2p);
      double vm = -1.0, vp = -1.0;
      if (bm >= 0)
        vm = phy_.P1 * std::pow(std::max(d2m, 1e-12), -0.5 * phy_.alpha1);
      if (bp >= 0)
        vp = phy_.P2 * std::pow(std::max(d2p, 1e-12), -0.5 * phy_.alpha2);
      if (bm >= 0 && (bp < 0 || vm > vp || (vm == vp && d2m <= d2p))) {
        srv.tier = 1;
        srv.bs = bm;
      } else if (bp >= 0) {
        srv.tier = 2;
        srv.bs = bp;
      }
      return srv;
    };

    FileMaskStore macro_served(n_macro, N), pico_served(n_pico, N);
    for (size_t u = 0; u < w.user_x.size(); ++u) {
      const Server srv =
          best_server(w.user_file[u], w.user_x[u], w.user_y[u]);
      if (srv.tier == 1)
        macro_served.set(srv.bs, w.user_file[u]);
      else if (srv.tier == 2)
        pico_served.set(srv.bs, w.user_file[u]);
    }

    std::vector<FileOutcome> out(static_cast<size_t>(N) + 1);
    for (int n = 1; n <= N; ++n) {
      const Server srv = best_server(n, w.u0_x, w.u0_y);
      FileOutcome& o = out[static_cast<size_t>(n)];
      if (srv.tier == 0) continue;
      o.tier = srv.tier;
      o.bs = srv.bs;
      o.load = srv.tier == 1 ? macro_served.count_with(srv.bs, n)
                             : pico_served.count_with(srv.bs, n);
      o.transmitted = true;
    }
    return out;
  }

 private:
  PhyParams phy_;
  ContentParams content_;
  BaselineKind kind_;
};

inline SchemePlugin baseline_plugin(const PhyParams& phy,
                                    const ContentParams& content,
                                    BaselineKind kind) {
  auto scheme = std::make_shared<const BaselineScheme>(phy, content, kind);
  return {baseline_name(kind), [scheme](const World& w, SplitMix64& g) {
            return scheme->schedule(w, g);
          }};
}

}  // namespace hetcache
