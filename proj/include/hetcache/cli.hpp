#pragma once
// Batch front-end behind the `hetcache` binary. Subcommands analyze,
// optimize, simulate, compare; CSV or JSON out, byte-stable given the same
// config and seed. Exit codes: 0 success, 2 config or validation problem,
// 3 numerical non-convergence.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hetcache/analysis.hpp"
#include "hetcache/baselines.hpp"
#include "hetcache/combinatorics.hpp"
#include "hetcache/config_io.hpp"
#include "hetcache/optimize.hpp"
#include "hetcache/simulate.hpp"

namespace hetcache {

struct CliOptions {
  std::string config_path, sweep_path, out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<int> threads;
  bool asymptotic_scoring = false;
};

namespace cli_detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Absent sweep renders as one row with blank path markers.
struct SweepPlan {
  std::string parameter;
  std::vector<double> values{0.0};
  std::vector<std::string> outputs;
  bool active = false;
};

inline SweepPlan sweep_plan(const CliOptions& opt) {
  SweepPlan plan;
  if (opt.sweep_path.empty()) return plan;
  const SweepSpec spec = load_sweep(opt.sweep_path);
  plan.parameter = spec.parameter;
  plan.values = spec.values;
  plan.outputs = spec.outputs;
  plan.active = true;
  return plan;
}

inline void emit(const std::string& text, const CliOptions& opt,
                 std::ostream& out, std::ostream& err) {
  if (opt.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(opt.out_path, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file: " + opt.out_path);
  f << text;
  err << "wrote " << opt.out_path << "\n";
}

inline SimConfig sim_config(const CliOptions& opt) {
  SimConfig cfg;
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.realizations) cfg.realizations = *opt.realizations;
  if (opt.threads) cfg.threads = *opt.threads;
  return cfg;
}

inline OptConfig opt_config(const CliOptions& opt) {
  OptConfig oc;
  if (opt.seed) oc.seed = *opt.seed;
  oc.asymptotic_scoring = opt.asymptotic_scoring;
  return oc;
}

inline void require_valid(const RunConfig& rc) {
  if (const auto errs = check_phy(rc.phy); !errs.empty())
    throw ConfigError("phy: " + errs.front());
  if (const auto errs = check_content(rc.content); !errs.empty())
    throw ConfigError("content: " + errs.front());
}

inline const HybridDesign& require_design(const RunConfig& rc,
                                          const char* cmd) {
  if (!rc.design)
    throw ConfigError(std::string(cmd) + " requires a design block");
  const ValidationResult v = validate_design(rc.content, *rc.design);
  if (!v.ok) throw ConfigError("design: " + v.errors.front());
  return *rc.design;
}

// Sweep points are independent; run them in waves of the requested width.
template <typename F>
std::vector<std::string> parallel_rows(const std::vector<double>& values,
                                       int threads, F&& row_of) {
  const int width = threads > 0
                        ? threads
                        : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::string> rows(values.size());
  for (size_t base = 0; base < values.size();
       base += static_cast<size_t>(width)) {
    const size_t stop =
        std::min(values.size(), base + static_cast<size_t>(width));
    std::vector<std::future<std::string>> wave;
    for (size_t i = base; i < stop; ++i)
      wave.push_back(std::async(std::launch::async,
                                [&row_of, &values, i] {
                                  return row_of(values[i], i);
                                }));
    for (size_t i = base; i < stop; ++i) rows[i] = wave[i - base].get();
  }
  return rows;
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace cli_detail

inline Json solution_to_json(const ContentParams& content,
                             const Solution& sol) {
  Json j;
  j["F1c"] = sol.design.F1c;
  j["F2c"] = sol.design.F2c;
  j["F1b"] = sol.F1b;
  const CombinationIndex idx =
      enumerate_combinations(sol.design.F2c, content.K2c);
  Json support = Json::array();
  for (long long i = 0; i < idx.count(); ++i) {
    if (!(sol.design.p[static_cast<size_t>(i)] > 0.0)) continue;
    Json entry;
    std::vector<int> files(idx.combo_files.begin() + i * idx.K,
                           idx.combo_files.begin() + (i + 1) * idx.K);
    entry["files"] = files;
    entry["probability"] = sol.design.p[static_cast<size_t>(i)];
    support.push_back(std::move(entry));
  }
  j["p"] = std::move(support);
  j["T"] = Json{{"files", sol.T.files}, {"T", sol.T.T}};
  j["q_general"] = sol.q_general;
  j["q1_general"] = sol.q1_general;
  j["q2_general"] = sol.q2_general;
  j["q_asymptotic"] = sol.q_asymptotic;
  j["n1c"] = sol.n1c;
  j["candidate_count"] = sol.candidate_count;
  j["evaluated_count"] = sol.evaluated_count;
  j["gradient_iterations"] = sol.gradient_iterations;
  j["kkt_residual"] = sol.kkt_residual;
  j["used_waterfill"] = sol.used_waterfill;
  j["asymptotic_scored"] = sol.asymptotic_scored;
  return j;
}

inline int cmd_analyze(const CliOptions& opt, std::ostream& out,
                       std::ostream& err) {
  const RunConfig base = load_config(opt.config_path);
  cli_detail::require_valid(base);
  cli_detail::require_design(base, "analyze");
  const cli_detail::SweepPlan plan = cli_detail::sweep_plan(opt);

  std::vector<std::string> columns = {"q",      "q1",     "q2",
                                      "q_inf",  "q1_inf", "q2_inf",
                                      "per_file"};
  if (!plan.outputs.empty()) {
    for (const std::string& o : plan.outputs)
      if (std::find(columns.begin(), columns.end(), o) == columns.end())
        throw ConfigError("unknown sweep output: " + o);
    columns = plan.outputs;
  }
  const bool per_file =
      std::find(columns.begin(), columns.end(), "per_file") != columns.end();
  if (per_file && plan.parameter == "content.N")
    throw ConfigError("per_file output cannot ride a content.N sweep");

  std::ostringstream csv;
  csv << "# hetcache analyze csv v1\n";
  csv << "param,value";
  for (const std::string& c : columns) {
    if (c == "per_file") {
      for (int n = 1; n <= base.content.N; ++n) csv << ",file_" << n;
    } else {
      csv << "," << c;
    }
  }
  csv << "\n";

  const auto row_of = [&](double value, size_t) {
    RunConfig rc = base;
    if (plan.active) apply_parameter(rc, plan.parameter, value);
    cli_detail::require_valid(rc);
    const HybridDesign& design = cli_detail::require_design(rc, "analyze");
    const KernelTable kt(rc.phy);
    const EvalReport rep = evaluate_general(kt, rc.content, design);
    const CombinationIndex idx =
        enumerate_combinations(design.F2c, rc.content.K2c);
    const Marginals T = marginals_from_p(idx, design.p);
    const AsymptoticReport lim =
        evaluate_limit(kt, rc.content, design.F1c, design.F2c, T);
    std::ostringstream row;
    row << (plan.active ? cli_detail::csv_escape(plan.parameter) : "-") << ","
        << (plan.active ? cli_detail::fmt(value) : "-");
    for (const std::string& c : columns) {
      if (c == "q") row << "," << cli_detail::fmt(rep.q);
      else if (c == "q1") row << "," << cli_detail::fmt(rep.q1);
      else if (c == "q2") row << "," << cli_detail::fmt(rep.q2);
      else if (c == "q_inf") row << "," << cli_detail::fmt(lim.q);
      else if (c == "q1_inf") row << "," << cli_detail::fmt(lim.q1);
      else if (c == "q2_inf") row << "," << cli_detail::fmt(lim.q2);
      else
        for (double v : rep.per_file) row << "," << cli_detail::fmt(v);
    }
    row << "\n";
    return row.str();
  };
  const std::vector<std::string> rows = cli_detail::parallel_rows(
      plan.values, opt.threads.value_or(1), row_of);
  for (const std::string& r : rows) csv << r;
  cli_detail::emit(csv.str(), opt, out, err);
  return 0;
}

inline int cmd_optimize(const CliOptions& opt, std::ostream& out,
                        std::ostream& err) {
  const RunConfig rc = load_config(opt.config_path);
  cli_detail::require_valid(rc);
  const OptConfig oc = cli_detail::opt_config(opt);

  const auto t0 = std::chrono::steady_clock::now();
  const size_t structured = structured_candidates(rc.content).size();
  const Solution sol = near_optimal(rc.phy, rc.content, oc);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  err << "candidates: " << structured << " structured, "
      << sol.candidate_count << " after the tier filter, "
      << sol.evaluated_count << " scored\n";
  err << "q = " << cli_detail::fmt(sol.q_general) << " (macro "
      << cli_detail::fmt(sol.q1_general) << " + pico "
      << cli_detail::fmt(sol.q2_general) << "), saturated limit "
      << cli_detail::fmt(sol.q_asymptotic) << "\n";
  err << "|F1c| = " << sol.design.F1c.size() << ", |F2c| = "
      << sol.design.F2c.size() << ", split point n1c = " << sol.n1c << "\n";
  err << "wall " << cli_detail::fmt(secs) << " s\n";

  cli_detail::emit(solution_to_json(rc.content, sol).dump(2) + "\n", opt, out,
                   err);
  return 0;
}

inline int cmd_simulate(const CliOptions& opt, std::ostream& out,
                        std::ostream& err) {
  const RunConfig base = load_config(opt.config_path);
  cli_detail::require_valid(base);
  const HybridDesign& design = cli_detail::require_design(base, "simulate");
  const SimConfig cfg = cli_detail::sim_config(opt);
  const cli_detail::SweepPlan plan = cli_detail::sweep_plan(opt);

  std::ostringstream csv;
  csv << "# hetcache simulate csv v1\n";
  csv << "param,value,scheme,q,se,realizations\n";
  std::vector<std::string> warnings;
  const auto append = [&](double value, const SimResult& res) {
    csv << (plan.active ? cli_detail::csv_escape(plan.parameter) : "-") << ","
        << (plan.active ? cli_detail::fmt(value) : "-") << ",hybrid,"
        << cli_detail::fmt(res.q) << "," << cli_detail::fmt(res.se) << ","
        << res.realizations << "\n";
  };

  const bool n0_sweep = plan.active && (plan.parameter == "phy.N0" ||
                                        plan.parameter == "phy.P_over_N0_db");
  if (n0_sweep) {
    // One world set serves every noise level.
    std::vector<double> n0s;
    for (double v : plan.values) {
      RunConfig rc = base;
      apply_parameter(rc, plan.parameter, v);
      n0s.push_back(rc.phy.N0);
    }
    const SimBatch batch = simulate_schemes(
        base.phy, base.content, {hybrid_plugin(base.content, design)}, cfg,
        n0s);
    warnings = batch.warnings;
    for (size_t i = 0; i < plan.values.size(); ++i)
      append(plan.values[i], batch.results[0][i]);
  } else {
    for (double v : plan.values) {
      RunConfig rc = base;
      if (plan.active) apply_parameter(rc, plan.parameter, v);
      cli_detail::require_valid(rc);
      const HybridDesign& d = cli_detail::require_design(rc, "simulate");
      const SimBatch batch = simulate_schemes(
          rc.phy, rc.content, {hybrid_plugin(rc.content, d)}, cfg);
      for (const std::string& w : batch.warnings) warnings.push_back(w);
      append(v, batch.results[0][0]);
    }
  }
  std::sort(warnings.begin(), warnings.end());
  warnings.erase(std::unique(warnings.begin(), warnings.end()),
                 warnings.end());
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  cli_detail::emit(csv.str(), opt, out, err);
  return 0;
}

inline int cmd_compare(const CliOptions& opt, std::ostream& out,
                       std::ostream& err) {
  const RunConfig base = load_config(opt.config_path);
  cli_detail::require_valid(base);
  const SimConfig cfg = cli_detail::sim_config(opt);
  const OptConfig oc = cli_detail::opt_config(opt);
  const cli_detail::SweepPlan plan = cli_detail::sweep_plan(opt);

  std::ostringstream csv;
  csv << "# hetcache compare csv v1\n";
  csv << "param,value,scheme,q,se,realizations\n";
  std::vector<std::string> warnings;
  for (double v : plan.values) {
    RunConfig rc = base;
    if (plan.active) apply_parameter(rc, plan.parameter, v);
    cli_detail::require_valid(rc);
    // A design block pins the proposed scheme; otherwise optimize per point.
    HybridDesign proposed;
    if (rc.design) {
      proposed = cli_detail::require_design(rc, "compare");
    } else {
      proposed = near_optimal(rc.phy, rc.content, oc).design;
    }
    const std::vector<SchemePlugin> schemes = {
        hybrid_plugin(rc.content, proposed),
        baseline_plugin(rc.phy, rc.content, BaselineKind::most_popular),
        baseline_plugin(rc.phy, rc.content, BaselineKind::iid_popularity),
        baseline_plugin(rc.phy, rc.content,
                        BaselineKind::uniform_combination)};
    const SimBatch batch =
        simulate_schemes(rc.phy, rc.content, schemes, cfg);
    for (const std::string& w : batch.warnings) warnings.push_back(w);
    for (size_t s = 0; s < schemes.size(); ++s) {
      const SimResult& res = batch.results[s][0];
      csv << (plan.active ? cli_detail::csv_escape(plan.parameter) : "-")
          << "," << (plan.active ? cli_detail::fmt(v) : "-") << ","
          << schemes[s].name << "," << cli_detail::fmt(res.q) << ","
          << cli_detail::fmt(res.se) << "," << res.realizations << "\n";
    }
  }
  std::sort(warnings.begin(), warnings.end());
  warnings.erase(std::unique(warnings.begin(), warnings.end()),
                 warnings.end());
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  cli_detail::emit(csv.str(), opt, out, err);
  return 0;
}

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"cache placement analysis, optimization and simulation",
               "hetcache"};
  app.require_subcommand(1);
  CliOptions opt;
  const auto wire = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON config file")
        ->required();
    sub->add_option("--sweep", opt.sweep_path, "JSON sweep spec");
    sub->add_option("--out", opt.out_path, "write output to this path");
    sub->add_option("--seed", opt.seed, "RNG seed");
    sub->add_option("--realizations", opt.realizations,
                    "Monte Carlo realization count");
    sub->add_option("--threads", opt.threads, "worker threads, 0 = hardware");
    sub->add_flag("--asymptotic-scoring", opt.asymptotic_scoring,
                  "rank optimizer candidates by the saturated objective");
    return sub;
  };
  CLI::App* analyze = wire(app.add_subcommand(
      "analyze", "evaluate success probabilities, optionally over a sweep"));
  CLI::App* optimize = wire(app.add_subcommand(
      "optimize", "run the two-step design search, emit the solution JSON"));
  CLI::App* simulate = wire(app.add_subcommand(
      "simulate", "Monte Carlo estimate for the configured design"));
  CLI::App* compare = wire(app.add_subcommand(
      "compare", "proposed design against the three baselines, shared worlds"));

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(opt, out, err);
    if (optimize->parsed()) return cmd_optimize(opt, out, err);
    if (simulate->parsed()) return cmd_simulate(opt, out, err);
    return cmd_compare(opt, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace hetcache
