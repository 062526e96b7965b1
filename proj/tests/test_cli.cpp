#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hetcache/cli.hpp"

namespace {

struct CliRun {
  int code = -1;
  std::string out, err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliRun r;
  r.code = hetcache::run_cli(std::move(args), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string write_file(const std::string& name, const std::string& text) {
  std::ofstream f(name, std::ios::binary);
  f << text;
  return name;
}

std::string read_file(const std::string& name) {
  std::ifstream f(name, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kReferenceConfig = R"({
  "phy": {
    "lambda1": 5e-7, "lambda2": 3e-6, "lambda_u": 5e-5,
    "beta_db": 15, "P2": 1.0, "P_over_N0_db": 80,
    "alpha1": 4.0, "alpha2": 4.0, "W_hz": 2e7, "tau": 2e4
  },
  "content": { "N": 10, "gamma": 1.0, "K1c": 3, "K2c": 2, "K1b": 1 },
  "design": { "F1c": [1, 2, 3], "F2c": [4, 5, 6], "p": [0.7, 0.2, 0.1] }
})";

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace

TEST_CASE("analyze emits versioned rows matching the closed evaluation",
          "[cli]") {
  const auto cfg = write_file("cli_ref_config.json", kReferenceConfig);

  const CliRun single = run({"analyze", "--config", cfg});
  REQUIRE(single.code == 0);
  auto lines = csv_lines(single.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "# hetcache analyze csv v1");
  CHECK(lines[1].rfind("param,value,q,q1,q2,q_inf,q1_inf,q2_inf,file_1", 0) ==
        0);
  auto cells = split_csv(lines[2]);
  REQUIRE(cells.size() == 2 + 6 + 10);
  CHECK(cells[0] == "-");
  CHECK(std::stod(cells[2]) == Catch::Approx(0.589668027324).margin(1e-9));
  CHECK(std::stod(cells[5]) == Catch::Approx(0.797052010023).margin(1e-6));

  write_file("cli_snr_sweep.json",
             R"({"parameter": "phy.P_over_N0_db",
                 "values": [60, 80, 100, 120]})");
  const CliRun sweep =
      run({"analyze", "--config", cfg, "--sweep", "cli_snr_sweep.json",
           "--threads", "4"});
  REQUIRE(sweep.code == 0);
  lines = csv_lines(sweep.out);
  REQUIRE(lines.size() == 6);
  const double expected[] = {0.121286978637, 0.589668027324, 0.794699007789,
                             0.799481057907};
  double prev = -1.0;
  for (int i = 0; i < 4; ++i) {
    cells = split_csv(lines[static_cast<size_t>(2 + i)]);
    CHECK(cells[0] == "phy.P_over_N0_db");
    const double q = std::stod(cells[2]);
    CHECK(q == Catch::Approx(expected[i]).margin(1e-9));
    CHECK(q >= prev);
    prev = q;
  }

  // Output selection trims the columns.
  write_file("cli_sel_sweep.json",
             R"({"parameter": "phy.P_over_N0_db", "values": [80],
                 "outputs": ["q", "q_inf"]})");
  const CliRun sel =
      run({"analyze", "--config", cfg, "--sweep", "cli_sel_sweep.json"});
  REQUIRE(sel.code == 0);
  lines = csv_lines(sel.out);
  CHECK(lines[1] == "param,value,q,q_inf");
  CHECK(split_csv(lines[2]).size() == 4);
}

TEST_CASE("analyze output files are byte-stable", "[cli]") {
  const auto cfg = write_file("cli_ref_config.json", kReferenceConfig);
  const CliRun a =
      run({"analyze", "--config", cfg, "--out", "cli_out_a.csv"});
  const CliRun b =
      run({"analyze", "--config", cfg, "--out", "cli_out_b.csv"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out.empty());  // file mode keeps stdout quiet
  const std::string fa = read_file("cli_out_a.csv");
  CHECK(fa == read_file("cli_out_b.csv"));
  CHECK(fa == run({"analyze", "--config", cfg}).out);
  std::remove("cli_out_a.csv");
  std::remove("cli_out_b.csv");
}

TEST_CASE("cli exit codes separate config from numerical failures", "[cli]") {
  CHECK(run({"analyze", "--config", "cli_missing_file.json"}).code == 2);

  write_file("cli_not_json.json", "not json at all");
  CHECK(run({"analyze", "--config", "cli_not_json.json"}).code == 2);

  write_file("cli_no_design.json", R"({
    "phy": {"lambda1": 5e-7, "lambda2": 3e-6, "lambda_u": 5e-5,
            "P1": 31.0, "P2": 1.0, "N0": 1e-8,
            "alpha1": 4.0, "alpha2": 4.0, "W_hz": 2e7, "tau": 2e4},
    "content": {"N": 10, "gamma": 1.0, "K1c": 3, "K2c": 2, "K1b": 1}
  })");
  const CliRun no_design = run({"analyze", "--config", "cli_no_design.json"});
  CHECK(no_design.code == 2);
  CHECK(no_design.err.find("design") != std::string::npos);

  // Caches exceeding the library: a config validation problem.
  write_file("cli_overfull.json", R"({
    "phy": {"lambda1": 5e-7, "lambda2": 3e-6, "lambda_u": 5e-5,
            "P1": 31.0, "P2": 1.0, "N0": 1e-8,
            "alpha1": 4.0, "alpha2": 4.0, "W_hz": 2e7, "tau": 2e4},
    "content": {"N": 4, "gamma": 1.0, "K1c": 3, "K2c": 2, "K1b": 2}
  })");
  CHECK(run({"optimize", "--config", "cli_overfull.json"}).code == 2);

  const auto cfg = write_file("cli_ref_config.json", kReferenceConfig);
  write_file("cli_bad_path.json",
             R"({"parameter": "phy.nope", "values": [1]})");
  const CliRun bad =
      run({"analyze", "--config", cfg, "--sweep", "cli_bad_path.json"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("phy.nope") != std::string::npos);

  CHECK(run({"simulate", "--config", cfg, "--realizations", "0"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);

  const CliRun help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("analyze") != std::string::npos);
  CHECK(help.out.find("compare") != std::string::npos);
}

TEST_CASE("optimize prints the solution as json", "[cli]") {
  const auto cfg = write_file("cli_ref_config.json", kReferenceConfig);
  const CliRun r = run({"optimize", "--config", cfg});
  REQUIRE(r.code == 0);
  const hetcache::Json j = hetcache::Json::parse(r.out);
  CHECK(j.at("F1c").is_array());
  CHECK(j.at("q_general").get<double>() > 0.5);
  double mass = 0.0;
  for (const auto& e : j.at("p")) mass += e.at("probability").get<double>();
  CHECK(mass == Catch::Approx(1.0).margin(1e-9));

  // The emitted design matches a direct library call bit for bit.
  hetcache::RunConfig rc = hetcache::load_config(cfg);
  const hetcache::Solution sol =
      hetcache::near_optimal(rc.phy, rc.content, hetcache::OptConfig{});
  CHECK(j.at("q_general").get<double>() == sol.q_general);
  CHECK(j.at("F2c").get<std::vector<int>>() == sol.design.F2c);
  CHECK(r.err.find("candidates:") != std::string::npos);

  const CliRun asym =
      run({"optimize", "--config", cfg, "--asymptotic-scoring"});
  REQUIRE(asym.code == 0);
  CHECK(hetcache::Json::parse(asym.out).at("asymptotic_scored").get<bool>());
}

TEST_CASE("simulate and compare share worlds and stay deterministic",
          "[cli]") {
  const auto cfg = write_file("cli_ref_config.json", kReferenceConfig);
  const std::vector<std::string> sim_args = {
      "simulate", "--config", cfg,   "--realizations", "150",
      "--seed",   "9",        "--threads", "0"};
  const CliRun s1 = run(sim_args);
  const CliRun s2 = run(sim_args);
  REQUIRE(s1.code == 0);
  CHECK(s1.out == s2.out);
  auto lines = csv_lines(s1.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "# hetcache simulate csv v1");
  auto cells = split_csv(lines[2]);
  CHECK(cells[2] == "hybrid");
  const double q = std::stod(cells[3]);
  CHECK(q > 0.0);
  CHECK(q < 1.0);
  CHECK(std::stod(cells[4]) > 0.0);
  CHECK(cells[5] == "150");

  // Noise sweep reuses one world set; success rates ride the SNR upward.
  write_file("cli_sim_sweep.json",
             R"({"parameter": "phy.P_over_N0_db", "values": [60, 100]})");
  const CliRun sw =
      run({"simulate", "--config", cfg, "--sweep", "cli_sim_sweep.json",
           "--realizations", "150", "--seed", "9", "--threads", "0"});
  REQUIRE(sw.code == 0);
  lines = csv_lines(sw.out);
  REQUIRE(lines.size() == 4);
  CHECK(std::stod(split_csv(lines[2])[3]) < std::stod(split_csv(lines[3])[3]));

  const CliRun cmp = run({"compare", "--config", cfg, "--realizations", "60",
                          "--seed", "9", "--threads", "0"});
  REQUIRE(cmp.code == 0);
  lines = csv_lines(cmp.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "# hetcache compare csv v1");
  const char* names[] = {"hybrid", "most_popular", "iid_popularity",
                         "uniform_combination"};
  for (int i = 0; i < 4; ++i) {
    cells = split_csv(lines[static_cast<size_t>(2 + i)]);
    CHECK(cells[2] == names[i]);
    const double qq = std::stod(cells[3]);
    CHECK(qq > 0.0);
    CHECK(qq < 1.0);
  }
}
