#pragma once
// JSON config schema for the batch front-end. Top level:
//   {"phy": {...}, "content": {...}, "design": {"F1c": [...], "F2c": [...],
//    "p": [...]}}
// Field names track the struct members. phy accepts P_over_N0_db in place of
// N0 (noise referenced to the pico power P2) and beta_db in place of P1;
// content accepts a Zipf exponent gamma in place of the vector a. Values are
// stored in linear units immediately.

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hetcache/model.hpp"

namespace hetcache {

using Json = nlohmann::ordered_json;

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  PhyParams phy{};
  ContentParams content;
  std::optional<HybridDesign> design;
  std::optional<double> gamma;  // kept so gamma and N stay sweepable
};

namespace config_detail {

inline double number_at(const Json& obj, const std::string& where,
                        const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + "." + key + " is required");
  if (!it->is_number())
    throw ConfigError(where + "." + key + " must be a number");
  return it->get<double>();
}

inline int int_at(const Json& obj, const std::string& where, const char* key) {
  const double v = number_at(obj, where, key);
  if (v != std::nearbyint(v))
    throw ConfigError(where + "." + key + " must be an integer");
  return static_cast<int>(v);
}

inline void reject_unknown(const Json& obj, const std::string& where,
                           std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known) throw ConfigError("unknown field " + where + "." + it.key());
  }
}

inline std::vector<int> int_list(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + " must be an array");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer())
      throw ConfigError(where + " must hold integers");
    out.push_back(e.get<int>());
  }
  return out;
}

inline std::vector<double> double_list(const Json& v,
                                       const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + " must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(where + " must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

}  // namespace config_detail

inline PhyParams parse_phy(const Json& j) {
  using config_detail::number_at;
  if (!j.is_object()) throw ConfigError("phy must be an object");
  config_detail::reject_unknown(
      j, "phy",
      {"lambda1", "lambda2", "lambda_u", "P1", "P2", "N0", "alpha1", "alpha2",
       "W_hz", "tau", "P_over_N0_db", "beta_db"});
  PhyParams phy{};
  phy.lambda1 = number_at(j, "phy", "lambda1");
  phy.lambda2 = number_at(j, "phy", "lambda2");
  phy.lambda_u = number_at(j, "phy", "lambda_u");
  phy.P2 = number_at(j, "phy", "P2");
  phy.alpha1 = number_at(j, "phy", "alpha1");
  phy.alpha2 = number_at(j, "phy", "alpha2");
  phy.W_hz = number_at(j, "phy", "W_hz");
  phy.tau = number_at(j, "phy", "tau");
  if (j.contains("P1") == j.contains("beta_db"))
    throw ConfigError("phy needs exactly one of P1 and beta_db");
  phy.P1 = j.contains("P1")
               ? number_at(j, "phy", "P1")
               : phy.P2 * std::pow(10.0, number_at(j, "phy", "beta_db") / 10.0);
  if (j.contains("N0") == j.contains("P_over_N0_db"))
    throw ConfigError("phy needs exactly one of N0 and P_over_N0_db");
  phy.N0 = j.contains("N0")
               ? number_at(j, "phy", "N0")
               : phy.P2 * std::pow(
                     10.0, -number_at(j, "phy", "P_over_N0_db") / 10.0);
  return phy;
}

inline HybridDesign parse_design(const Json& j) {
  if (!j.is_object()) throw ConfigError("design must be an object");
  config_detail::reject_unknown(j, "design", {"F1c", "F2c", "p"});
  for (const char* key : {"F1c", "F2c", "p"})
    if (!j.contains(key))
      throw ConfigError(std::string("design.") + key + " is required");
  HybridDesign d;
  d.F1c = config_detail::int_list(j.at("F1c"), "design.F1c");
  d.F2c = config_detail::int_list(j.at("F2c"), "design.F2c");
  d.p = config_detail::double_list(j.at("p"), "design.p");
  return d;
}

inline RunConfig parse_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  config_detail::reject_unknown(j, "config", {"phy", "content", "design"});
  if (!j.contains("phy")) throw ConfigError("config.phy is required");
  if (!j.contains("content")) throw ConfigError("config.content is required");

  RunConfig rc;
  rc.phy = parse_phy(j.at("phy"));

  const Json& c = j.at("content");
  if (!c.is_object()) throw ConfigError("content must be an object");
  config_detail::reject_unknown(c, "content",
                                {"N", "a", "gamma", "K1c", "K2c", "K1b"});
  rc.content.N = config_detail::int_at(c, "content", "N");
  rc.content.K1c = config_detail::int_at(c, "content", "K1c");
  rc.content.K2c = config_detail::int_at(c, "content", "K2c");
  rc.content.K1b = config_detail::int_at(c, "content", "K1b");
  if (c.contains("a") == c.contains("gamma"))
    throw ConfigError("content needs exactly one of a and gamma");
  if (c.contains("gamma")) {
    rc.gamma = config_detail::number_at(c, "content", "gamma");
    rc.content.a = zipf_popularity(rc.content.N, *rc.gamma);
  } else {
    rc.content.a = config_detail::double_list(c.at("a"), "content.a");
  }

  if (j.contains("design")) rc.design = parse_design(j.at("design"));
  return rc;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read file: " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  return parse_config(load_json_file(path));
}

struct SweepSpec {
  std::string parameter;
  std::vector<double> values;
  std::vector<std::string> outputs;  // empty selects every column
};

inline SweepSpec parse_sweep(const Json& j) {
  if (!j.is_object()) throw ConfigError("sweep root must be an object");
  config_detail::reject_unknown(j, "sweep", {"parameter", "values", "outputs"});
  SweepSpec s;
  if (!j.contains("parameter") || !j.at("parameter").is_string())
    throw ConfigError("sweep.parameter must be a string");
  s.parameter = j.at("parameter").get<std::string>();
  if (s.parameter.empty()) throw ConfigError("sweep.parameter must be nonempty");
  if (!j.contains("values"))
    throw ConfigError("sweep.values is required");
  s.values = config_detail::double_list(j.at("values"), "sweep.values");
  if (s.values.empty()) throw ConfigError("sweep.values must be nonempty");
  if (j.contains("outputs")) {
    if (!j.at("outputs").is_array())
      throw ConfigError("sweep.outputs must be an array");
    for (const auto& e : j.at("outputs")) {
      if (!e.is_string()) throw ConfigError("sweep.outputs must hold strings");
      s.outputs.push_back(e.get<std::string>());
    }
  }
  return s;
}

inline SweepSpec load_sweep(const std::string& path) {
  return parse_sweep(load_json_file(path));
}

// Resolves a dotted sweep path against the config. The dB conveniences read
// the current P2, so value order matters if P2 itself is swept.
inline void apply_parameter(RunConfig& rc, const std::string& path,
                            double value) {
  const auto dot = path.find('.');
  const std::string section =
      dot == std::string::npos ? std::string() : path.substr(0, dot);
  const std::string field =
      dot == std::string::npos ? std::string() : path.substr(dot + 1);
  const auto integral = [&](const char* what) {
    if (value != std::nearbyint(value))
      throw ConfigError(std::string(what) + " must be an integer, got " +
                        std::to_string(value));
    return static_cast<int>(value);
  };
  if (section == "phy") {
    double PhyParams::* slots[] = {
        &PhyParams::lambda1, &PhyParams::lambda2, &PhyParams::lambda_u,
        &PhyParams::P1,      &PhyParams::P2,      &PhyParams::N0,
        &PhyParams::alpha1,  &PhyParams::alpha2,  &PhyParams::W_hz,
        &PhyParams::tau};
    const char* names[] = {"lambda1", "lambda2", "lambda_u", "P1", "P2",
                           "N0",      "alpha1",  "alpha2",   "W_hz", "tau"};
    for (size_t i = 0; i < std::size(names); ++i)
      if (field == names[i]) {
        rc.phy.*slots[i] = value;
        return;
      }
    if (field == "P_over_N0_db") {
      rc.phy.N0 = rc.phy.P2 * std::pow(10.0, -value / 10.0);
      return;
    }
    if (field == "beta_db") {
      rc.phy.P1 = rc.phy.P2 * std::pow(10.0, value / 10.0);
      return;
    }
  } else if (section == "content") {
    if (field == "gamma") {
      rc.gamma = value;
      rc.content.a = zipf_popularity(rc.content.N, value);
      return;
    }
    if (field == "N") {
      if (!rc.gamma)
        throw ConfigError("sweeping content.N requires gamma-based popularity");
      rc.content.N = integral("content.N");
      rc.content.a = zipf_popularity(rc.content.N, *rc.gamma);
      return;
    }
    if (field == "K1c") { rc.content.K1c = integral("content.K1c"); return; }
    if (field == "K2c") { rc.content.K2c = integral("content.K2c"); return; }
    if (field == "K1b") { rc.content.K1b = integral("content.K1b"); return; }
  }
  throw ConfigError("unknown sweep parameter path: " + path);
}

}  // namespace hetcache
