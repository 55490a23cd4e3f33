#pragma once

// Scenario files: a model, a list of transform queries, the operations to
// evaluate, optional Monte Carlo settings and an optional parameter sweep.
//
//   {
//     "model":   {"family": "CramerLundberg", "drift": 1, "jump_rate": 2, "jump_mean_inv": 1},
//     "queries": [{"p": 0.5, "q": 0.5, "r": 0.5, "theta": 0.5, "x": 0}],
//     "outputs": ["omega_minus_1", "omega_minus_2"],
//     "mc":      {"n": 1000000, "master_seed": 1, "step": 1e-4},
//     "sweep":   {"parameter": "x", "start": -2, "stop": 0, "points": 21}
//   }
//
// Unknown keys anywhere are an error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lastexit/last_exit.hpp"
#include "lastexit/levy_model.hpp"

namespace lastexit {

/// Malformed scenario file (syntax, types, unknown keys or names).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MonteCarloSettings {
  std::size_t n = 100000;
  std::uint64_t master_seed = 1;
  double step = 1e-4;
  double allowance = 0.0;  ///< added to 3 standard errors when comparing
};

struct SweepSettings {
  std::string parameter;
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
};

struct Scenario {
  LevyModel model;
  std::vector<TransformQuery> queries;
  std::vector<std::string> outputs;
  std::optional<MonteCarloSettings> mc;
  std::optional<SweepSettings> sweep;
};

namespace detail {

using json = nlohmann::json;

inline void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ParseError("unknown key '" + key + "' in " + where);
}

inline double number(const json& obj, const std::string& key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ParseError(where + "." + key + " must be a number");
  return v.get<double>();
}

}  // namespace detail

/// Names accepted in "outputs".
inline const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> names{
      "psi", "psi_prime", "phi", "phi_prime", "big_w", "big_z", "big_z2",
      "omega_plus_1", "omega_plus_2", "omega_minus_1", "omega_minus_2", "creeping_transform",
      "laplace_T_plus", "laplace_T_plus_infinite_horizon", "occupation_transform_negative",
      "joint_T_minus_infinite_horizon", "value_at_last_exit_transform",
      "occupation_transform_positive", "last_exit_density_compound_poisson"};
  return names;
}

inline Scenario parse_scenario(const std::string& text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  detail::only_keys(doc, {"model", "queries", "outputs", "mc", "sweep"}, "scenario");
  Scenario sc;
  if (!doc.contains("model")) throw ParseError("scenario needs a model");
  const json& jm = doc.at("model");
  detail::only_keys(jm, {"family", "drift", "sigma", "jump_rate", "jump_mean_inv", "alpha"}, "model");
  if (!jm.contains("family") || !jm.at("family").is_string())
    throw ParseError("model.family must be a string");
  try {
    sc.model.family = family_from_string(jm.at("family").get<std::string>());
  } catch (const ModelError& e) {
    throw ParseError(e.what());
  }
  sc.model.drift = detail::number(jm, "drift", 0.0, "model");
  sc.model.sigma = detail::number(jm, "sigma", sc.model.family == Family::BrownianDrift ? 1.0 : 0.0, "model");
  sc.model.jump_rate = detail::number(jm, "jump_rate", 0.0, "model");
  sc.model.jump_mean_inv = detail::number(jm, "jump_mean_inv", 0.0, "model");
  sc.model.alpha = detail::number(jm, "alpha", 0.0, "model");

  if (!doc.contains("queries") || !doc.at("queries").is_array())
    throw ParseError("scenario needs a queries array");
  for (const auto& jq : doc.at("queries")) {
    detail::only_keys(jq, {"p", "q", "r", "theta", "x"}, "query");
    sc.queries.push_back({detail::number(jq, "p", 0.0, "query"), detail::number(jq, "q", 0.0, "query"),
                          detail::number(jq, "r", 0.0, "query"), detail::number(jq, "theta", 0.0, "query"),
                          detail::number(jq, "x", 0.0, "query")});
  }

  if (!doc.contains("outputs") || !doc.at("outputs").is_array())
    throw ParseError("scenario needs an outputs array");
  const auto& known = operation_names();
  for (const auto& jo : doc.at("outputs")) {
    if (!jo.is_string()) throw ParseError("outputs must be strings");
    const auto name = jo.get<std::string>();
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw ParseError("unknown operation '" + name + "'");
    sc.outputs.push_back(name);
  }

  if (doc.contains("mc")) {
    const json& jc = doc.at("mc");
    detail::only_keys(jc, {"n", "master_seed", "step", "allowance"}, "mc");
    MonteCarloSettings mc;
    if (jc.contains("n")) {
      if (!jc.at("n").is_number_integer() || jc.at("n").get<long long>() <= 0)
        throw ParseError("mc.n must be a positive integer");
      mc.n = jc.at("n").get<std::size_t>();
    }
    if (jc.contains("master_seed")) {
      if (!jc.at("master_seed").is_number_integer()) throw ParseError("mc.master_seed must be an integer");
      mc.master_seed = jc.at("master_seed").get<std::uint64_t>();
    }
    mc.step = detail::number(jc, "step", mc.step, "mc");
    mc.allowance = detail::number(jc, "allowance", 0.0, "mc");
    if (!(mc.step > 0.0)) throw ParseError("mc.step must be positive");
    if (!(mc.allowance >= 0.0)) throw ParseError("mc.allowance must be >= 0");
    sc.mc = mc;
  }

  if (doc.contains("sweep")) {
    const json& js = doc.at("sweep");
    detail::only_keys(js, {"parameter", "start", "stop", "points"}, "sweep");
    SweepSettings sw;
    if (!js.contains("parameter") || !js.at("parameter").is_string())
      throw ParseError("sweep.parameter must be a string");
    sw.parameter = js.at("parameter").get<std::string>();
    if (sw.parameter != "p" && sw.parameter != "q" && sw.parameter != "r" && sw.parameter != "theta" &&
        sw.parameter != "x")
      throw ParseError("sweep.parameter must be one of p, q, r, theta, x");
    sw.start = detail::number(js, "start", 0.0, "sweep");
    sw.stop = detail::number(js, "stop", 0.0, "sweep");
    if (!js.contains("points") || !js.at("points").is_number_integer() || js.at("points").get<int>() < 1)
      throw ParseError("sweep.points must be a positive integer");
    sw.points = js.at("points").get<int>();
    sc.sweep = sw;
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace lastexit
