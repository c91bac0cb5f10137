// JSON run configuration for simulation commands: sizes, activation, entry
// laws, trial count, seed.  Parsing is strict -- unknown fields are errors,
// so a typo cannot silently fall back to a default.
#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlspec/activation.hpp"
#include "nlspec/montecarlo.hpp"
#include "nlspec/rng.hpp"
#include "nlspec/version.hpp"

namespace nlspec {

inline DistributionSpec parse_distribution(const nlohmann::json& j) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "kind" && k != "variance" && k != "p")
      throw ValidationError("distribution config: unknown field '" + k + "'");
  }
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ValidationError("distribution config: missing string field 'kind'");
  const double variance =
      j.contains("variance") ? j.at("variance").get<double>() : 1.0;
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw ValidationError("distribution config: variance must be positive");
  DistributionSpec d;
  try {
    d = DistributionSpec::parse(j.at("kind").get<std::string>(), variance);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  if (j.contains("p")) {
    if (d.kind != DistributionSpec::Kind::centered_bernoulli)
      throw ValidationError("distribution config: 'p' only applies to "
                            "centered-bernoulli");
    d.p = j.at("p").get<double>();
    if (!(d.p > 0.0) || !(d.p < 1.0))
      throw ValidationError("distribution config: p must be in (0,1)");
  }
  return d;
}

inline nlohmann::json distribution_to_json(const DistributionSpec& d) {
  nlohmann::json j{{"kind", d.name()}, {"variance", d.variance}};
  if (d.kind == DistributionSpec::Kind::centered_bernoulli) j["p"] = d.p;
  return j;
}

// Sizes come either as explicit {n0, n1, m} for a single layer or as
// {n0, m, psi_list} for a deep run, where psi_list holds the successive
// width ratios n_{p-1}/n_p and the layer widths are rounded from them.
inline ModelShape parse_shape(const nlohmann::json& j) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "n0" && k != "n1" && k != "m" && k != "psi_list" &&
        k != "sigma_w" && k != "sigma_x")
      throw ValidationError("shape config: unknown field '" + k + "'");
  }
  if (!j.contains("n0") || !j.contains("m"))
    throw ValidationError("shape config: n0 and m are required");
  ModelShape s;
  s.n0 = j.at("n0").get<int>();
  s.m = j.at("m").get<int>();
  if (s.n0 <= 0 || s.m <= 0)
    throw ValidationError("shape config: sizes must be positive");
  s.phi = double(s.n0) / double(s.m);

  const bool has_list = j.contains("psi_list");
  if (has_list == j.contains("n1"))
    throw ValidationError("shape config: give exactly one of n1 or psi_list");
  if (has_list) {
    s.psi_list = j.at("psi_list").get<std::vector<double>>();
    if (s.psi_list.empty())
      throw ValidationError("shape config: psi_list must be nonempty");
    int prev = s.n0;
    for (double r : s.psi_list) {
      if (!(r > 0.0))
        throw ValidationError("shape config: psi_list entries must be > 0");
      const int w = int(std::lround(prev / r));
      if (w <= 0) throw ValidationError("shape config: layer width underflow");
      s.layer_widths.push_back(w);
      prev = w;
    }
    s.n1 = s.layer_widths.front();
    s.psi = s.psi_list.front();
  } else {
    s.n1 = j.at("n1").get<int>();
    if (s.n1 <= 0) throw ValidationError("shape config: n1 must be positive");
    s.psi = double(s.n0) / double(s.n1);
  }
  if (j.contains("sigma_w")) s.sigma_w = j.at("sigma_w").get<double>();
  if (j.contains("sigma_x")) s.sigma_x = j.at("sigma_x").get<double>();
  s.validate();
  return s;
}

inline nlohmann::json shape_to_json(const ModelShape& s) {
  nlohmann::json j{{"n0", s.n0}, {"m", s.m},
                   {"sigma_w", s.sigma_w}, {"sigma_x", s.sigma_x}};
  if (!s.psi_list.empty())
    j["psi_list"] = s.psi_list;
  else
    j["n1"] = s.n1;
  return j;
}

struct RunConfig {
  SimulationPlan plan;
  std::vector<double> gamma_list = {0.1, 1.0, 10.0};
  nlohmann::json echo;  // the accepted document, embedded in outputs
};

inline RunConfig parse_run_config(const nlohmann::json& j) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "schema_version" && k != "shape" && k != "activation" &&
        k != "dist_w" && k != "dist_x" && k != "layers" && k != "trials" &&
        k != "seed" && k != "gamma_list")
      throw ValidationError("run config: unknown field '" + k + "'");
  }
  if (j.contains("schema_version") &&
      j.at("schema_version").get<std::string>() != schema_version)
    throw ValidationError("run config: unsupported schema_version");
  for (const char* req : {"shape", "activation", "dist_w", "dist_x"})
    if (!j.contains(req))
      throw ValidationError(std::string("run config: missing field '") + req +
                            "'");

  RunConfig cfg;
  cfg.plan.shape = parse_shape(j.at("shape"));
  const ActivationConfig ac = parse_activation(j.at("activation"));
  cfg.plan.activation =
      ac.auto_center ? center_gaussian(ac.spec, cfg.plan.shape.sigma_w *
                                                    cfg.plan.shape.sigma_x)
                     : ac.spec;
  cfg.plan.dist_w = parse_distribution(j.at("dist_w"));
  cfg.plan.dist_x = parse_distribution(j.at("dist_x"));

  const int derived_layers = int(cfg.plan.shape.layer_widths.size());
  cfg.plan.layers = derived_layers > 0 ? derived_layers : 1;
  if (j.contains("layers")) {
    const int given = j.at("layers").get<int>();
    if (derived_layers > 0 && given != derived_layers)
      throw ValidationError("run config: layers disagrees with psi_list");
    if (derived_layers == 0 && given != 1)
      throw ValidationError("run config: layers > 1 needs shape.psi_list");
    cfg.plan.layers = given;
  }
  if (j.contains("trials")) cfg.plan.trials = j.at("trials").get<int>();
  if (j.contains("seed")) cfg.plan.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("gamma_list")) {
    cfg.gamma_list = j.at("gamma_list").get<std::vector<double>>();
    if (cfg.gamma_list.empty())
      throw ValidationError("run config: gamma_list must be nonempty");
    for (double g : cfg.gamma_list)
      if (!(g > 0.0))
        throw ValidationError("run config: gamma_list entries must be > 0");
  }
  cfg.plan.validate();

  cfg.echo = j;
  cfg.echo["schema_version"] = schema_version;
  return cfg;
}

}  // namespace nlspec
