#include "starflow/config.hpp"

#include <cmath>
#include <fstream>

namespace starflow {

namespace {

void reject_unknown(const nlohmann::json& j, const char* path,
                    std::initializer_list<const char*> known) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok)
      throw ConfigError(std::string(path) + key, "unknown field");
  }
}

double number_at(const nlohmann::json& j, const char* path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

}  // namespace

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  if (!j.is_object()) throw ConfigError("$", "expected a JSON object");
  reject_unknown(j, "",
                 {"params", "truncation_order", "scalar_backend", "state",
                  "observable", "times", "seed", "format"});

  if (j.contains("params")) {
    const auto& p = j.at("params");
    if (!p.is_object()) throw ConfigError("params", "expected an object");
    reject_unknown(p, "params.", {"m", "nu", "kappa", "beta"});
    if (p.contains("m")) c.m = number_at(p.at("m"), "params.m");
    if (p.contains("nu")) c.nu = number_at(p.at("nu"), "params.nu");
    if (p.contains("kappa")) c.kappa = number_at(p.at("kappa"), "params.kappa");
    if (p.contains("beta")) c.beta = number_at(p.at("beta"), "params.beta");
  }
  if (j.contains("truncation_order")) {
    if (!j.at("truncation_order").is_number_integer())
      throw ConfigError("truncation_order", "expected an integer");
    c.truncation_order = j.at("truncation_order").get<int>();
  }
  if (j.contains("scalar_backend")) {
    if (!j.at("scalar_backend").is_string())
      throw ConfigError("scalar_backend", "expected a string");
    c.scalar_backend = j.at("scalar_backend").get<std::string>();
  }
  if (j.contains("state")) {
    const auto& s = j.at("state");
    if (!s.is_object()) throw ConfigError("state", "expected an object");
    reject_unknown(s, "state.", {"variant", "q0", "p0"});
    if (s.contains("variant")) {
      if (!s.at("variant").is_string())
        throw ConfigError("state.variant", "expected a string");
      c.state.variant = s.at("variant").get<std::string>();
    }
    if (s.contains("q0")) c.state.q0 = number_at(s.at("q0"), "state.q0");
    if (s.contains("p0")) c.state.p0 = number_at(s.at("p0"), "state.p0");
  }
  if (j.contains("observable")) {
    if (!j.at("observable").is_string())
      throw ConfigError("observable", "expected a string");
    c.observable = j.at("observable").get<std::string>();
  }
  if (j.contains("times")) {
    if (!j.at("times").is_array()) throw ConfigError("times", "expected an array");
    c.times.clear();
    for (const auto& t : j.at("times"))
      c.times.push_back(number_at(t, "times"));
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer())
      throw ConfigError("seed", "expected an integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("format")) {
    if (!j.at("format").is_string()) throw ConfigError("format", "expected a string");
    c.format = j.at("format").get<std::string>();
  }
  return c;
}

nlohmann::json ScenarioConfig::to_json() const {
  return {
      {"params", {{"m", m}, {"nu", nu}, {"kappa", kappa}, {"beta", beta}}},
      {"truncation_order", truncation_order},
      {"scalar_backend", scalar_backend},
      {"state", {{"variant", state.variant}, {"q0", state.q0}, {"p0", state.p0}}},
      {"observable", observable},
      {"times", times},
      {"seed", seed},
      {"format", format},
  };
}

void ScenarioConfig::validate() const {
  if (!(m > 0.0) || !std::isfinite(m))
    throw ConfigError("params.m", "must be a positive real");
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw ConfigError("params.nu", "must be a positive real");
  if (kappa < 0.0 || !std::isfinite(kappa))
    throw ConfigError("params.kappa", "must be nonnegative");
  if (state.variant == "kms" && !(beta > 0.0))
    throw ConfigError("params.beta", "must be positive with the kms state");
  if (!std::isfinite(beta)) throw ConfigError("params.beta", "must be finite");
  if (truncation_order < 0 || truncation_order > 32)
    throw ConfigError("truncation_order", "must lie in [0, 32]");
  if (scalar_backend != "float64" && scalar_backend != "exact-rational")
    throw ConfigError("scalar_backend", "must be float64 or exact-rational");
  if (state.variant != "delta" && state.variant != "deformed-delta" &&
      state.variant != "kms")
    throw ConfigError("state.variant", "must be delta, deformed-delta, or kms");
  if (!std::isfinite(state.q0)) throw ConfigError("state.q0", "must be finite");
  if (!std::isfinite(state.p0)) throw ConfigError("state.p0", "must be finite");
  if (observable.empty()) throw ConfigError("observable", "must be nonempty");
  if (times.empty()) throw ConfigError("times", "must be nonempty");
  for (double t : times)
    if (!std::isfinite(t)) throw ConfigError("times", "entries must be finite");
  if (format != "csv" && format != "json")
    throw ConfigError("format", "must be csv or json");
}

Backend ScenarioConfig::backend() const {
  return scalar_backend == "exact-rational" ? Backend::exact_rational
                                            : Backend::float64;
}

Parameters ScenarioConfig::parameters() const {
  return Parameters::from_float(m, nu, kappa);
}

BathState ScenarioConfig::make_state() const {
  Parameters p = parameters();
  if (state.variant == "delta")
    return BathState::delta(Scalar::real_double(state.q0),
                            Scalar::real_double(state.p0), p);
  if (state.variant == "deformed-delta")
    return BathState::deformed_delta(Scalar::real_double(state.q0),
                                     Scalar::real_double(state.p0), p);
  return BathState::kms(Scalar::real_double(beta), p);
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  ScenarioConfig c = ScenarioConfig::from_json(j);
  c.validate();
  return c;
}

void apply_state_spec(const std::string& spec, ScenarioConfig& cfg) {
  std::string variant = spec;
  std::string args;
  if (auto colon = spec.find(':'); colon != std::string::npos) {
    variant = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  }
  cfg.state.variant = variant;

  std::size_t pos = 0;
  while (pos < args.size()) {
    std::size_t comma = args.find(',', pos);
    std::string item = args.substr(pos, comma == std::string::npos
                                            ? std::string::npos
                                            : comma - pos);
    pos = comma == std::string::npos ? args.size() : comma + 1;
    std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw ConfigError("state", "expected key=value, got '" + item + "'");
    std::string key = item.substr(0, eq);
    double value;
    try {
      value = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw ConfigError("state." + key, "not a number: '" + item.substr(eq + 1) + "'");
    }
    if (key == "q0")
      cfg.state.q0 = value;
    else if (key == "p0")
      cfg.state.p0 = value;
    else if (key == "beta")
      cfg.beta = value;
    else
      throw ConfigError("state." + key, "unknown state key");
  }
}

}  // namespace starflow
