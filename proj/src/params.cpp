#include "cbi/params.hpp"

#include <cmath>

#include <json.hpp>

#include "cbi/errors.hpp"
#include "cbi/io.hpp"

namespace cbi {

void CbiParams::validate() const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw ConfigError("c must be a nonnegative finite real");
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ConfigError("beta must be a nonnegative finite real");
  }
  if (!std::isfinite(b)) throw ConfigError("b must be finite");
  // JumpMeasure enforces its own atom invariants on construction.
}

double unit_exp_integral(double a) {
  if (a == 0.0) return 1.0;
  return std::expm1(a) / a;
}

DerivedParams derive(const CbiParams& params) {
  params.validate();
  DerivedParams d;
  d.b_tilde = params.b + params.mu.excess_above_one();
  d.beta_tilde = params.beta + params.nu.moment(1.0);
  d.rho = std::exp(d.b_tilde);
  d.beta_bar = d.beta_tilde * unit_exp_integral(d.b_tilde);
  d.C = 2.0 * params.c + params.mu.moment(2.0);

  const double nu2 = params.nu.moment(2.0);
  if (d.b_tilde == 0.0) {
    d.V = d.C;
    d.V0 = nu2 + 0.5 * d.beta_tilde * d.C;
  } else {
    const double e1 = unit_exp_integral(d.b_tilde);        // int_0^1 e^{bt u} du
    const double e2 = unit_exp_integral(2.0 * d.b_tilde);  // int_0^1 e^{2 bt u} du
    d.V = d.C * d.rho * e1;
    // int_0^1 (int_0^{1-u} e^{bt v} dv) e^{2 bt u} du = (rho*e1 - e2)/bt
    d.V0 = nu2 * e2 + d.beta_tilde * d.C * (d.rho * e1 - e2) / d.b_tilde;
  }
  return d;
}

namespace {

nlohmann::json measure_to_json(const JumpMeasure& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : m.atoms()) arr.push_back({{"z", a.size}, {"rate", a.rate}});
  return arr;
}

JumpMeasure measure_from_json(const nlohmann::json& j, const char* name) {
  if (!j.is_array()) throw ConfigError(std::string(name) + " must be an array of {z, rate}");
  std::vector<JumpMeasure::Atom> atoms;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("z") || !e.contains("rate")) {
      throw ConfigError(std::string(name) + " entries must be objects with z and rate");
    }
    const double z = e.at("z").get<double>();
    const double rate = e.at("rate").get<double>();
    if (!(z > 0.0)) throw ConfigError(std::string(name) + ": z must be positive");
    if (!(rate > 0.0)) throw ConfigError(std::string(name) + ": rate must be positive");
    atoms.push_back({z, rate});
  }
  return JumpMeasure(std::move(atoms));
}

}  // namespace

std::string params_to_json(const CbiParams& params, int indent) {
  nlohmann::json j{{"c", params.c},
                   {"beta", params.beta},
                   {"b", params.b},
                   {"nu", measure_to_json(params.nu)},
                   {"mu", measure_to_json(params.mu)}};
  return j.dump(indent);
}

CbiParams params_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid params JSON: ") + e.what());
  }
  CbiParams p;
  try {
    p.c = j.at("c").get<double>();
    p.beta = j.at("beta").get<double>();
    p.b = j.at("b").get<double>();
    p.nu = measure_from_json(j.value("nu", nlohmann::json::array()), "nu");
    p.mu = measure_from_json(j.value("mu", nlohmann::json::array()), "mu");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid params JSON: ") + e.what());
  }
  p.validate();
  return p;
}

CbiParams load_params_file(const std::string& path) {
  return params_from_json(read_text_file(path));
}

}  // namespace cbi
