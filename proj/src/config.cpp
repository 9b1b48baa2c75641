#include "kslab/config.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>

#include "kslab/errors.hpp"

namespace kslab {

namespace {

using nlohmann::json;

const std::set<std::string> kKeys{"dimension", "lambda",     "radius", "index",     "gamma",     "gamma_min",
                                  "gamma_max", "gamma_step", "r_max",  "epsilons", "tolerances", "output_dir"};
const std::set<std::string> kTolerances{"residual", "ode_rtol"};

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

double number(const json& doc, const std::string& key) {
  const auto& v = doc.at(key);
  if (!v.is_number()) throw Error(ErrorKind::ParseError, "field '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

double RunConfig::tolerance(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it == tolerances.end()) throw Error(ErrorKind::ValidationError, "unknown tolerance '" + name + "'");
  return it->second;
}

std::vector<double> RunConfig::gamma_grid() const {
  std::vector<double> out;
  if (!(gamma_step > 0.0) || gamma_max < gamma_min) return out;
  const auto n = static_cast<std::size_t>(std::floor((gamma_max - gamma_min) / gamma_step + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) out.push_back(gamma_min + static_cast<double>(k) * gamma_step);
  return out;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::ParseError, "line 1: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    if (!kKeys.contains(key)) throw Error(ErrorKind::ParseError, "unknown field '" + key + "'");
  }

  RunConfig c;
  if (doc.contains("dimension")) {
    const auto& v = doc.at("dimension");
    if (!v.is_number_integer()) throw Error(ErrorKind::ParseError, "field 'dimension' must be an integer");
    c.dimension = v.get<int>();
  }
  if (doc.contains("lambda")) c.lambda = number(doc, "lambda");
  if (doc.contains("radius")) c.radius = number(doc, "radius");
  if (doc.contains("index")) {
    const auto& v = doc.at("index");
    if (!v.is_number_unsigned()) throw Error(ErrorKind::ParseError, "field 'index' must be a non-negative integer");
    c.index = v.get<std::size_t>();
  }
  if (doc.contains("gamma")) c.gamma = number(doc, "gamma");
  if (doc.contains("gamma_min")) c.gamma_min = number(doc, "gamma_min");
  if (doc.contains("gamma_max")) c.gamma_max = number(doc, "gamma_max");
  if (doc.contains("gamma_step")) c.gamma_step = number(doc, "gamma_step");
  if (doc.contains("r_max")) c.r_max = number(doc, "r_max");
  if (doc.contains("epsilons")) {
    const auto& v = doc.at("epsilons");
    if (!v.is_array()) throw Error(ErrorKind::ParseError, "field 'epsilons' must be an array");
    c.epsilons.clear();
    for (const auto& e : v) {
      if (!e.is_number()) throw Error(ErrorKind::ParseError, "field 'epsilons' must hold numbers");
      c.epsilons.push_back(e.get<double>());
    }
  }
  if (doc.contains("tolerances")) {
    const auto& v = doc.at("tolerances");
    if (!v.is_object()) throw Error(ErrorKind::ParseError, "field 'tolerances' must be an object");
    for (const auto& [name, value] : v.items()) {
      if (!kTolerances.contains(name)) throw Error(ErrorKind::ParseError, "unknown field 'tolerances." + name + "'");
      if (!value.is_number()) throw Error(ErrorKind::ParseError, "field 'tolerances." + name + "' must be a number");
      c.tolerances[name] = value.get<double>();
    }
  }
  if (doc.contains("output_dir")) {
    const auto& v = doc.at("output_dir");
    if (!v.is_string()) throw Error(ErrorKind::ParseError, "field 'output_dir' must be a string");
    c.output_dir = v.get<std::string>();
  }
  validate_config(c);
  return c;
}

std::string serialize_config(const RunConfig& c) {
  json doc;
  doc["dimension"] = c.dimension;
  if (c.lambda) doc["lambda"] = *c.lambda;
  doc["radius"] = c.radius;
  doc["index"] = c.index;
  if (c.gamma) doc["gamma"] = *c.gamma;
  doc["gamma_min"] = c.gamma_min;
  doc["gamma_max"] = c.gamma_max;
  doc["gamma_step"] = c.gamma_step;
  if (c.r_max) doc["r_max"] = *c.r_max;
  doc["epsilons"] = c.epsilons;
  doc["tolerances"] = c.tolerances;
  doc["output_dir"] = c.output_dir;
  return doc.dump(2);
}

void validate_config(const RunConfig& c) {
  if (c.dimension < 3) {
    throw Error(ErrorKind::ValidationError, "dimension must be at least 3, got " + std::to_string(c.dimension));
  }
  if (!(c.radius > 0.0)) throw Error(ErrorKind::ValidationError, "radius must be positive");
  if (c.lambda && !(*c.lambda > 0.0)) throw Error(ErrorKind::ValidationError, "lambda must be positive");
  if (c.gamma && !(*c.gamma > 0.0)) throw Error(ErrorKind::ValidationError, "gamma must be positive");
  if (c.r_max && !(*c.r_max > 0.0)) throw Error(ErrorKind::ValidationError, "r_max must be positive");
  if (!(c.gamma_step > 0.0) || !(c.gamma_min > 0.0) || c.gamma_max < c.gamma_min) {
    throw Error(ErrorKind::ValidationError, "gamma grid needs 0 < gamma_min <= gamma_max and gamma_step > 0");
  }
  for (const auto& [name, value] : c.tolerances) {
    if (!kTolerances.contains(name)) throw Error(ErrorKind::ValidationError, "unknown tolerance '" + name + "'");
    if (!(value > 0.0)) throw Error(ErrorKind::ValidationError, "tolerance '" + name + "' must be positive");
  }
  for (double e : c.epsilons) {
    if (!(e > 0.0 && e < c.radius)) throw Error(ErrorKind::ValidationError, "cutoffs must lie in (0, radius)");
  }
  if (c.output_dir.empty()) throw Error(ErrorKind::ValidationError, "output_dir must not be empty");
}

}  // namespace kslab
