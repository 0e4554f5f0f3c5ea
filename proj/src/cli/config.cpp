#include "phasespace/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "phasespace/errors.hpp"

namespace phasespace::cli {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) { fail(ErrorKind::Config, msg); }

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) config_error(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) config_error("unknown key '" + key + "' in " + where);
}

double number(const json& obj, const char* key, const std::string& where, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    config_error(where + " is missing '" + key + "'");
  }
  const json& v = obj.at(key);
  if (!v.is_number()) config_error(where + "." + key + " must be a number");
  return v.get<double>();
}

Complex complex_value(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  config_error(where + " must be a number or a [re, im] pair");
}

Complex complex_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) config_error(where + " is missing '" + key + "'");
  return complex_value(obj.at(key), where + "." + key);
}

StateSpec parse_state(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    config_error("state must be an object with a string 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "coherent") {
    allow_keys(j, "state", {"type", "alpha0"});
    return Coherent{complex_field(j, "alpha0", "state")};
  }
  if (type == "thermal-coherent") {
    allow_keys(j, "state", {"type", "alpha0", "f"});
    return ThermalCoherent{complex_field(j, "alpha0", "state"), number(j, "f", "state")};
  }
  if (type == "squeezed-thermal-coherent") {
    allow_keys(j, "state", {"type", "alpha0", "z", "f"});
    return SqueezedThermalCoherent{complex_field(j, "alpha0", "state"), complex_field(j, "z", "state"),
                                   number(j, "f", "state", 0.0)};
  }
  if (type == "number-diagonal") {
    allow_keys(j, "state", {"type", "p"});
    if (!j.contains("p") || !j.at("p").is_array()) config_error("state.p must be an array");
    NumberDiagonal s;
    for (const json& p : j.at("p")) {
      if (!p.is_number()) config_error("state.p entries must be numbers");
      s.p.push_back(p.get<double>());
    }
    return s;
  }
  config_error("unknown state type '" + type + "'");
}

MasterEquationParams parse_model(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    config_error("model must be an object with a string 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "kerr-damped") {
    allow_keys(j, "model", {"type", "omega", "chi", "gamma", "nbar"});
    return KerrDamped{number(j, "omega", "model", 0.0), number(j, "chi", "model", 0.0),
                      number(j, "gamma", "model", 0.0), number(j, "nbar", "model", 0.0)};
  }
  if (type == "phase-insensitive") {
    allow_keys(j, "model", {"type", "kappa"});
    return PhaseInsensitive{number(j, "kappa", "model")};
  }
  config_error("unknown model type '" + type + "'");
}

std::vector<double> number_list(const json& j, const std::string& where) {
  if (!j.is_array()) config_error(where + " must be an array of numbers");
  std::vector<double> out;
  for (const json& v : j) {
    if (!v.is_number()) config_error(where + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

MethodChoice parse_method(const std::string& name) {
  if (name == "closed-form") return MethodChoice::ClosedForm;
  if (name == "oracle") return MethodChoice::Oracle;
  if (name == "both") return MethodChoice::Both;
  if (name == "auto") return MethodChoice::Auto;
  config_error("unknown method '" + name + "' (closed-form, oracle, both)");
}

std::string_view method_choice_name(MethodChoice m) {
  switch (m) {
    case MethodChoice::Auto: return "auto";
    case MethodChoice::ClosedForm: return "closed-form";
    case MethodChoice::Oracle: return "oracle";
    case MethodChoice::Both: return "both";
  }
  return "auto";
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  allow_keys(root, "config",
             {"state", "order", "orders", "grid", "cutoff", "model", "times", "method", "kernel", "dt", "suite",
              "output"});
  ScenarioConfig c;
  c.hash = fnv1a(text);
  if (root.contains("state")) c.state = parse_state(root.at("state"));
  if (root.contains("order") && root.contains("orders")) config_error("give either 'order' or 'orders'");
  if (root.contains("order")) c.orders = {number(root, "order", "config")};
  if (root.contains("orders")) c.orders = number_list(root.at("orders"), "orders");
  if (root.contains("grid")) {
    const json& g = root.at("grid");
    allow_keys(g, "grid", {"half_width", "points"});
    c.grid.half_width = number(g, "half_width", "grid", 0.0);
    const double points = number(g, "points", "grid", 121.0);
    if (points != static_cast<int>(points)) config_error("grid.points must be an integer");
    c.grid.points = static_cast<int>(points);
  }
  if (root.contains("cutoff")) {
    const double n = number(root, "cutoff", "config");
    if (n != static_cast<int>(n) || n < 6 || n > 256) config_error("cutoff must be an integer in [6, 256]");
    c.cutoff = static_cast<int>(n);
  }
  if (root.contains("model")) c.model = parse_model(root.at("model"));
  if (root.contains("times")) c.times = number_list(root.at("times"), "times");
  if (root.contains("method")) {
    if (!root.at("method").is_string()) config_error("method must be a string");
    c.method = parse_method(root.at("method").get<std::string>());
  }
  if (root.contains("kernel")) {
    if (!root.at("kernel").is_boolean()) config_error("kernel must be a boolean");
    c.kernel = root.at("kernel").get<bool>();
  }
  if (root.contains("dt")) c.dt = number(root, "dt", "config");
  if (root.contains("suite")) {
    if (!root.at("suite").is_string()) config_error("suite must be a string");
    c.suite = root.at("suite").get<std::string>();
  }
  if (root.contains("output")) {
    if (!root.at("output").is_string()) config_error("output must be a string");
    c.output = root.at("output").get<std::string>();
  }

  try {
    if (c.state) validate(*c.state);
    if (c.model) validate(*c.model);
    for (double a : c.orders) (void)OrderingParameter(a);
    for (double t : c.times)
      if (!(std::isfinite(t) && t >= 0.0)) config_error("times must be finite and >= 0");
    if (!std::is_sorted(c.times.begin(), c.times.end())) config_error("times must be sorted");
    if (c.grid.half_width < 0.0) config_error("grid.half_width must be positive");
    if (c.grid.points < 3 || c.grid.points % 2 == 0) config_error("grid.points must be odd and >= 3");
    if (c.dt < 0.0) config_error("dt must be >= 0");
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Config) throw;
    config_error(e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

PhaseSpaceGrid resolve_grid(const ScenarioConfig& config) {
  double half = config.grid.half_width;
  if (half == 0.0) half = (config.state ? std::abs(center(*config.state)) : 0.0) + 5.0;
  return PhaseSpaceGrid(half, config.grid.points);
}

}  // namespace phasespace::cli
