#include "fasuav/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

#include "fasuav/errors.hpp"

namespace fasuav::cli {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Walks one JSON object, remembering which keys were read so that leftovers
// can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key(std::string_view name) const {
    return path_.empty() ? std::string(name) : path_ + "." + std::string(name);
  }

  bool has(std::string_view name) const { return node_.contains(std::string(name)); }

  const json* get(std::string_view name) {
    const auto it = node_.find(std::string(name));
    if (it == node_.end()) return nullptr;
    seen_.insert(std::string(name));
    return &*it;
  }

  void number(std::string_view name, double& out) {
    if (const auto* v = get(name)) out = as_number(*v, key(name));
  }

  void integer(std::string_view name, int& out) {
    if (const auto* v = get(name)) {
      const auto x = as_integer(*v, key(name));
      if (x > std::numeric_limits<int>::max() || x < std::numeric_limits<int>::min()) {
        throw ConfigError(key(name), "integer out of range");
      }
      out = static_cast<int>(x);
    }
  }

  void unsigned_integer(std::string_view name, std::uint64_t& out) {
    if (const auto* v = get(name)) {
      if (!v->is_number_unsigned()) throw ConfigError(key(name), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }

  void string(std::string_view name, std::string& out) {
    if (const auto* v = get(name)) {
      if (!v->is_string()) throw ConfigError(key(name), "expected a string");
      out = v->get<std::string>();
    }
  }

  Section child(std::string_view name) {
    static const json empty = json::object();
    const auto* v = get(name);
    return Section(v ? *v : empty, key(name));
  }

  void finish() const {
    for (const auto& [k, v] : node_.items()) {
      if (!seen_.contains(k)) throw ConfigError(key(k), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where, "expected a number");
    return v.get<double>();
  }

  static long long as_integer(const json& v, const std::string& where) {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
      const double x = v.get<double>();
      if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9e15) return static_cast<long long>(x);
    }
    throw ConfigError(where, "expected an integer");
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

channel::Vec3 parse_vec3(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(where, "expected [x, y, z]");
  return {Section::as_number(v[0], where + "[0]"), Section::as_number(v[1], where + "[1]"),
          Section::as_number(v[2], where + "[2]")};
}

json vec3_json(const channel::Vec3& v) { return json::array({v.x, v.y, v.z}); }

template <typename T, typename Parse>
std::vector<T> parse_name_list(Section& s, std::string_view name, std::vector<T> fallback, Parse parse) {
  const auto* v = s.get(name);
  if (!v) return fallback;
  if (!v->is_array() || v->empty()) throw ConfigError(s.key(name), "expected a non-empty list of names");
  std::vector<T> out;
  for (std::size_t i = 0; i < v->size(); ++i) {
    const auto where = s.key(name) + "[" + std::to_string(i) + "]";
    if (!(*v)[i].is_string()) throw ConfigError(where, "expected a string");
    T item;
    try {
      item = parse((*v)[i].template get<std::string>());
    } catch (const DomainError& e) {
      throw ConfigError(where, e.what());
    }
    if (std::find(out.begin(), out.end(), item) != out.end()) throw ConfigError(where, "duplicate entry");
    out.push_back(item);
  }
  return out;
}

bool is_plain_vertical(const channel::Geometry& g) {
  return g.uav.x == 0.0 && g.uav.y == 0.0 && g.ch == channel::Vec3{};
}

}  // namespace

std::string_view to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::p_u: return "p_u";
    case SweepParameter::alpha: return "alpha";
    case SweepParameter::n_ports: return "n_ports";
    case SweepParameter::width: return "width";
    case SweepParameter::m: return "m";
    case SweepParameter::d: return "d";
  }
  return "?";
}

SweepParameter sweep_parameter_from_string(std::string_view name) {
  for (auto p : {SweepParameter::p_u, SweepParameter::alpha, SweepParameter::n_ports, SweepParameter::width,
                 SweepParameter::m, SweepParameter::d}) {
    if (name == to_string(p)) return p;
  }
  throw DomainError("unknown sweep parameter '" + std::string(name) + "'");
}

std::string Curve::suffix() const {
  std::string s;
  if (n_ports) s += "_N" + std::to_string(*n_ports);
  if (d) s += "_d" + fmt(*d);
  if (m) s += "_m" + std::to_string(*m);
  if (width) s += "_W" + fmt(*width);
  return s;
}

bool ExperimentSpec::uses_monte_carlo() const {
  return std::find(methods.begin(), methods.end(), rate::Method::monte_carlo) != methods.end() ||
         optimize.method == rate::Method::monte_carlo;
}

rate::ScenarioConfig apply_sweep(const rate::ScenarioConfig& base, SweepParameter p, double value) {
  auto cfg = base;
  auto require_integer = [&](const char* what) {
    if (!(value >= 1.0) || value != std::floor(value) || value > 1e6) {
      throw DomainError(std::string(what) + " must be a positive integer");
    }
    return static_cast<int>(value);
  };
  switch (p) {
    case SweepParameter::p_u: cfg.p_u = value; break;
    case SweepParameter::alpha: cfg.alpha = value; break;
    case SweepParameter::n_ports: {
      const int n = require_integer("n_ports");
      cfg.fas = base.fas.explicit_correlation() ? channel::FasGeometry::with_correlation(n, base.fas.mu())
                                                : channel::FasGeometry::from_width(n, base.fas.width());
      break;
    }
    case SweepParameter::width:
      cfg.fas = channel::FasGeometry::from_width(base.fas.n_ports(), value);
      break;
    case SweepParameter::m: cfg.fading.m = require_integer("m"); break;
    case SweepParameter::d: {
      const double dx = base.geometry.ch.x - base.geometry.uav.x;
      const double dy = base.geometry.ch.y - base.geometry.uav.y;
      const double h2 = value * value - dx * dx - dy * dy;
      if (!(value > 0.0) || !(h2 > 0.0)) throw DomainError("d must exceed the horizontal UAV offset");
      cfg.geometry.uav.z = std::sqrt(h2);
      break;
    }
  }
  cfg.validate();
  return cfg;
}

rate::ScenarioConfig apply_curve(const rate::ScenarioConfig& base, const Curve& curve) {
  auto cfg = base;
  if (curve.m) cfg = apply_sweep(cfg, SweepParameter::m, *curve.m);
  if (curve.d) cfg = apply_sweep(cfg, SweepParameter::d, *curve.d);
  if (curve.width) cfg = apply_sweep(cfg, SweepParameter::width, *curve.width);
  if (curve.n_ports) cfg = apply_sweep(cfg, SweepParameter::n_ports, *curve.n_ports);
  cfg.validate();
  return cfg;
}

void ExperimentSpec::validate() const {
  const auto& s = scenario;
  auto check = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ConfigError(key, what);
  };
  check(s.path_loss.beta_ref > 0.0 && std::isfinite(s.path_loss.beta_ref), "pathloss.beta_ref", "must be > 0");
  check(s.path_loss.rho >= 2.0 && std::isfinite(s.path_loss.rho), "pathloss.rho", "must be >= 2");
  check(s.fading.m >= 1, "fading.m", "must be a positive integer");
  check(s.fading.sigma_sq > 0.0 && std::isfinite(s.fading.sigma_sq), "fading.sigma_sq", "must be > 0");
  check(s.eta > 0.0 && s.eta <= 1.0, "power.eta", "must lie in (0, 1]");
  check(s.p_u > 0.0 && std::isfinite(s.p_u), "power.p_u", "must be > 0");
  check(s.n0 > 0.0 && std::isfinite(s.n0), "power.n0", "must be > 0");
  check(s.alpha > 0.0 && s.alpha < 1.0, "power.alpha", "must lie in (0, 1)");
  check(s.t_slot > 0.0 && std::isfinite(s.t_slot), "power.t_slot", "must be > 0");
  check(power.p_c >= 0.0 && std::isfinite(power.p_c), "power.p_c", "must be >= 0");
  check(power.p_o >= 0.0 && std::isfinite(power.p_o), "power.p_o", "must be >= 0");
  check(power.p_i >= 0.0 && std::isfinite(power.p_i), "power.p_i", "must be >= 0");
  try {
    s.geometry.validate();
  } catch (const DomainError& e) {
    throw ConfigError("geometry", e.what());
  }
  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ConfigError("", e.what());
  }

  check(!sweep_values.empty(), "sweep.values", "must be a non-empty list");
  for (std::size_t i = 1; i < sweep_values.size(); ++i) {
    check(sweep_values[i] > sweep_values[i - 1], "sweep.values", "must be strictly increasing");
  }
  for (std::size_t c = 0; c <= curves.size(); ++c) {
    rate::ScenarioConfig base;
    const std::string where = c < curves.size() ? "sweep.curves[" + std::to_string(c) + "]" : "";
    try {
      base = c < curves.size() ? apply_curve(s, curves[c]) : s;
    } catch (const DomainError& e) {
      throw ConfigError(where, e.what());
    }
    for (std::size_t i = 0; i < sweep_values.size(); ++i) {
      try {
        apply_sweep(base, sweep_parameter, sweep_values[i]);
      } catch (const DomainError& e) {
        throw ConfigError("sweep.values[" + std::to_string(i) + "]", e.what());
      }
    }
  }
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& cv = curves[c];
    const bool clash = (sweep_parameter == SweepParameter::n_ports && cv.n_ports) ||
                       (sweep_parameter == SweepParameter::d && cv.d) ||
                       (sweep_parameter == SweepParameter::m && cv.m) ||
                       (sweep_parameter == SweepParameter::width && cv.width);
    check(!clash, "sweep.curves", "a curve may not override the swept parameter");
    for (std::size_t k = 0; k < c; ++k) check(!(curves[k] == cv), "sweep.curves", "duplicate curve");
  }
  check(!methods.empty(), "sweep.methods", "must be non-empty");
  check(!strategies.empty(), "sweep.strategies", "must be non-empty");
  check(optimize.method != rate::Method::asymptotic, "sweep.optimize.method", "must be exact or monte_carlo");
  check(optimize.grid >= 8, "sweep.optimize.grid", "must be >= 8");
  check(optimize.refine_tol > 0.0 && optimize.refine_tol < 0.1, "sweep.optimize.refine_tol",
        "must lie in (0, 0.1)");
  check(trials >= 1, "mc.trials", "must be positive");
  if (uses_monte_carlo()) check(trials >= 1000, "mc.trials", "must be >= 1000 when monte_carlo is selected");
}

ExperimentSpec parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }

  ExperimentSpec spec;
  auto& sc = spec.scenario;
  Section top(root, "");

  {
    auto g = top.child("geometry");
    const bool vertical = g.has("d");
    if (vertical && (g.has("uav") || g.has("ch"))) {
      throw ConfigError("geometry", "give either d or uav/ch, not both");
    }
    if (vertical) {
      double d = 0.0;
      g.number("d", d);
      if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError("geometry.d", "must be > 0");
      sc.geometry = channel::Geometry::vertical(d);
    } else {
      if (const auto* v = g.get("uav")) sc.geometry.uav = parse_vec3(*v, "geometry.uav");
      if (const auto* v = g.get("ch")) sc.geometry.ch = parse_vec3(*v, "geometry.ch");
    }
    g.finish();
  }
  {
    auto p = top.child("pathloss");
    p.number("beta_ref", sc.path_loss.beta_ref);
    p.number("rho", sc.path_loss.rho);
    p.finish();
  }
  {
    auto f = top.child("fas");
    int n = sc.fas.n_ports();
    f.integer("n_ports", n);
    if (n < 1) throw ConfigError("fas.n_ports", "must be >= 1");
    if (f.has("mu") && f.has("width")) throw ConfigError("fas", "give either width or mu, not both");
    try {
      if (f.has("mu")) {
        double mu = 0.0;
        f.number("mu", mu);
        if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("fas.mu", "must lie in [0, 1]");
        sc.fas = channel::FasGeometry::with_correlation(n, mu);
      } else {
        double w = sc.fas.width();
        f.number("width", w);
        if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("fas.width", "must be finite and >= 0");
        sc.fas = channel::FasGeometry::from_width(n, w);
      }
    } catch (const DomainError& e) {
      throw ConfigError("fas", e.what());
    }
    f.finish();
  }
  {
    auto f = top.child("fading");
    f.integer("m", sc.fading.m);
    f.number("sigma_sq", sc.fading.sigma_sq);
    std::string mode(rate::to_string(sc.uplink_mode));
    f.string("uplink_mode", mode);
    try {
      sc.uplink_mode = rate::uplink_mode_from_string(mode);
    } catch (const DomainError& e) {
      throw ConfigError("fading.uplink_mode", e.what());
    }
    f.finish();
  }
  {
    auto p = top.child("power");
    p.number("eta", sc.eta);
    p.number("p_u", sc.p_u);
    p.number("n0", sc.n0);
    p.number("alpha", sc.alpha);
    p.number("t_slot", sc.t_slot);
    p.number("p_c", spec.power.p_c);
    p.number("p_o", spec.power.p_o);
    p.number("p_i", spec.power.p_i);
    p.finish();
  }
  {
    auto s = top.child("sweep");
    std::string param;
    s.string("parameter", param);
    if (param.empty()) throw ConfigError("sweep.parameter", "required");
    try {
      spec.sweep_parameter = sweep_parameter_from_string(param);
    } catch (const DomainError& e) {
      throw ConfigError("sweep.parameter", e.what());
    }
    const auto* values = s.get("values");
    if (!values) throw ConfigError("sweep.values", "required");
    if (!values->is_array()) throw ConfigError("sweep.values", "expected a list of numbers");
    for (std::size_t i = 0; i < values->size(); ++i) {
      spec.sweep_values.push_back(Section::as_number((*values)[i], "sweep.values[" + std::to_string(i) + "]"));
    }
    spec.methods = parse_name_list(s, "methods", spec.methods, rate::method_from_string);
    spec.strategies = parse_name_list(s, "strategies", spec.strategies, selection::strategy_from_string);
    if (const auto* curves = s.get("curves")) {
      if (!curves->is_array()) throw ConfigError("sweep.curves", "expected a list of objects");
      for (std::size_t i = 0; i < curves->size(); ++i) {
        Section c((*curves)[i], "sweep.curves[" + std::to_string(i) + "]");
        Curve curve;
        if (c.has("n_ports")) {
          int v = 0;
          c.integer("n_ports", v);
          curve.n_ports = v;
        }
        if (c.has("m")) {
          int v = 0;
          c.integer("m", v);
          curve.m = v;
        }
        if (c.has("d")) {
          double v = 0;
          c.number("d", v);
          curve.d = v;
        }
        if (c.has("width")) {
          double v = 0;
          c.number("width", v);
          curve.width = v;
        }
        c.finish();
        spec.curves.push_back(curve);
      }
    }
    auto o = s.child("optimize");
    std::string method(rate::to_string(spec.optimize.method));
    o.string("method", method);
    try {
      spec.optimize.method = rate::method_from_string(method);
    } catch (const DomainError& e) {
      throw ConfigError("sweep.optimize.method", e.what());
    }
    o.integer("grid", spec.optimize.grid);
    o.number("refine_tol", spec.optimize.refine_tol);
    o.finish();
    s.finish();
  }
  {
    auto m = top.child("mc");
    m.unsigned_integer("trials", spec.trials);
    m.unsigned_integer("seed", spec.seed);
    m.finish();
  }
  top.string("output", spec.output_path);
  top.finish();

  spec.validate();
  return spec;
}

ExperimentSpec load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string serialize(const ExperimentSpec& spec, int indent) {
  const auto& sc = spec.scenario;
  // ordered_json keeps the section order stable and readable.
  nlohmann::ordered_json j;
  if (is_plain_vertical(sc.geometry)) {
    j["geometry"]["d"] = sc.geometry.uav.z;
  } else {
    j["geometry"]["uav"] = vec3_json(sc.geometry.uav);
    j["geometry"]["ch"] = vec3_json(sc.geometry.ch);
  }
  j["pathloss"] = {{"beta_ref", sc.path_loss.beta_ref}, {"rho", sc.path_loss.rho}};
  j["fas"]["n_ports"] = sc.fas.n_ports();
  if (sc.fas.explicit_correlation()) {
    j["fas"]["mu"] = sc.fas.mu();
  } else {
    j["fas"]["width"] = sc.fas.width();
  }
  j["fading"] = {{"m", sc.fading.m},
                 {"sigma_sq", sc.fading.sigma_sq},
                 {"uplink_mode", std::string(rate::to_string(sc.uplink_mode))}};
  j["power"] = {{"eta", sc.eta},          {"p_u", sc.p_u},           {"n0", sc.n0},
                {"alpha", sc.alpha},      {"t_slot", sc.t_slot},     {"p_c", spec.power.p_c},
                {"p_o", spec.power.p_o},  {"p_i", spec.power.p_i}};
  auto& sw = j["sweep"];
  sw["parameter"] = std::string(to_string(spec.sweep_parameter));
  sw["values"] = spec.sweep_values;
  sw["methods"] = nlohmann::ordered_json::array();
  for (auto m : spec.methods) sw["methods"].push_back(std::string(rate::to_string(m)));
  sw["strategies"] = nlohmann::ordered_json::array();
  for (auto s : spec.strategies) sw["strategies"].push_back(std::string(selection::to_string(s)));
  if (!spec.curves.empty()) {
    sw["curves"] = nlohmann::ordered_json::array();
    for (const auto& c : spec.curves) {
      nlohmann::ordered_json cj = nlohmann::ordered_json::object();
      if (c.n_ports) cj["n_ports"] = *c.n_ports;
      if (c.d) cj["d"] = *c.d;
      if (c.m) cj["m"] = *c.m;
      if (c.width) cj["width"] = *c.width;
      sw["curves"].push_back(cj);
    }
  }
  sw["optimize"] = {{"method", std::string(rate::to_string(spec.optimize.method))},
                    {"grid", spec.optimize.grid},
                    {"refine_tol", spec.optimize.refine_tol}};
  j["mc"] = {{"trials", spec.trials}, {"seed", spec.seed}};
  if (!spec.output_path.empty()) j["output"] = spec.output_path;
  return j.dump(indent);
}

}  // namespace fasuav::cli
