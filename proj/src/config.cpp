// Copyright 2026 The fluxsquid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "fluxsquid/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace fluxsquid {

namespace {

// Walks one JSON object, remembering which keys were consumed.
class Section {
 public:
  Section(const Json* node, std::string path, std::vector<std::string>& errors)
      : node_(node), path_(std::move(path)), errors_(errors) {
    if (node_ && !node_->is_object()) {
      errors_.push_back(path_ + ": expected an object");
      node_ = nullptr;
    }
  }

  bool has(const std::string& key) const { return node_ && node_->contains(key); }

  const Json* child(const std::string& key) {
    used_.insert(key);
    if (!has(key)) return nullptr;
    return &(*node_)[key];
  }

  void number(const std::string& key, double& out) {
    const Json* v = child(key);
    if (!v) return;
    if (!v->is_number()) {
      errors_.push_back(where(key) + ": expected a number");
      return;
    }
    out = v->get<double>();
    if (!std::isfinite(out)) errors_.push_back(where(key) + ": not finite");
  }

  void optional_number(const std::string& key, std::optional<double>& out) {
    const Json* v = child(key);
    if (!v) return;
    if (v->is_null()) {
      out.reset();
      return;
    }
    double x = 0.0;
    number(key, x);
    out = x;
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    const Json* v = child(key);
    if (!v) return;
    if (!v->is_number_integer()) {
      errors_.push_back(where(key) + ": expected an integer");
      return;
    }
    out = v->get<Int>();
  }

  void string(const std::string& key, std::string& out) {
    const Json* v = child(key);
    if (!v) return;
    if (!v->is_string()) {
      errors_.push_back(where(key) + ": expected a string");
      return;
    }
    out = v->get<std::string>();
  }

  void grid(const std::string& key, std::vector<double>& out) {
    const Json* v = child(key);
    if (!v) return;
    if (v->is_array()) {
      std::vector<double> values;
      for (const auto& item : *v) {
        if (!item.is_number()) {
          errors_.push_back(where(key) + ": grid entries must be numbers");
          return;
        }
        values.push_back(item.get<double>());
      }
      out = std::move(values);
      return;
    }
    if (v->is_object()) {
      Section range(v, where(key), errors_);
      double start = 0.0, stop = 0.0;
      int points = 0;
      for (const char* k : {"start", "stop", "points"}) {
        if (!range.has(k)) errors_.push_back(where(key) + ": range needs '" + k + "'");
      }
      range.number("start", start);
      range.number("stop", stop);
      range.integer("points", points);
      range.finish(true);
      if (points < 1) {
        errors_.push_back(where(key) + ": range needs points >= 1");
        return;
      }
      out = linspace(start, stop, points);
      return;
    }
    errors_.push_back(where(key) + ": expected an array or {start, stop, points}");
  }

  // Unknown keys; a key that only lacks its unit suffix is always an error.
  void finish(bool strict, std::vector<std::string>* warnings = nullptr) {
    if (!node_) return;
    for (const auto& [key, value] : node_->items()) {
      if (used_.count(key)) continue;
      std::string hint;
      for (const auto& known : used_) {
        if (known.size() > key.size() && known.compare(0, key.size(), key) == 0 &&
            known[key.size()] == '_') {
          hint = known;
        }
      }
      if (!hint.empty()) {
        errors_.push_back(where(key) + ": unit ambiguous, use '" + hint + "'");
      } else if (strict) {
        errors_.push_back(where(key) + ": unknown key");
      } else if (warnings) {
        warnings->push_back(where(key) + ": unknown key ignored");
      }
    }
  }

  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const Json* node_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> used_;
};

template <typename Fn>
void check(std::vector<std::string>& errors, const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    errors.push_back(where + ": " + e.what());
  }
}

Json grid_json(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

bool monotone(const std::vector<double>& v) {
  if (v.size() < 2) return true;
  bool up = true, down = true;
  for (std::size_t i = 1; i < v.size(); ++i) {
    up = up && v[i] > v[i - 1];
    down = down && v[i] < v[i - 1];
  }
  return up || down;
}

}  // namespace

SchemeSettings GateRunSettings::scheme_settings() const {
  SchemeSettings s = SchemeSettings::defaults(scheme);
  if (t_r_ns) s.t_r = *t_r_ns;
  if (scheme == GateScheme::Detuned) s.phi_s_on = phi_s_on;
  return s;
}

std::vector<std::optional<NoiseModel>> SimulationConfig::noise_models() const {
  std::vector<std::optional<NoiseModel>> out;
  for (const auto& t1 : t1_us) {
    if (t1) {
      out.push_back(NoiseModel{*t1, t_phi_factor * *t1});
    } else {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

std::vector<double> linspace(double start, double stop, int points) {
  if (points < 1) throw DomainError("linspace needs at least one point");
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = start;
    return out;
  }
  for (int i = 0; i < points; ++i) {
    out[i] = start + (stop - start) * i / (points - 1);
  }
  out.back() = stop;
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

SimulationConfig resolve_scheme_defaults(SimulationConfig cfg) {
  auto& g = cfg.gate;
  auto& w = cfg.sweeps;
  const bool detuned = g.scheme == GateScheme::Detuned;
  const SchemeSettings s = g.scheme_settings();
  g.t_r_ns = s.t_r;
  if (!g.x) g.x = detuned ? 0.523 : 0.47;
  if (!g.t_g_ns) g.t_g_ns = detuned ? 17.0 : 11.4;
  if (!w.t_g_min_ns) w.t_g_min_ns = detuned ? 12.0 : 5.0;
  if (!w.t_g_max_ns) w.t_g_max_ns = detuned ? 25.0 : 20.0;
  if (w.x_grid.empty()) w.x_grid = detuned ? linspace(0.515, 0.53, 31) : linspace(0.44, 0.49, 51);
  if (w.t_g_grid.empty()) {
    w.t_g_grid = linspace(*w.t_g_min_ns, *w.t_g_max_ns,
                          static_cast<int>(std::lround((*w.t_g_max_ns - *w.t_g_min_ns) / 0.1)) + 1);
  }
  w.optimize.t_g_min = *w.t_g_min_ns;
  w.optimize.t_g_max = *w.t_g_max_ns;
  if (*g.t_g_ns < 2.0 * s.t_r) {
    throw ConfigError("gate.t_g_ns: " + format_double(*g.t_g_ns) + " ns is shorter than the two " +
                      format_double(s.t_r) + " ns ramps");
  }
  if (!(w.optimize.t_g_max > w.optimize.t_g_min)) {
    throw ConfigError("sweeps.optimize: need t_g_max_ns > t_g_min_ns");
  }
  return cfg;
}

LoadResult parse_config(const Json& doc, bool strict) {
  std::vector<std::string> errors;
  LoadResult result;
  SimulationConfig& cfg = result.config;
  cfg.sweeps.flux_grid = linspace(0.3, 0.7, 81);
  cfg.sweeps.e_j_sigma_grid = linspace(1.0, 10.0, 10);
  cfg.sweeps.d_grid = linspace(0.0, 0.05, 11);
  cfg.sweeps.d_values = {0.0, 0.01, 0.05};

  Section root(&doc, "", errors);

  std::string design = "grounded";
  root.string("design", design);
  check(errors, "design", [&] { cfg.design = design_from_string(design); });

  auto qubit = [&](const char* key, FluxoniumParams& q, bool& e_c_set) {
    Section s(root.child(key), key, errors);
    s.number("e_j_ghz", q.e_j);
    e_c_set = s.has("e_c_ghz");
    s.number("e_c_ghz", q.e_c);
    s.number("e_l_ghz", q.e_l);
    s.number("phi_ext_phi0", q.phi_ext);
    s.finish(strict, &result.warnings);
  };
  bool ec_a = false, ec_b = false;
  qubit("qubit_a", cfg.circuit.qubit_a, ec_a);
  qubit("qubit_b", cfg.circuit.qubit_b, ec_b);

  bool jc_set = false;
  {
    Section s(root.child("squid"), "squid", errors);
    s.number("e_j_sigma_ghz", cfg.circuit.squid.e_j_sigma);
    s.number("d", cfg.circuit.squid.d);
    s.number("phi_s_phi0", cfg.circuit.squid.phi_s);
    jc_set = s.has("j_c_ghz");
    s.number("j_c_ghz", cfg.circuit.squid.j_c);
    s.finish(strict, &result.warnings);
  }
  bool ecsl_set = false, jsl_set = false;
  {
    Section s(root.child("sloshing"), "sloshing", errors);
    ecsl_set = s.has("e_c_sl_ghz");
    s.number("e_c_sl_ghz", cfg.circuit.sloshing.e_c_sl);
    s.number("n_g", cfg.circuit.sloshing.n_g);
    jsl_set = s.has("j_sl_ghz");
    s.number("j_sl_ghz", cfg.circuit.sloshing.j_sl);
    s.finish(strict, &result.warnings);
  }
  if (root.has("capacitances")) {
    Section s(root.child("capacitances"), "capacitances", errors);
    CapacitanceSet caps;
    s.number("c_ff", caps.c);
    s.number("c_c_ff", caps.c_c);
    s.number("c_g_ff", caps.c_g);
    s.finish(strict, &result.warnings);
    cfg.capacitances = caps;
    const auto conflict = [&](bool set, const std::string& key) {
      if (set) errors.push_back(key + ": given both directly and through capacitances");
    };
    conflict(ec_a, "qubit_a.e_c_ghz");
    conflict(ec_b, "qubit_b.e_c_ghz");
    conflict(jc_set, "squid.j_c_ghz");
    if (cfg.design == Design::Floating) {
      conflict(ecsl_set, "sloshing.e_c_sl_ghz");
      conflict(jsl_set, "sloshing.j_sl_ghz");
    }
    check(errors, "capacitances", [&] {
      if (cfg.design == Design::Grounded) {
        const auto e = grounded_charging_energies(caps);
        cfg.circuit.qubit_a.e_c = cfg.circuit.qubit_b.e_c = e.e_c;
        cfg.circuit.squid.j_c = e.j_c;
      } else {
        const auto e = floating_charging_energies(caps);
        cfg.circuit.qubit_a.e_c = cfg.circuit.qubit_b.e_c = e.e_c;
        cfg.circuit.sloshing.e_c_sl = e.e_c_sl;
        cfg.circuit.squid.j_c = e.j_c;
        cfg.circuit.sloshing.j_sl = e.j_sl;
      }
    });
  }
  {
    Section s(root.child("basis"), "basis", errors);
    auto& b = cfg.circuit.basis;
    s.integer("n_fock", b.n_fock);
    s.integer("n_keep", b.n_keep);
    s.integer("n_charge_cut", b.n_charge_cut);
    s.integer("n_keep_sl", b.n_keep_sl);
    s.finish(strict, &result.warnings);
    if (b.n_keep < 2 || b.n_keep > b.n_fock) {
      errors.push_back("basis: need 2 <= n_keep <= n_fock");
    }
    if (b.n_charge_cut < 1 || b.n_keep_sl < 1 || b.n_keep_sl > 2 * b.n_charge_cut + 1) {
      errors.push_back("basis: need 1 <= n_keep_sl <= 2 n_charge_cut + 1");
    }
  }
  {
    Section s(root.child("solver"), "solver", errors);
    auto& o = cfg.integrator;
    s.number("rtol", o.rtol);
    s.number("atol", o.atol);
    s.number("initial_step_ns", o.initial_step);
    s.number("min_step_ns", o.min_step);
    s.integer("max_steps", o.max_steps);
    s.finish(strict, &result.warnings);
    if (!(o.rtol > 0.0) || !(o.atol > 0.0) || !(o.initial_step > 0.0) || !(o.min_step > 0.0) ||
        o.max_steps < 1) {
      errors.push_back("solver: tolerances, steps and max_steps must be positive");
    }
  }
  {
    Section s(root.child("noise"), "noise", errors);
    if (const Json* t1 = s.child("t1_us")) {
      if (!t1->is_array()) {
        errors.push_back("noise.t1_us: expected an array of numbers or null");
      } else {
        cfg.t1_us.clear();
        for (const auto& v : *t1) {
          if (v.is_null()) {
            cfg.t1_us.push_back(std::nullopt);
          } else if (v.is_number() && v.get<double>() > 0.0) {
            cfg.t1_us.push_back(v.get<double>());
          } else {
            errors.push_back("noise.t1_us: entries must be positive numbers or null");
          }
        }
      }
    }
    s.number("t_phi_factor", cfg.t_phi_factor);
    s.finish(strict, &result.warnings);
    if (!(cfg.t_phi_factor > 0.0)) errors.push_back("noise.t_phi_factor: must be positive");
  }
  {
    Section s(root.child("jc_star"), "jc_star", errors);
    s.number("tolerance_ghz", cfg.jc_star.tolerance);
    s.number("j_max_ghz", cfg.jc_star.j_max);
    s.integer("scan_points", cfg.jc_star.scan_points);
    s.number("x_tolerance_ghz", cfg.jc_star.x_tolerance);
    s.finish(strict, &result.warnings);
    if (!(cfg.jc_star.tolerance > 0.0) || !(cfg.jc_star.j_max > 0.0) ||
        cfg.jc_star.scan_points < 2 || !(cfg.jc_star.x_tolerance > 0.0)) {
      errors.push_back("jc_star: tolerances and j_max positive, scan_points >= 2");
    }
  }
  {
    Section s(root.child("gate"), "gate", errors);
    auto& g = cfg.gate;
    std::string scheme = to_string(g.scheme), basis = to_string(g.basis);
    s.string("scheme", scheme);
    s.string("basis", basis);
    check(errors, "gate.scheme", [&] { g.scheme = scheme_from_string(scheme); });
    check(errors, "gate.basis", [&] { g.basis = basis_from_string(basis); });
    s.optional_number("t_r_ns", g.t_r_ns);
    s.number("phi_s_on_phi0", g.phi_s_on);
    s.optional_number("x_phi0", g.x);
    s.optional_number("t_g_ns", g.t_g_ns);
    s.number("theta_rad", g.theta);
    s.finish(strict, &result.warnings);
    if (g.t_r_ns && !(*g.t_r_ns > 0.0)) errors.push_back("gate.t_r_ns: must be positive");
    const double t_r = g.scheme_settings().t_r;
    if (g.t_g_ns && *g.t_g_ns < 2.0 * t_r) {
      errors.push_back("gate.t_g_ns: shorter than the two ramps");
    }
  }
  {
    Section s(root.child("sweeps"), "sweeps", errors);
    auto& w = cfg.sweeps;
    s.grid("flux_grid_phi0", w.flux_grid);
    s.grid("e_j_sigma_grid_ghz", w.e_j_sigma_grid);
    s.grid("d_grid", w.d_grid);
    s.grid("x_grid_phi0", w.x_grid);
    s.grid("t_g_grid_ns", w.t_g_grid);
    s.grid("d_values", w.d_values);
    {
      Section o(s.child("optimize"), "sweeps.optimize", errors);
      o.optional_number("t_g_min_ns", w.t_g_min_ns);
      o.optional_number("t_g_max_ns", w.t_g_max_ns);
      o.number("coarse_step_ns", w.optimize.coarse_step);
      o.number("tolerance_ns", w.optimize.tolerance);
      o.integer("bins", w.optimize.bins);
      o.finish(strict, &result.warnings);
    }
    s.finish(strict, &result.warnings);
    if (!monotone(w.flux_grid)) errors.push_back("sweeps.flux_grid_phi0: must be monotone");
    for (double d : w.d_values) {
      if (d < 0.0 || d > 0.05) errors.push_back("sweeps.d_values: entries must lie in [0, 0.05]");
    }
    const auto& o = w.optimize;
    if (w.t_g_min_ns && w.t_g_max_ns && !(*w.t_g_max_ns > *w.t_g_min_ns)) {
      errors.push_back("sweeps.optimize: need t_g_max_ns > t_g_min_ns");
    }
    if (!(o.coarse_step > 0.0) || !(o.tolerance > 0.0) || o.bins < 1) {
      errors.push_back("sweeps.optimize: need positive steps and bins >= 1");
    }
  }
  root.finish(strict, &result.warnings);

  check(errors, "qubit_a", [&] { cfg.circuit.qubit_a.validate(); });
  check(errors, "qubit_b", [&] { cfg.circuit.qubit_b.validate(); });
  check(errors, "squid", [&] { cfg.circuit.squid.validate(); });
  if (cfg.design == Design::Floating) {
    check(errors, "sloshing", [&] { cfg.circuit.sloshing.validate(); });
  }

  if (!errors.empty()) {
    std::ostringstream msg;
    msg << errors.size() << " configuration problem(s):";
    for (const auto& e : errors) msg << "\n  " << e;
    throw ConfigError(msg.str());
  }
  return result;
}

LoadResult load_config(const std::string& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (doc.is_null()) doc = Json::object();
  return parse_config(doc, strict);
}

Json dump_config(const SimulationConfig& cfg) {
  Json j;
  const auto& c = cfg.circuit;
  const bool caps = cfg.capacitances.has_value();
  const bool floating = cfg.design == Design::Floating;
  j["design"] = to_string(cfg.design);
  auto qubit = [&](const FluxoniumParams& q) {
    Json o;
    o["e_j_ghz"] = q.e_j;
    if (!caps) o["e_c_ghz"] = q.e_c;
    o["e_l_ghz"] = q.e_l;
    o["phi_ext_phi0"] = q.phi_ext;
    return o;
  };
  j["qubit_a"] = qubit(c.qubit_a);
  j["qubit_b"] = qubit(c.qubit_b);
  j["squid"] = {{"e_j_sigma_ghz", c.squid.e_j_sigma}, {"d", c.squid.d},
                {"phi_s_phi0", c.squid.phi_s}};
  if (!caps) j["squid"]["j_c_ghz"] = c.squid.j_c;
  Json sl;
  if (!(caps && floating)) sl["e_c_sl_ghz"] = c.sloshing.e_c_sl;
  sl["n_g"] = c.sloshing.n_g;
  if (!(caps && floating)) sl["j_sl_ghz"] = c.sloshing.j_sl;
  j["sloshing"] = sl;
  if (caps) {
    j["capacitances"] = {{"c_ff", cfg.capacitances->c},
                         {"c_c_ff", cfg.capacitances->c_c},
                         {"c_g_ff", cfg.capacitances->c_g}};
  }
  j["basis"] = {{"n_fock", c.basis.n_fock},
                {"n_keep", c.basis.n_keep},
                {"n_charge_cut", c.basis.n_charge_cut},
                {"n_keep_sl", c.basis.n_keep_sl}};
  j["solver"] = {{"rtol", cfg.integrator.rtol},
                 {"atol", cfg.integrator.atol},
                 {"initial_step_ns", cfg.integrator.initial_step},
                 {"min_step_ns", cfg.integrator.min_step},
                 {"max_steps", cfg.integrator.max_steps}};
  Json t1 = Json::array();
  for (const auto& t : cfg.t1_us) {
    if (t) {
      t1.push_back(*t);
    } else {
      t1.push_back(nullptr);
    }
  }
  j["noise"] = {{"t1_us", t1}, {"t_phi_factor", cfg.t_phi_factor}};
  j["jc_star"] = {{"tolerance_ghz", cfg.jc_star.tolerance},
                  {"j_max_ghz", cfg.jc_star.j_max},
                  {"scan_points", cfg.jc_star.scan_points},
                  {"x_tolerance_ghz", cfg.jc_star.x_tolerance}};
  const auto& g = cfg.gate;
  j["gate"] = {{"scheme", to_string(g.scheme)},
               {"basis", to_string(g.basis)},
               {"t_r_ns", opt_json(g.t_r_ns)},
               {"phi_s_on_phi0", g.phi_s_on},
               {"x_phi0", opt_json(g.x)},
               {"t_g_ns", opt_json(g.t_g_ns)},
               {"theta_rad", g.theta}};
  const auto& w = cfg.sweeps;
  j["sweeps"] = {{"flux_grid_phi0", grid_json(w.flux_grid)},
                 {"e_j_sigma_grid_ghz", grid_json(w.e_j_sigma_grid)},
                 {"d_grid", grid_json(w.d_grid)},
                 {"x_grid_phi0", grid_json(w.x_grid)},
                 {"t_g_grid_ns", grid_json(w.t_g_grid)},
                 {"d_values", grid_json(w.d_values)},
                 {"optimize",
                  {{"t_g_min_ns", opt_json(w.t_g_min_ns)},
                   {"t_g_max_ns", opt_json(w.t_g_max_ns)},
                   {"coarse_step_ns", w.optimize.coarse_step},
                   {"tolerance_ns", w.optimize.tolerance},
                   {"bins", w.optimize.bins}}}};
  return j;
}

}  // namespace fluxsquid
