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


#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "fluxsquid/config.hpp"

using namespace fluxsquid;

namespace {

std::string error_of(const Json& doc, bool strict = false) {
  try {
    parse_config(doc, strict);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("empty config gives the reference circuit") {
  const auto r = parse_config(Json::object(), true);
  const auto& c = r.config;
  CHECK(r.warnings.empty());
  CHECK(c.design == Design::Grounded);
  CHECK(c.circuit.qubit_a.e_j == 3.8);
  CHECK(c.circuit.qubit_b.e_j == 3.2);
  CHECK(c.circuit.qubit_a.e_c == 1.0);
  CHECK(c.circuit.qubit_b.e_l == 1.0);
  CHECK(c.circuit.squid.e_j_sigma == 7.0);
  CHECK(c.circuit.squid.d == 0.0);
  CHECK(c.circuit.sloshing.e_c_sl == 3.4);
  CHECK(c.circuit.sloshing.n_g == 0.5);
  CHECK(!c.capacitances);
  REQUIRE(c.t1_us.size() == 3);
  CHECK(!c.t1_us[0]);
  CHECK(*c.t1_us[1] == 100.0);
  const auto noise = c.noise_models();
  REQUIRE(noise[2]);
  CHECK(noise[2]->t_phi_us == 20.0);
  CHECK(c.sweeps.flux_grid.size() == 81);
  CHECK(c.sweeps.flux_grid.front() == 0.3);
  CHECK(c.sweeps.flux_grid.back() == 0.7);
  CHECK(c.sweeps.d_values == std::vector<double>{0.0, 0.01, 0.05});
}

TEST_CASE("dump and parse round trip") {
  Json doc = {{"design", "floating"},
              {"squid", {{"d", 0.02}, {"e_j_sigma_ghz", 5.0}}},
              {"gate", {{"scheme", "detuned"}, {"x_phi0", 0.52}}},
              {"sweeps", {{"flux_grid_phi0", {{"start", 0.4}, {"stop", 0.6}, {"points", 5}}}}},
              {"noise", {{"t1_us", {nullptr, 50.0}}}}};
  const auto c = parse_config(doc, true).config;
  const Json once = dump_config(c);
  const Json twice = dump_config(parse_config(once, true).config);
  CHECK(once == twice);
  CHECK(once.dump() == twice.dump());
  CHECK(once["gate"]["t_g_ns"].is_null());
  const auto resolved = resolve_scheme_defaults(c);
  const Json r1 = dump_config(resolved);
  CHECK(r1 == dump_config(resolve_scheme_defaults(parse_config(r1, true).config)));
  CHECK(c.sweeps.flux_grid == linspace(0.4, 0.6, 5));
}

TEST_CASE("scheme defaults") {
  auto c = resolve_scheme_defaults(parse_config(Json::object(), false).config);
  CHECK(*c.gate.x == 0.47);
  CHECK(*c.gate.t_g_ns == 11.4);
  CHECK(*c.gate.t_r_ns == 2.0);
  CHECK(*c.sweeps.t_g_min_ns == 5.0);
  CHECK(*c.sweeps.t_g_max_ns == 20.0);
  CHECK(c.sweeps.x_grid.size() == 51);
  Json det = {{"gate", {{"scheme", "detuned"}}}};
  c = resolve_scheme_defaults(parse_config(det, false).config);
  CHECK(*c.gate.x == 0.523);
  CHECK(*c.gate.t_g_ns == 17.0);
  CHECK(*c.gate.t_r_ns == 6.0);
  CHECK(c.gate.scheme_settings().phi_s_on == 0.49);
  CHECK(c.sweeps.x_grid.front() == doctest::Approx(0.515));
  // explicit values survive
  det["gate"]["t_g_ns"] = 20.0;
  CHECK(*resolve_scheme_defaults(parse_config(det, false).config).gate.t_g_ns == 20.0);
  det["gate"]["t_g_ns"] = 10.0;
  CHECK_THROWS_AS(resolve_scheme_defaults(parse_config(det, false).config), ConfigError);
}

TEST_CASE("unknown keys warn, or fail in strict mode") {
  const Json doc = {{"qubit_a", {{"e_j_ghz", 3.0}, {"colour", "blue"}}}, {"extra", 1}};
  const auto r = parse_config(doc, false);
  CHECK(r.warnings.size() == 2);
  CHECK(r.config.circuit.qubit_a.e_j == 3.0);
  const auto msg = error_of(doc, true);
  CHECK(contains(msg, "qubit_a.colour"));
  CHECK(contains(msg, "extra"));
}

TEST_CASE("keys without their unit suffix are always errors") {
  const Json doc = {{"qubit_a", {{"e_j", 3.0}}}, {"gate", {{"t_g", 11.0}}}};
  const auto msg = error_of(doc, false);
  CHECK(contains(msg, "qubit_a.e_j"));
  CHECK(contains(msg, "e_j_ghz"));
  CHECK(contains(msg, "gate.t_g"));
}

TEST_CASE("all problems are reported together") {
  const Json doc = {{"design", "levitating"},
                    {"qubit_b", {{"e_l_ghz", -1.0}}},
                    {"squid", {{"d", 2.0}}},
                    {"basis", {{"n_keep", "four"}}}};
  const auto msg = error_of(doc);
  CHECK(contains(msg, "design"));
  CHECK(contains(msg, "qubit_b"));
  CHECK(contains(msg, "squid"));
  CHECK(contains(msg, "n_keep"));
  CHECK(error_of({{"sweeps", {{"flux_grid_phi0", {0.5, 0.4, 0.6}}}}}).size() > 0);
  CHECK(error_of({{"sweeps", {{"d_values", {0.1}}}}}).size() > 0);
  CHECK(error_of({{"noise", {{"t1_us", {-5.0}}}}}).size() > 0);
  CHECK(error_of({{"gate", {{"scheme", "fast"}}}}).size() > 0);
}

TEST_CASE("capacitances set the charging energies") {
  const Json caps = {{"c_ff", 19.0}, {"c_c_ff", 1.0}, {"c_g_ff", 4.0}};
  const auto g = parse_config({{"capacitances", caps}}, true).config;
  const auto eg = grounded_charging_energies({19.0, 1.0, 4.0});
  CHECK(g.circuit.qubit_a.e_c == eg.e_c);
  CHECK(g.circuit.qubit_b.e_c == eg.e_c);
  CHECK(g.circuit.squid.j_c == eg.j_c);
  const auto f = parse_config({{"design", "floating"}, {"capacitances", caps}}, true).config;
  const auto ef = floating_charging_energies({19.0, 1.0, 4.0});
  CHECK(f.circuit.sloshing.e_c_sl == ef.e_c_sl);
  CHECK(f.circuit.sloshing.j_sl == ef.j_sl);
  // the dump keeps the capacitances and drops the derived energies
  const Json d = dump_config(f);
  CHECK(d["capacitances"]["c_g_ff"] == 4.0);
  CHECK(!d["qubit_a"].contains("e_c_ghz"));
  CHECK(dump_config(parse_config(d, true).config) == d);

  const auto msg = error_of({{"capacitances", caps}, {"qubit_a", {{"e_c_ghz", 1.0}}}});
  CHECK(contains(msg, "qubit_a.e_c_ghz"));
  CHECK(contains(msg, "capacitances"));
}

TEST_CASE("files") {
  const std::string path = "test_config_tmp.json";
  {
    std::ofstream f(path);
    f << R"({"squid": {"d": 0.03}})";
  }
  CHECK(load_config(path, true).config.circuit.squid.d == 0.03);
  {
    std::ofstream f(path);
    f << "{ not json";
  }
  CHECK_THROWS_AS(load_config(path, true), ConfigError);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_config("does/not/exist.json", true), ConfigError);
}

TEST_CASE("number formatting and grids") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(-2.5e-7) == "-2.5e-07");
  const auto g = linspace(0.0, 1.0, 5);
  CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(linspace(2.0, 3.0, 1) == std::vector<double>{2.0});
}
