#include "vspec/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "vspec/special.hpp"

namespace vspec {

using nlohmann::json;

std::shared_ptr<const RadialGrid> GridSpec::make() const {
  return std::make_shared<const RadialGrid>(RadialGrid::make(r_min, r_max, ds, c));
}

FrequencyGrid FrequencySpec::make() const { return FrequencyGrid::make(xi_min, xi_max, ds, c); }

namespace {

json grid_json(const GridSpec& g) { return {{"r_min", g.r_min}, {"r_max", g.r_max}, {"ds", g.ds}, {"c", g.c}}; }

json xi_json(const FrequencySpec& f) {
  return {{"xi_min", f.xi_min}, {"xi_max", f.xi_max}, {"ds", f.ds}, {"c", f.c}};
}

json tol_json(const Tolerances& t) {
  return {{"profile", t.profile}, {"ode", t.ode}, {"match_gap", t.match_gap}, {"quad", t.quad}};
}

json evolve_json(const EvolveSpec& e) {
  return {{"grid", grid_json(e.grid)}, {"xi", xi_json(e.xi)},         {"band", e.band},
          {"t0", e.t0},                {"t1", e.t1},                   {"samples", e.samples},
          {"width_decay", e.width_decay}, {"width_l2", e.width_l2}};
}

json config_json(const RunConfig& c) {
  return {{"grid", grid_json(c.grid)},
          {"xi", xi_json(c.xi)},
          {"evolve", evolve_json(c.evolve)},
          {"tolerances", tol_json(c.tol)},
          {"y0", c.y0},
          {"lambda_switch", c.lambda_switch},
          {"x_switch", c.x_switch},
          {"threads", c.threads},
          {"cache_dir", c.cache_dir},
          {"output_dir", c.output_dir}};
}

// Copies the fields present in `j` into `dst`, rejecting unknown keys.
template <class T>
void read(const json& j, const char* key, T& dst, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + key + ": " + e.what());
  }
}

void check_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) throw ConfigError("unknown config field " + where + item.key());
  }
}

void grid_from(const json& j, GridSpec& g, const std::string& where) {
  check_keys(j, {"r_min", "r_max", "ds", "c"}, where);
  read(j, "r_min", g.r_min, where);
  read(j, "r_max", g.r_max, where);
  read(j, "ds", g.ds, where);
  read(j, "c", g.c, where);
}

void xi_from(const json& j, FrequencySpec& f, const std::string& where) {
  check_keys(j, {"xi_min", "xi_max", "ds", "c"}, where);
  read(j, "xi_min", f.xi_min, where);
  read(j, "xi_max", f.xi_max, where);
  read(j, "ds", f.ds, where);
  read(j, "c", f.c, where);
}

RunConfig from_json_value(const json& j) {
  RunConfig c;
  check_keys(j, {"grid", "xi", "evolve", "tolerances", "y0", "lambda_switch", "x_switch", "threads", "cache_dir",
                 "output_dir"},
             "");
  if (j.contains("grid")) grid_from(j["grid"], c.grid, "grid.");
  if (j.contains("xi")) xi_from(j["xi"], c.xi, "xi.");
  if (j.contains("evolve")) {
    const json& e = j["evolve"];
    check_keys(e, {"grid", "xi", "band", "t0", "t1", "samples", "width_decay", "width_l2"}, "evolve.");
    if (e.contains("grid")) grid_from(e["grid"], c.evolve.grid, "evolve.grid.");
    if (e.contains("xi")) xi_from(e["xi"], c.evolve.xi, "evolve.xi.");
    read(e, "band", c.evolve.band, "evolve.");
    read(e, "t0", c.evolve.t0, "evolve.");
    read(e, "t1", c.evolve.t1, "evolve.");
    read(e, "samples", c.evolve.samples, "evolve.");
    read(e, "width_decay", c.evolve.width_decay, "evolve.");
    read(e, "width_l2", c.evolve.width_l2, "evolve.");
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    check_keys(t, {"profile", "ode", "match_gap", "quad"}, "tolerances.");
    read(t, "profile", c.tol.profile, "tolerances.");
    read(t, "ode", c.tol.ode, "tolerances.");
    read(t, "match_gap", c.tol.match_gap, "tolerances.");
    read(t, "quad", c.tol.quad, "tolerances.");
  }
  read(j, "y0", c.y0, "");
  read(j, "lambda_switch", c.lambda_switch, "");
  read(j, "x_switch", c.x_switch, "");
  read(j, "threads", c.threads, "");
  read(j, "cache_dir", c.cache_dir, "");
  read(j, "output_dir", c.output_dir, "");
  return c;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("invalid config: " + what);
}

void validate_grid(const GridSpec& g, const std::string& where) {
  require(g.r_min > 0.0 && std::isfinite(g.r_min), where + "r_min must be positive");
  require(g.r_max > g.r_min && std::isfinite(g.r_max), where + "r_max must exceed r_min");
  require(g.r_max >= 40.0, where + "r_max must be >= 40 for the profile solver");
  require(g.ds > 0.0 && g.ds <= 0.5, where + "ds must lie in (0, 0.5]");
  require(g.c > 0.0, where + "c must be positive");
}

void validate_xi(const FrequencySpec& f, const std::string& where) {
  require(f.xi_min > 0.0, where + "xi_min must be positive");
  require(f.xi_max > f.xi_min && std::isfinite(f.xi_max), where + "xi_max must exceed xi_min");
  require(f.ds > 0.0 && f.ds <= 0.5, where + "ds must lie in (0, 0.5]");
  require(f.c > 0.0, where + "c must be positive");
}

}  // namespace

void RunConfig::validate() const {
  validate_grid(grid, "grid.");
  validate_xi(xi, "xi.");
  validate_grid(evolve.grid, "evolve.grid.");
  validate_xi(evolve.xi, "evolve.xi.");
  require(evolve.band > 0.0 && evolve.band <= evolve.xi.xi_max, "evolve.band must lie in (0, evolve.xi.xi_max]");
  require(evolve.t0 > 0.0 && evolve.t1 > evolve.t0, "evolve times need 0 < t0 < t1");
  require(evolve.samples >= 5, "evolve.samples must be >= 5");
  require(evolve.width_decay > 0.0 && evolve.width_l2 > 0.0, "evolve widths must be positive");
  require(tol.profile > 0.0 && tol.ode > 0.0 && tol.quad > 0.0, "tolerances must be positive");
  require(tol.match_gap > 1.0, "tolerances.match_gap must exceed 1");
  require(y0 > 0.0, "y0 must be positive");
  require(lambda_switch > 0.0, "lambda_switch must be positive");
  // The Bessel routines are used with their compiled crossover throughout.
  require(x_switch == special::kDefaultXSwitch, "x_switch must equal the compiled crossover " +
                                                    std::to_string(special::kDefaultXSwitch));
  require(!cache_dir.empty(), "cache_dir must not be empty");
  require(!output_dir.empty(), "output_dir must not be empty");
}

EigenOptions RunConfig::eigen_options() const {
  EigenOptions o;
  o.y0 = y0;
  o.lambda_switch = lambda_switch;
  o.tol = tol.ode;
  o.rank_gap = tol.match_gap;
  return o;
}

std::string to_json(const RunConfig& cfg, int indent) { return config_json(cfg).dump(indent); }

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return from_json_value(j);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const RunConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file " + path);
  out << to_json(cfg) << '\n';
}

void set_field(RunConfig& cfg, const std::string& dotted, const std::string& value) {
  json j = config_json(cfg);
  std::string pointer = "/" + dotted;
  for (char& ch : pointer) ch = ch == '.' ? '/' : ch;
  const json::json_pointer ptr(pointer);
  if (!j.contains(ptr) || j[ptr].is_object()) throw ConfigError("unknown config field " + dotted);
  json v;
  try {
    v = json::parse(value);
  } catch (const json::parse_error&) {
    v = value;
  }
  j[ptr] = v;
  cfg = from_json_value(j);
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string cache_key(const RunConfig& cfg, Section section) {
  json s;
  const json eig = {{"y0", cfg.y0},
                    {"lambda_switch", cfg.lambda_switch},
                    {"ode", cfg.tol.ode},
                    {"match_gap", cfg.tol.match_gap},
                    {"x_switch", cfg.x_switch}};
  switch (section) {
    case Section::Profile:
      s = {{"section", "profile"}, {"grid", grid_json(cfg.grid)}, {"tol", cfg.tol.profile}};
      break;
    case Section::EvolveProfile:
      s = {{"section", "profile"}, {"grid", grid_json(cfg.evolve.grid)}, {"tol", cfg.tol.profile}};
      break;
    case Section::Table:
      s = {{"section", "table"},
           {"profile", cache_key(cfg, Section::Profile)},
           {"xi", xi_json(cfg.xi)},
           {"eigen", eig}};
      break;
    case Section::EvolveTable:
      s = {{"section", "table"},
           {"profile", cache_key(cfg, Section::EvolveProfile)},
           {"xi", xi_json(cfg.evolve.xi)},
           {"eigen", eig}};
      break;
  }
  return fnv1a_hex(s.dump() + "|" + kCodeVersion);
}

}  // namespace vspec
