#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "vspec/eigen.hpp"
#include "vspec/grid.hpp"

namespace vspec {

inline constexpr const char* kCodeVersion = "vspec 1.0.0";

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  double r_min = 1e-4, r_max = 60.0, ds = 0.02, c = 1.0;

  [[nodiscard]] std::shared_ptr<const RadialGrid> make() const;
};

struct FrequencySpec {
  double xi_min = 1e-3, xi_max = 20.0, ds = 0.04, c = 0.5;

  [[nodiscard]] FrequencyGrid make() const;
};

struct Tolerances {
  double profile = 1e-8;
  double ode = 1e-11;
  double match_gap = 1e3;
  double quad = 1e-12;
};

// Long-time runs: r_max = 200 keeps the cone r = sqrt2 t inside the grid up to t = 100.
struct EvolveSpec {
  GridSpec grid{1e-4, 200.0, 0.05, 1.0};
  FrequencySpec xi{1e-3, 2.5, 0.03, 0.05};
  double band = 2.5;  // initial densities are cut off above this frequency
  double t0 = 10.0, t1 = 100.0;
  int samples = 9;
  double width_decay = 1.0;  // Gaussian width of the sup-norm decay data
  double width_l2 = 3.0;     // Gaussian width of the L2 growth data
};

struct RunConfig {
  GridSpec grid;
  FrequencySpec xi;
  EvolveSpec evolve;
  Tolerances tol;
  double y0 = 0.5;
  double lambda_switch = 0.5;
  double x_switch = 15.0;
  unsigned threads = 0;
  std::string cache_dir = "vspec_cache";
  std::string output_dir = ".";

  // Throws ConfigError naming the offending field.
  void validate() const;
  [[nodiscard]] EigenOptions eigen_options() const;
};

// Canonical JSON text (sorted keys, round-trip doubles).
std::string to_json(const RunConfig& cfg, int indent = 2);
// Missing fields keep their defaults; unknown fields are rejected.
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);
void save_config(const RunConfig& cfg, const std::string& path);

// Overrides one field by dotted path, e.g. set_field(cfg, "evolve.grid.r_max", "150").
// The value is parsed as JSON, falling back to a plain string.
void set_field(RunConfig& cfg, const std::string& dotted, const std::string& value);

// Sections used for cache keys.
enum class Section { Profile, Table, EvolveProfile, EvolveTable };

// FNV-1a of the canonical JSON of the section plus kCodeVersion, as 16 hex digits.
std::string cache_key(const RunConfig& cfg, Section section);
std::string fnv1a_hex(const std::string& data);

}  // namespace vspec
