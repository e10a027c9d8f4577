#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "vspec/config.hpp"
#include "vspec/dft.hpp"
#include "vspec/eigen.hpp"
#include "vspec/field.hpp"
#include "vspec/profile.hpp"

namespace vspec {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Field CSV: comment lines, then columns r,re_u,im_u,re_v,im_v (%.17g).
void write_field_csv(std::ostream& os, const RadialField& field);
void write_field_csv(const std::string& path, const RadialField& field);
// The r column must reproduce the nodes of `grid` to 1e-12 relative.
RadialField read_field_csv(const std::string& path, std::shared_ptr<const RadialGrid> grid);

// Density CSV: columns xi,re_zeta,im_zeta over the signed nodes in ascending order.
void write_density_csv(std::ostream& os, const SpectralDensity& density);
void write_density_csv(const std::string& path, const SpectralDensity& density);
SpectralDensity read_density_csv(const std::string& path, const FrequencyGrid& grid);

// Profile cache: text header (format_version, key, r_min, r_max, slope_a, tol,
// table step, tail data), then columns node,rho,drho,d2rho of the Hermite table.
inline constexpr int kProfileFormatVersion = 1;
void save_profile(const VortexProfile& p, const std::string& path, const std::string& key);
// Returns false when the file is missing or the key or version differs. The
// profile is rebuilt from the table and sampled on `grid`.
bool load_profile(const std::string& path, const std::string& key, std::shared_ptr<const RadialGrid> grid,
                  VortexProfile& out);

template <class T>
struct Cached {
  T value;
  bool hit = false;
  std::string path;
  std::string key;
};

// Profile and eigen-table for the default setup (long_time = false) or the
// long-time setup of cfg.evolve, loaded from cfg.cache_dir when the key matches
// and computed and stored otherwise.
Cached<VortexProfile> obtain_profile(const RunConfig& cfg, bool long_time = false);
// A table built with the two-radius column also serves requests without it.
Cached<EigenTable> obtain_table(const RunConfig& cfg, const VortexProfile& profile, bool long_time = false,
                                bool two_radius = false);

}  // namespace vspec
