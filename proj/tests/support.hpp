#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "vspec/eigen.hpp"
#include "vspec/profile.hpp"

namespace vspec::testing {

// Profile on the default grid, solved once per test binary.
inline const VortexProfile& shared_profile() {
  static const VortexProfile p = [] {
    auto g = std::make_shared<const RadialGrid>(RadialGrid::default_grid());
    return solve_profile(g, 1e-8);
  }();
  return p;
}

// Long-time setup: r_max = 200, coarser radial spacing.
inline const VortexProfile& evolve_profile() {
  static const VortexProfile p = [] {
    auto g = std::make_shared<const RadialGrid>(RadialGrid::make(1e-4, 200.0, 0.05));
    return solve_profile(g, 1e-8);
  }();
  return p;
}

// Table cached on disk between test binaries; written through a temporary
// file so that concurrent test processes never read a partial cache.
inline EigenTable cached_table(const std::string& name, const std::string& tag, const VortexProfile& p,
                               const FrequencyGrid& xg) {
  const std::filesystem::path dir = VSPEC_TEST_CACHE_DIR;
  std::filesystem::create_directories(dir);
  const auto path = (dir / (name + ".bin")).string();
  const std::string key = tag + ":nr=" + std::to_string(p.grid->size()) + ":nxi=" + std::to_string(xg.size()) +
                          ":slope=" + std::to_string(p.slope_a);
  EigenTable out;
  if (load_table(path, key, out)) return out;
  out = build_table(p, xg, p.grid);
  const auto tmp = path + ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(&out));
  save_table(out, tmp, key);
  std::filesystem::rename(tmp, path);
  return out;
}

// Frequencies up to 20 for the default profile.
inline const EigenTable& shared_table() {
  static const EigenTable t = cached_table("default_table", "rmax=60:xi=1e-3..20:ds=0.04", shared_profile(),
                                           FrequencyGrid::make(1e-3, 20.0, 0.04));
  return t;
}

// Frequencies up to 2.5, spacing fine enough to resolve t lambda for t <= 100.
inline const EigenTable& evolve_table() {
  static const EigenTable t = cached_table("evolve_table", "rmax=200:xi=1e-3..2.5:ds=0.03:c=0.05", evolve_profile(),
                                           FrequencyGrid::make(1e-3, 2.5, 0.03, 0.05));
  return t;
}

}  // namespace vspec::testing
