#include "vspec/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

namespace vspec {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  return os;
}

// Data rows of a CSV file: comment lines (#) and the header row are skipped.
std::vector<std::vector<double>> read_rows(const std::string& path, std::size_t columns) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw IoError(path + ":" + std::to_string(lineno) + ": not a number: " + cell);
      row.push_back(x);
    }
    if (row.size() != columns) {
      throw IoError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(columns) + " columns");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

void replace_file(const std::string& tmp, const std::string& path) {
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp + " to " + path + ": " + ec.message());
}

}  // namespace

void write_field_csv(std::ostream& os, const RadialField& field) {
  os << "# radial field (u, v); r in units of the healing length\n";
  os << "r,re_u,im_u,re_v,im_v\n";
  for (std::size_t i = 0; i < field.size(); ++i) {
    os << fmt(field.grid->r(i)) << ',' << fmt(field.u[i].real()) << ',' << fmt(field.u[i].imag()) << ','
       << fmt(field.v[i].real()) << ',' << fmt(field.v[i].imag()) << '\n';
  }
}

void write_field_csv(const std::string& path, const RadialField& field) {
  auto os = open_out(path);
  write_field_csv(os, field);
}

RadialField read_field_csv(const std::string& path, std::shared_ptr<const RadialGrid> grid) {
  const auto rows = read_rows(path, 5);
  if (rows.size() != grid->size()) {
    throw IoError(path + ": " + std::to_string(rows.size()) + " rows, grid has " + std::to_string(grid->size()) +
                  " nodes");
  }
  RadialField f(std::move(grid));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!close(rows[i][0], f.grid->r(i))) throw IoError(path + ": r column does not match the grid at row " +
                                                        std::to_string(i + 1));
    f.u[i] = {rows[i][1], rows[i][2]};
    f.v[i] = {rows[i][3], rows[i][4]};
  }
  return f;
}

void write_density_csv(std::ostream& os, const SpectralDensity& density) {
  os << "# spectral density zeta over signed frequencies; lambda = xi sqrt(xi^2 + 2)\n";
  os << "xi,re_zeta,im_zeta\n";
  const auto xs = density.xi_signed();
  const auto vs = density.values();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    os << fmt(xs[k]) << ',' << fmt(vs[k].real()) << ',' << fmt(vs[k].imag()) << '\n';
  }
}

void write_density_csv(const std::string& path, const SpectralDensity& density) {
  auto os = open_out(path);
  write_density_csv(os, density);
}

SpectralDensity read_density_csv(const std::string& path, const FrequencyGrid& grid) {
  const auto rows = read_rows(path, 3);
  const std::size_t n = grid.size();
  if (rows.size() != 2 * n) {
    throw IoError(path + ": " + std::to_string(rows.size()) + " rows, expected " + std::to_string(2 * n));
  }
  SpectralDensity z(grid);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& neg = rows[n - 1 - k];
    const auto& pos = rows[n + k];
    if (!close(neg[0], -grid.xi[k]) || !close(pos[0], grid.xi[k])) {
      throw IoError(path + ": xi column does not match the frequency grid at node " + std::to_string(k));
    }
    z.minus[k] = {neg[1], neg[2]};
    z.plus[k] = {pos[1], pos[2]};
  }
  return z;
}

void save_profile(const VortexProfile& p, const std::string& path, const std::string& key) {
  const auto& tab = p.fn->table();
  const std::string tmp = path + ".tmp";
  {
    auto os = open_out(tmp);
    os << "# vspec profile\n";
    os << "# format_version " << kProfileFormatVersion << '\n';
    os << "# key " << key << '\n';
    os << "# r_min " << fmt(p.grid->r_min()) << '\n';
    os << "# r_max " << fmt(p.grid->r_max()) << '\n';
    os << "# slope_a " << fmt(p.slope_a) << '\n';
    os << "# tol " << fmt(p.tol) << '\n';
    os << "# table_step " << fmt(tab.step()) << '\n';
    os << "# tail_amplitude " << fmt(p.fn->tail_amplitude()) << '\n';
    os << "# tail_coefficients";
    for (double b : p.fn->tail_coefficients()) os << ' ' << fmt(b);
    os << '\n';
    os << "node,rho,drho,d2rho\n";
    for (std::size_t i = 0; i < tab.values().size(); ++i) {
      os << fmt(tab.x_min() + tab.step() * static_cast<double>(i)) << ',' << fmt(tab.values()[i]) << ','
         << fmt(tab.first()[i]) << ',' << fmt(tab.second()[i]) << '\n';
    }
    if (!os) throw IoError("write failed for " + tmp);
  }
  replace_file(tmp, path);
}

bool load_profile(const std::string& path, const std::string& key, std::shared_ptr<const RadialGrid> grid,
                  VortexProfile& out) {
  std::ifstream is(path);
  if (!is) return false;
  int version = -1;
  std::string file_key;
  double slope = 0.0, tol = 0.0, step = 0.0, amp = 0.0;
  std::vector<double> tail;
  std::string line;
  while (is.peek() == '#' && std::getline(is, line)) {
    std::stringstream ss(line.substr(1));
    std::string name;
    ss >> name;
    if (name == "format_version") ss >> version;
    if (name == "key") ss >> file_key;
    if (name == "slope_a") ss >> slope;
    if (name == "tol") ss >> tol;
    if (name == "table_step") ss >> step;
    if (name == "tail_amplitude") ss >> amp;
    if (name == "tail_coefficients") {
      std::string tok;
      while (ss >> tok) tail.push_back(std::strtod(tok.c_str(), nullptr));
    }
  }
  if (version != kProfileFormatVersion || file_key != key) return false;
  is.close();
  const auto rows = read_rows(path, 4);
  if (rows.size() < 2 || !(step > 0.0)) throw IoError(path + ": malformed profile table");
  std::vector<double> f, df, d2f;
  for (const auto& r : rows) {
    f.push_back(r[1]);
    df.push_back(r[2]);
    d2f.push_back(r[3]);
  }
  VortexProfile p;
  p.slope_a = slope;
  p.tol = tol;
  p.fn = std::make_shared<const ProfileFunction>(slope, QuinticHermite(rows.front()[0], step, f, df, d2f), tail, amp);
  out = resample(p, std::move(grid));
  return true;
}

namespace {

std::string cache_file(const RunConfig& cfg, const std::string& stem) {
  std::filesystem::create_directories(cfg.cache_dir);
  return (std::filesystem::path(cfg.cache_dir) / stem).string();
}

}  // namespace

Cached<VortexProfile> obtain_profile(const RunConfig& cfg, bool long_time) {
  Cached<VortexProfile> c;
  c.key = cache_key(cfg, long_time ? Section::EvolveProfile : Section::Profile);
  c.path = cache_file(cfg, "profile-" + c.key + ".csv");
  const auto grid = (long_time ? cfg.evolve.grid : cfg.grid).make();
  c.hit = load_profile(c.path, c.key, grid, c.value);
  if (!c.hit) {
    c.value = solve_profile(grid, cfg.tol.profile);
    save_profile(c.value, c.path, c.key);
  }
  return c;
}

Cached<EigenTable> obtain_table(const RunConfig& cfg, const VortexProfile& profile, bool long_time,
                                bool two_radius) {
  Cached<EigenTable> c;
  c.key = cache_key(cfg, long_time ? Section::EvolveTable : Section::Table);
  const std::string with_tr = cache_file(cfg, "table-" + c.key + "-tr.bin");
  const std::string without = cache_file(cfg, "table-" + c.key + ".bin");
  c.path = with_tr;
  if (load_table(with_tr, c.key + ":tr", c.value)) {
    c.hit = true;
    return c;
  }
  if (!two_radius) {
    c.path = without;
    if (load_table(without, c.key, c.value)) {
      c.hit = true;
      return c;
    }
  }
  TableOptions opt;
  opt.eigen = cfg.eigen_options();
  opt.threads = cfg.threads;
  opt.two_radius = two_radius;
  c.value = build_table(profile, (long_time ? cfg.evolve.xi : cfg.xi).make(), profile.grid, opt);
  save_table(c.value, c.path, two_radius ? c.key + ":tr" : c.key);
  return c;
}

}  // namespace vspec
