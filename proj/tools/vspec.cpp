// vspec: command line front end. Results go to stdout as JSON, progress to
// stderr. Exit status 0 on success, 1 when `verify` finds a failing criterion,
// 2 on errors (with an error JSON on stdout).

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vspec/acceptance.hpp"
#include "vspec/config.hpp"
#include "vspec/dft.hpp"
#include "vspec/evolve.hpp"
#include "vspec/flat.hpp"
#include "vspec/io.hpp"

namespace {

using nlohmann::json;
using namespace vspec;

class CommandError : public std::runtime_error {
 public:
  CommandError(std::string type, const std::string& what) : std::runtime_error(what), type_(std::move(type)) {}
  [[nodiscard]] const std::string& type() const { return type_; }

 private:
  std::string type_;
};

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

int error_exit(const std::string& type, const std::string& message) {
  emit({{"status", "error"}, {"error", {{"type", type}, {"message", message}}}});
  return 2;
}

std::string in_output_dir(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output_dir);
  return (std::filesystem::path(cfg.output_dir) / name).string();
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// Table from an explicit cache file, or the configured setup.
EigenTable resolve_table(const RunConfig& cfg, const std::string& path, bool long_time, std::string& source) {
  EigenTable t;
  if (!path.empty()) {
    const auto key = table_key(path);
    if (!key || !load_table(path, *key, t)) throw CommandError("table", "not a readable eigen-table cache: " + path);
    source = path;
    return t;
  }
  const auto p = obtain_profile(cfg, long_time);
  auto c = obtain_table(cfg, p.value, long_time);
  source = c.path;
  return std::move(c.value);
}

// Profile sampled on `grid`: the cached one when the grid is a configured grid.
VortexProfile profile_for(const RunConfig& cfg, const std::shared_ptr<const RadialGrid>& grid) {
  for (bool long_time : {false, true}) {
    if ((long_time ? cfg.evolve.grid : cfg.grid).make()->same_as(*grid)) {
      return resample(obtain_profile(cfg, long_time).value, grid);
    }
  }
  return solve_profile(grid, cfg.tol.profile);
}

std::vector<double> time_samples(double t0, double t1, int steps) {
  if (steps < 1 || !(t1 >= t0) || t0 < 0.0) throw CommandError("arguments", "need 0 <= t0 <= t1 and steps >= 1");
  std::vector<double> t;
  for (int j = 0; j <= steps; ++j) {
    const double s = j / static_cast<double>(steps);
    t.push_back(t0 > 0.0 ? t0 * std::pow(t1 / t0, s) : t0 + (t1 - t0) * s);
  }
  return t;
}

struct EvolveArgs {
  double t0 = 10.0, t1 = 100.0;
  int steps = 8;
  std::string in, report, fields_dir, table;
  double band = -1.0;  // < 0: config value; 0: no cutoff
};

void add_evolve_flags(CLI::App* sub, EvolveArgs& a) {
  sub->add_option("--t0", a.t0, "first time (times are log-spaced when t0 > 0)");
  sub->add_option("--t1", a.t1, "last time");
  sub->add_option("--steps", a.steps, "number of intervals between t0 and t1");
  sub->add_option("--in", a.in, "initial field CSV (r,re_u,im_u,re_v,im_v)")->required();
  sub->add_option("--report", a.report, "report JSON path (default: <output_dir>/evolve_report.json)");
  sub->add_option("--fields-dir", a.fields_dir, "write the evolved field at each time as CSV");
  sub->add_option("--band", a.band, "frequency cutoff of the initial density (0: none)");
}

json evolution_report(const char* schema, const EvolveArgs& a, const std::vector<EvolutionResult>& runs,
                      const std::vector<double>& times) {
  json j = {{"schema", schema}, {"input", a.in}, {"times", times}};
  std::vector<double> sup, l2, arg, phase;
  for (const auto& r : runs) {
    sup.push_back(r.sup_norm);
    l2.push_back(r.l2_norm);
    arg.push_back(r.argmax_r);
    phase.push_back(r.phase_step);
  }
  j["sup_norm"] = sup;
  j["l2_norm"] = l2;
  j["argmax_r"] = arg;
  j["phase_step"] = phase;
  try {
    const auto f = fit_decay(times, sup);
    j["sup_norm_fit"] = {{"exponent", f.exponent}, {"r2", f.r2}};
  } catch (const std::invalid_argument&) {
    j["sup_norm_fit"] = nullptr;
  }
  return j;
}

void write_fields(const std::string& dir, const std::vector<EvolutionResult>& runs) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  for (std::size_t j = 0; j < runs.size(); ++j) {
    write_field_csv((std::filesystem::path(dir) / ("field_" + std::to_string(j) + ".csv")).string(), runs[j].field);
  }
}

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw CommandError("io", "cannot write " + path);
  os << j.dump(2) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral transform and linear evolution around the degree-one vortex"};
  app.require_subcommand(1);

  std::string config_path, cache_dir, output_dir;
  std::vector<std::string> sets;
  int threads = -1;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--set", sets, "override a config field, e.g. --set grid.r_max=80");
  app.add_option("--cache-dir", cache_dir, "cache directory");
  app.add_option("--output-dir", output_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (0: all cores)");

  bool long_time = false, two_radius = false;
  double xi = 0.0;
  std::string out, zero_out, profile_out, table_path, in;

  auto* profile = app.add_subcommand("profile", "solve or load the vortex profile");
  profile->add_flag("--long-time", long_time, "use the long-time grid");
  profile->add_option("--out", profile_out, "also write the profile file here");

  auto* eigen = app.add_subcommand("eigen", "one generalized eigenfunction as CSV");
  eigen->add_option("--xi", xi, "frequency (nonzero)")->required();
  eigen->add_option("--out", out, "CSV path (default: <output_dir>/eigen.csv)");
  eigen->add_flag("--long-time", long_time, "use the long-time grid");

  auto* table = app.add_subcommand("table", "build or load the eigenfunction table");
  table->add_flag("--long-time", long_time, "use the long-time grids");
  table->add_flag("--two-radius", two_radius, "record the two-radius consistency per node");
  table->add_option("--zero-out", zero_out, "write the stored xi -> 0 limit as field CSV");

  auto* dft = app.add_subcommand("dft", "distorted Fourier transform of CSV data");
  dft->require_subcommand(1);
  auto* fwd = dft->add_subcommand("forward", "field CSV -> density CSV");
  auto* inv = dft->add_subcommand("inverse", "density CSV -> field CSV");
  for (auto* s : {fwd, inv}) {
    s->add_option("--in", in, "input CSV")->required();
    s->add_option("--out", out, "output CSV")->required();
    s->add_option("--table", table_path, "eigen-table cache file (default: configured table)");
    s->add_flag("--long-time", long_time, "use the long-time table when --table is absent");
  }

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "e^{itH} applied to CSV data");
  add_evolve_flags(evolve, ev);
  evolve->add_option("--table", ev.table, "eigen-table cache file (default: configured long-time table)");

  auto* flat = app.add_subcommand("flat", "closed-form linearization around the constant state");
  flat->require_subcommand(1);
  EvolveArgs fev;
  auto* flat_evolve = flat->add_subcommand("evolve", "e^{itG} applied to CSV data on the long-time grid");
  add_evolve_flags(flat_evolve, fev);
  std::string flat_report;
  auto* flat_check = flat->add_subcommand("check", "flat transform, decay and far-field checks");
  flat_check->add_option("--report", flat_report, "report JSON path (default: <output_dir>/flat_check.json)");

  std::vector<int> only;
  std::string verify_report;
  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--only", only, "criterion ids to run")->delimiter(',');
  verify->add_option("--report", verify_report, "report JSON path (default: <output_dir>/verify_report.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit("arguments", e.what());
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects field=value, got " + s);
      set_field(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
    cfg.validate();

    if (*profile) {
      const auto c = obtain_profile(cfg, long_time);
      if (!profile_out.empty()) save_profile(c.value, profile_out, c.key);
      const auto res = profile_residual(c.value);
      emit({{"command", "profile"},
            {"cache_hit", c.hit},
            {"path", c.path},
            {"key", c.key},
            {"slope_a", c.value.slope_a},
            {"rho_at_10", c.value.at(10.0).f},
            {"ode_residual", *std::max_element(res.begin(), res.end())},
            {"nodes", c.value.grid->size()}});
    } else if (*eigen) {
      if (xi == 0.0) {
        return error_exit("excluded_node",
                          "xi = 0 is not an eigen node: psi vanishes there. Its limit sqrt(pi/4) (rho, -rho) is "
                          "stored with every table; write it with `vspec table --zero-out <csv>`.");
      }
      const auto p = obtain_profile(cfg, long_time).value;
      const auto e = eigenfunction(SpectralPoint::from_xi(xi), p, p.grid, cfg.eigen_options());
      const auto path = out.empty() ? in_output_dir(cfg, "eigen.csv") : out;
      write_field_csv(path, e.field());
      emit({{"command", "eigen"},
            {"xi", xi},
            {"lambda", e.sp.lam},
            {"gamma1", e.gamma1},
            {"gamma2", e.gamma2},
            {"gap", e.gap},
            {"residual", e.residual},
            {"r_match", e.r_match},
            {"csv", path}});
    } else if (*table) {
      const auto p = obtain_profile(cfg, long_time);
      const auto c = obtain_table(cfg, p.value, long_time, two_radius);
      const auto& t = c.value;
      double gap = INFINITY, drift = 0.0;
      for (const auto& e : t.entries()) {
        gap = std::min(gap, e.gap);
        drift = std::max(drift, e.wronskian_drift);
      }
      json j = {{"command", "table"},
                {"cache_hit", c.hit},
                {"path", c.path},
                {"key", c.key},
                {"nodes", t.size()},
                {"xi_min", t.xi_grid().xi.front()},
                {"xi_max", t.xi_grid().xi.back()},
                {"min_gap", gap},
                {"max_wronskian_drift", drift}};
      if (!zero_out.empty()) {
        RadialField z(t.grid());
        for (std::size_t i = 0; i < z.size(); ++i) {
          z.u[i] = t.zero_u()[i];
          z.v[i] = t.zero_v()[i];
        }
        write_field_csv(zero_out, z);
        j["zero_limit_csv"] = zero_out;
      }
      emit(j);
    } else if (*dft) {
      std::string source;
      const auto t = resolve_table(cfg, table_path, long_time, source);
      if (*fwd) {
        write_density_csv(out, forward(read_field_csv(in, t.grid()), t, cfg.threads));
      } else {
        write_field_csv(out, inverse(read_density_csv(in, t.xi_grid()), t, cfg.threads));
      }
      emit({{"command", *fwd ? "dft forward" : "dft inverse"}, {"table", source}, {"in", in}, {"out", out}});
    } else if (*evolve) {
      std::string source;
      const auto t = resolve_table(cfg, ev.table, true, source);
      const auto field = read_field_csv(ev.in, t.grid());
      const auto p = profile_for(cfg, t.grid());
      auto z = forward(field, t, cfg.threads);
      const double band = ev.band < 0.0 ? cfg.evolve.band : ev.band;
      if (band > 0.0) z = band_limit(z, band);
      PropagateOptions opt;
      opt.threads = cfg.threads;
      const auto times = time_samples(ev.t0, ev.t1, ev.steps);
      std::vector<EvolutionResult> runs;
      for (double time : times) runs.push_back(propagate_density(z, time, t, opt));
      json j = evolution_report("vspec-evolve/1", ev, runs, times);
      const auto [rr, x1] = orthogonality(field, p);
      j["orthogonality"] = {{"rho_rho", complex_json(rr)}, {"xi1_pairing", complex_json(x1)}};
      j["table"] = source;
      j["band"] = band;
      const auto path = ev.report.empty() ? in_output_dir(cfg, "evolve_report.json") : ev.report;
      write_json(path, j);
      write_fields(ev.fields_dir, runs);
      emit({{"command", "evolve"}, {"report", path}, {"sup_norm_fit", j["sup_norm_fit"]}});
    } else if (*flat_evolve) {
      const FlatBasis b(cfg.evolve.xi.make(), cfg.evolve.grid.make(), cfg.threads);
      const auto field = read_field_csv(fev.in, b.grid());
      auto z = b.forward(field);
      const double band = fev.band < 0.0 ? cfg.evolve.band : fev.band;
      if (band > 0.0) z = band_limit(z, band);
      PropagateOptions opt;
      opt.threads = cfg.threads;
      const auto times = time_samples(fev.t0, fev.t1, fev.steps);
      std::vector<EvolutionResult> runs;
      for (double time : times) runs.push_back(b.propagate_density(z, time, opt));
      json j = evolution_report("vspec-flat-evolve/1", fev, runs, times);
      j["orthogonality"] = {{"flat_pairing", complex_json(flat_pairing(field))}};
      j["band"] = band;
      const auto path = fev.report.empty() ? in_output_dir(cfg, "flat_evolve_report.json") : fev.report;
      write_json(path, j);
      write_fields(fev.fields_dir, runs);
      emit({{"command", "flat evolve"}, {"report", path}, {"sup_norm_fit", j["sup_norm_fit"]}});
    } else if (*flat_check) {
      const auto report = run_acceptance(cfg, &std::cerr, {9});
      const auto path = flat_report.empty() ? in_output_dir(cfg, "flat_check.json") : flat_report;
      write_json(path, json::parse(report.to_json()));
      emit({{"command", "flat check"}, {"report", path}, {"pass", report.pass()}});
    } else if (*verify) {
      const auto report = run_acceptance(cfg, &std::cerr, only);
      const auto path = verify_report.empty() ? in_output_dir(cfg, "verify_report.json") : verify_report;
      write_json(path, json::parse(report.to_json()));
      for (const auto& c : report.criteria) std::cout << summary_line(c) << '\n';
      std::cout << (report.pass() ? "verify: all criteria passed" : "verify: some criteria failed") << " (report "
                << path << ")\n";
      return report.pass() ? 0 : 1;
    }
  } catch (const CommandError& e) {
    return error_exit(e.type(), e.what());
  } catch (const ConfigError& e) {
    return error_exit("config", e.what());
  } catch (const IoError& e) {
    return error_exit("io", e.what());
  } catch (const std::exception& e) {
    return error_exit("runtime", e.what());
  }
  return 0;
}
