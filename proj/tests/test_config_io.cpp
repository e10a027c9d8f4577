#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "vspec/config.hpp"
#include "vspec/io.hpp"

using namespace vspec;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::path(VSPEC_TEST_CACHE_DIR) / "config_io" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

// Valid configs whose doubles use all 52 mantissa bits.
RunConfig random_config(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto jitter = [&](double x) { return x * (1.0 + 0.25 * u(rng)); };
  RunConfig c;
  c.grid = {jitter(1e-4), jitter(60.0), jitter(0.02), jitter(1.0)};
  c.xi = {jitter(1e-3), jitter(20.0), jitter(0.04), jitter(0.5)};
  c.evolve.grid = {jitter(1e-4), jitter(200.0), jitter(0.05), jitter(1.0)};
  c.evolve.xi = {jitter(1e-3), jitter(3.0), jitter(0.03), jitter(0.05)};
  c.evolve.band = jitter(2.0);
  c.evolve.t0 = jitter(10.0);
  c.evolve.t1 = jitter(100.0);
  c.evolve.samples = 5 + static_cast<int>(rng() % 10);
  c.evolve.width_decay = jitter(1.0);
  c.evolve.width_l2 = jitter(3.0);
  c.tol = {jitter(1e-8), jitter(1e-11), jitter(1e3), jitter(1e-12)};
  c.y0 = jitter(0.5);
  c.lambda_switch = jitter(0.5);
  c.threads = static_cast<unsigned>(rng() % 8);
  c.cache_dir = "cache " + std::to_string(rng() % 1000);
  c.output_dir = "out/\"quoted\"";
  return c;
}

void expect_identical(const RunConfig& a, const RunConfig& b) {
  const double da[] = {a.grid.r_min, a.grid.r_max, a.grid.ds, a.grid.c, a.xi.xi_min, a.xi.xi_max, a.xi.ds, a.xi.c,
                       a.evolve.grid.r_min, a.evolve.grid.r_max, a.evolve.grid.ds, a.evolve.grid.c,
                       a.evolve.xi.xi_min, a.evolve.xi.xi_max, a.evolve.xi.ds, a.evolve.xi.c, a.evolve.band,
                       a.evolve.t0, a.evolve.t1, a.evolve.width_decay, a.evolve.width_l2, a.tol.profile, a.tol.ode,
                       a.tol.match_gap, a.tol.quad, a.y0, a.lambda_switch, a.x_switch};
  const double db[] = {b.grid.r_min, b.grid.r_max, b.grid.ds, b.grid.c, b.xi.xi_min, b.xi.xi_max, b.xi.ds, b.xi.c,
                       b.evolve.grid.r_min, b.evolve.grid.r_max, b.evolve.grid.ds, b.evolve.grid.c,
                       b.evolve.xi.xi_min, b.evolve.xi.xi_max, b.evolve.xi.ds, b.evolve.xi.c, b.evolve.band,
                       b.evolve.t0, b.evolve.t1, b.evolve.width_decay, b.evolve.width_l2, b.tol.profile, b.tol.ode,
                       b.tol.match_gap, b.tol.quad, b.y0, b.lambda_switch, b.x_switch};
  for (std::size_t i = 0; i < std::size(da); ++i) EXPECT_TRUE(same_bits(da[i], db[i])) << i;
  EXPECT_EQ(a.evolve.samples, b.evolve.samples);
  EXPECT_EQ(a.threads, b.threads);
  EXPECT_EQ(a.cache_dir, b.cache_dir);
  EXPECT_EQ(a.output_dir, b.output_dir);
}

}  // namespace

TEST(Config, DefaultsAreValid) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.eigen_options().tol, 1e-11);
  EXPECT_EQ(c.eigen_options().rank_gap, 1e3);
}

TEST(Config, JsonRoundTripIsLossless) {
  std::mt19937_64 rng(20261016);
  for (int trial = 0; trial < 200; ++trial) {
    const RunConfig c = random_config(rng);
    ASSERT_NO_THROW(c.validate());
    const std::string text = to_json(c);
    const RunConfig back = config_from_json(text);
    expect_identical(c, back);
    EXPECT_EQ(to_json(back), text);
  }
}

TEST(Config, FileRoundTripAndPartialFiles) {
  const auto dir = scratch("files");
  RunConfig c;
  c.y0 = 0.375;
  save_config(c, (dir / "a.json").string());
  expect_identical(load_config((dir / "a.json").string()), c);
  std::ofstream((dir / "b.json").string()) << R"({"grid": {"r_max": 80}})";
  const auto b = load_config((dir / "b.json").string());
  EXPECT_EQ(b.grid.r_max, 80.0);
  EXPECT_EQ(b.grid.r_min, RunConfig{}.grid.r_min);
  EXPECT_THROW(load_config((dir / "missing.json").string()), ConfigError);
}

TEST(Config, RejectsUnknownAndInvalidFields) {
  EXPECT_THROW(config_from_json(R"({"grid": {"rmax": 80}})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"bogus": 1})"), ConfigError);
  EXPECT_THROW(config_from_json(R"({"y0": "half"})"), ConfigError);
  EXPECT_THROW(config_from_json("{"), ConfigError);
  RunConfig c;
  c.grid.r_min = -1.0;
  try {
    c.validate();
    FAIL() << "negative r_min accepted";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("grid.r_min"), std::string::npos);
  }
  c = RunConfig{};
  c.tol.ode = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = RunConfig{};
  c.evolve.t1 = c.evolve.t0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = RunConfig{};
  c.x_switch = 20.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, SetFieldOverrides) {
  RunConfig c;
  set_field(c, "evolve.grid.r_max", "150");
  EXPECT_EQ(c.evolve.grid.r_max, 150.0);
  set_field(c, "cache_dir", "some/dir");
  EXPECT_EQ(c.cache_dir, "some/dir");
  set_field(c, "threads", "3");
  EXPECT_EQ(c.threads, 3u);
  EXPECT_THROW(set_field(c, "grid.nope", "1"), ConfigError);
  EXPECT_THROW(set_field(c, "grid", "1"), ConfigError);
}

TEST(CacheKey, FnvReferenceVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}

TEST(CacheKey, DeterministicAndSectionScoped) {
  const RunConfig a;
  RunConfig b;
  EXPECT_EQ(cache_key(a, Section::Table), cache_key(b, Section::Table));
  b.y0 = 0.4;  // eigen option: tables change, profiles do not
  EXPECT_EQ(cache_key(a, Section::Profile), cache_key(b, Section::Profile));
  EXPECT_NE(cache_key(a, Section::Table), cache_key(b, Section::Table));
  b = a;
  b.grid.r_max = 70.0;  // default grid: default sections only
  EXPECT_NE(cache_key(a, Section::Profile), cache_key(b, Section::Profile));
  EXPECT_NE(cache_key(a, Section::Table), cache_key(b, Section::Table));
  EXPECT_EQ(cache_key(a, Section::EvolveProfile), cache_key(b, Section::EvolveProfile));
  EXPECT_EQ(cache_key(a, Section::EvolveTable), cache_key(b, Section::EvolveTable));
  b = a;
  b.output_dir = "elsewhere";
  b.threads = 7;
  for (auto s : {Section::Profile, Section::Table, Section::EvolveProfile, Section::EvolveTable}) {
    EXPECT_EQ(cache_key(a, s), cache_key(b, s));
  }
}

TEST(Csv, FieldRoundTripIsBitExact) {
  const auto dir = scratch("csv");
  const auto g = std::make_shared<const RadialGrid>(RadialGrid::make(1e-3, 10.0, 0.1));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  RadialField f(g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.u[i] = {n(rng) * 1e-300, n(rng)};
    f.v[i] = {n(rng) * 1e200, -n(rng)};
  }
  const auto path = (dir / "f.csv").string();
  write_field_csv(path, f);
  const auto back = read_field_csv(path, g);
  for (std::size_t i = 0; i < f.size(); ++i) {
    ASSERT_TRUE(same_bits(back.u[i].real(), f.u[i].real()) && same_bits(back.u[i].imag(), f.u[i].imag()));
    ASSERT_TRUE(same_bits(back.v[i].real(), f.v[i].real()) && same_bits(back.v[i].imag(), f.v[i].imag()));
  }
  write_field_csv((dir / "g.csv").string(), back);
  EXPECT_EQ(slurp(path), slurp((dir / "g.csv").string()));
  EXPECT_NE(slurp(path).find("r,re_u,im_u,re_v,im_v"), std::string::npos);

  const auto other = std::make_shared<const RadialGrid>(RadialGrid::make(1e-3, 12.0, 0.1));
  EXPECT_THROW(read_field_csv(path, other), IoError);
  EXPECT_THROW(read_field_csv((dir / "missing.csv").string(), g), IoError);
}

TEST(Csv, DensityRoundTrip) {
  const auto dir = scratch("density");
  const auto xg = FrequencyGrid::make(1e-2, 3.0, 0.2);
  SpectralDensity z(xg);
  for (std::size_t k = 0; k < z.size(); ++k) {
    z.plus[k] = {std::sin(1.0 + k), 1.0 / (k + 3.0)};
    z.minus[k] = {std::cos(2.0 * k), -0.1 * k};
  }
  const auto path = (dir / "z.csv").string();
  write_density_csv(path, z);
  const auto back = read_density_csv(path, xg);
  for (std::size_t k = 0; k < z.size(); ++k) {
    EXPECT_EQ(back.plus[k], z.plus[k]);
    EXPECT_EQ(back.minus[k], z.minus[k]);
  }
  // ascending signed frequencies
  std::ifstream is(path);
  std::string line;
  double prev = -INFINITY;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'x') continue;
    const double x = std::stod(line.substr(0, line.find(',')));
    EXPECT_GT(x, prev);
    prev = x;
  }
  EXPECT_THROW(read_density_csv(path, FrequencyGrid::make(1e-2, 3.0, 0.1)), IoError);
}

TEST(ProfileFile, RoundTripReproducesProfile) {
  const auto dir = scratch("profile");
  const auto& p = vspec::testing::shared_profile();
  const auto path = (dir / "p.csv").string();
  save_profile(p, path, "k1");
  VortexProfile q;
  EXPECT_FALSE(load_profile(path, "k2", p.grid, q));
  ASSERT_TRUE(load_profile(path, "k1", p.grid, q));
  EXPECT_EQ(q.slope_a, p.slope_a);
  EXPECT_EQ(q.tol, p.tol);
  for (std::size_t i = 0; i < p.rho.size(); ++i) {
    ASSERT_EQ(q.rho[i], p.rho[i]);
    ASSERT_EQ(q.drho[i], p.drho[i]);
  }
  for (double r : {0.0, 0.5, 31.9, 45.0, 300.0}) EXPECT_EQ(q.at(r).f, p.at(r).f) << r;
  const auto text = slurp(path);
  for (const char* h : {"format_version 1", "r_min", "r_max", "slope_a", "tol", "node,rho,drho"}) {
    EXPECT_NE(text.find(h), std::string::npos) << h;
  }
}

TEST(Cache, SecondRunHitsWithoutRecomputation) {
  RunConfig cfg;
  cfg.cache_dir = scratch("cache").string();
  cfg.xi = {0.5, 1.5, 0.05, 0.5};
  const auto p1 = obtain_profile(cfg);
  EXPECT_FALSE(p1.hit);
  const auto t1 = obtain_table(cfg, p1.value);
  EXPECT_FALSE(t1.hit);
  const auto stamp = std::filesystem::last_write_time(t1.path);

  const auto p2 = obtain_profile(cfg);
  EXPECT_TRUE(p2.hit);
  EXPECT_EQ(p2.key, p1.key);
  EXPECT_EQ(p2.value.rho, p1.value.rho);
  const auto t2 = obtain_table(cfg, p2.value);
  EXPECT_TRUE(t2.hit);
  EXPECT_EQ(t2.path, t1.path);
  EXPECT_EQ(std::filesystem::last_write_time(t2.path), stamp);
  ASSERT_EQ(t2.value.size(), t1.value.size());
  for (std::size_t k = 0; k < t1.value.size(); ++k) {
    EXPECT_EQ(t2.value.entry(k).u, t1.value.entry(k).u);
    EXPECT_EQ(t2.value.entry(k).wronskian_drift, t1.value.entry(k).wronskian_drift);
  }
  // a changed eigen option misses
  cfg.y0 = 0.45;
  EXPECT_FALSE(obtain_table(cfg, p2.value).hit);
}
