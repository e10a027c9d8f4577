#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vspec/field.hpp"
#include "vspec/grid.hpp"
#include "vspec/odesys.hpp"
#include "vspec/profile.hpp"
#include "vspec/spectral.hpp"

namespace vspec {

class RankDeficiency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenOptions {
  double y0 = 0.5;             // matching radius scale, r_m = max(2, 4 y0 / xi)
  double lambda_switch = 0.5;  // integration variables and reporting basis
  double tol = 1e-11;          // ODE tolerance (absolute and relative)
  double far_radius = 300.0;   // oscillating seeds start at far_radius / min(1, xi)
  double jost_offset = 20.0;   // Jost frames start at r_max + jost_offset / kappa
  double rank_gap = 1e3;
  double r_match = 0.0;  // 0 selects the default radius
};

double default_match_radius(double xi, double r_max, double y0 = 0.5);

// Smooth cutoff: 1 on [0, 1], 0 on [2, inf), quintic smoothstep in between.
double cutoff(double x);

// Coefficients of the bounded solution in the regime-dependent reference bases.
// Low frequency: alpha3/alpha4 weight the J0/Y0-like oscillating Jost solutions,
// beta1 the solution ~ r (1, 0) and beta2 the one ~ a r (-lam/(2<lam>), 1) in
// (phi, psi). High frequency: alpha3/alpha4 weight the J1/Y1-like solutions and
// beta_j the solutions ~ (xi r / 2) e_j in (phi, psi). alpha2 weights the
// decaying solution normalized to K1(kappa r_m) in phi at the matching radius.
// The overall sign is that of the map -M, for which C(lambda) > 0.
struct MatchingCoefficients {
  double beta1 = 0.0, beta2 = 0.0;
  double alpha2 = 0.0, alpha3 = 0.0, alpha4 = 0.0;

  [[nodiscard]] Eigen::Matrix<double, 5, 1> vector() const {
    Eigen::Matrix<double, 5, 1> v;
    v << alpha2, alpha3, alpha4, beta1, beta2;
    return v;
  }
};

// Orthonormalized solution frames. Origin side: the two regular solutions,
// integrated outward over `r_in`; infinity side: decaying and two oscillating
// Jost solutions integrated inward over `r_out` (descending). At every node
// Y_k = Q_k R_k where Y_k is the frame of the previous node carried to r_k.
struct FundamentalBasis {
  SpectralPoint sp;
  Representation rep = Representation::UV;
  bool high = false;  // reporting basis of the high-frequency regime
  double r_match = 0.0;

  std::vector<double> r_in;
  std::vector<Eigen::Matrix<double, 4, 2>> q_in;
  std::vector<Eigen::Matrix2d> rf_in;
  std::vector<double> r_out;
  std::vector<Eigen::Matrix<double, 4, 3>> q_out;
  std::vector<Eigen::Matrix3d> rf_out;

  // Accumulated triangular factors at r_match: origin slopes -> frame
  // coordinates, and oscillating weights -> frame coordinates modulo q1.
  Eigen::Matrix2d origin_factor = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d osc_factor = Eigen::Matrix2d::Identity();
  double decaying_phi = 1.0;  // phi component of q1 at r_match
};

FundamentalBasis fundamental_basis(const SpectralPoint& sp, const VortexProfile& profile, const RadialGrid& grid,
                                   double r_match, const EigenOptions& opt = {});

struct MatchResult {
  MatchingCoefficients coeffs;            // normalized, reporting bases
  Eigen::Matrix<double, 5, 1> null_vector;  // frame coordinates (out 3, in 2), unit norm
  Eigen::Matrix<double, 5, 1> singular_values;  // of the padded 5x5 matrix
  double gap = 0.0;       // sigma_4 / max(sigma_5, eps sigma_1)
  double residual = 0.0;  // |A x| / |A|
  double scale = 1.0;     // factor applied to null_vector by the normalization
  double origin_slope = 0.0;  // lim U.e / r of the normalized solution
};

// Null space of the 4x5 matching matrix at basis.r_match; throws
// RankDeficiency when the singular-value gap is below opt.rank_gap.
MatchResult match(const FundamentalBasis& basis, const VortexProfile& profile, const EigenOptions& opt = {});

struct Eigenfunction {
  SpectralPoint sp;
  std::shared_ptr<const RadialGrid> grid;
  std::shared_ptr<const ProfileFunction> profile;
  std::vector<Eigen::Vector4d> states;  // (u, u', v, v') per node
  // Jost solution with far field (gamma2 sin - gamma1 cos)/sqrt(xi r) e on
  // nodes >= match_index (zero below).
  std::vector<Eigen::Vector4d> conjugate;
  std::size_t match_index = 0;
  double r_match = 0.0;
  MatchingCoefficients coeffs;
  double gamma1 = 0.0, gamma2 = 1.0;  // far field (gamma1 sin + gamma2 cos)/sqrt(xi r) e
  double origin_slope = 0.0;
  double gap = 0.0;
  double residual = 0.0;
  double match_jump = 0.0;  // relative C1 mismatch of the glued halves at r_match

  [[nodiscard]] std::size_t size() const { return states.size(); }
  [[nodiscard]] Eigen::Vector2d value(std::size_t i) const { return {states[i](0), states[i](2)}; }
  [[nodiscard]] RadialField field() const;
  [[nodiscard]] SolutionSample sample(std::size_t i) const;
  [[nodiscard]] SolutionSample conjugate_sample(std::size_t i) const;
};

// Bounded solution of (H - lambda) psi = 0, normalized by its far field,
// sign fixed by lim U.e / r > 0. Negative xi uses psi(-xi) = -sigma1 psi(xi).
Eigenfunction eigenfunction(const SpectralPoint& sp, const VortexProfile& profile,
                            std::shared_ptr<const RadialGrid> grid, const EigenOptions& opt = {});

enum class Regime { FlatLow, SharpHigh };

struct EigenDecomposition {
  Regime regime = Regime::FlatLow;
  std::vector<Eigen::Vector2d> singular_part, regular_part;
  // FlatLow: (b, c, 0);  SharpHigh: (a, b, c)
  double a = 0.0, b = 0.0, c = 0.0;
  double regular_sup = 0.0;  // sup |psi^R|
};

// Low template: sqrt(pi/2) b ((rho - 1) chi(xi r) + J0(xi r)) e + c sin(xi r - pi/4)/sqrt(xi r) (1 - chi(xi r)) e
// High template: a J1(xi r) chi(r) e + (b cos xi r + c sin xi r)/sqrt(xi r) (1 - chi(r)) e
EigenDecomposition decompose(const Eigenfunction& eig, Regime regime);
// Regime by |xi| <= 0.5 / >= 2; in between the template with the smaller regular part.
EigenDecomposition scattering_coeffs(const Eigenfunction& eig);

// Frequency grid xi = c log(1 + e^s) on a uniform s-grid: geometric near 0,
// uniform with spacing ~ c ds beyond xi ~ c.
struct FrequencyGrid {
  double xi_min = 1e-3, xi_max = 20.0, ds = 0.04, c = 0.5;
  std::vector<double> xi;       // positive nodes, ascending
  std::vector<double> weights;  // quadrature weights for int_{xi_min}^{xi_max} f dxi

  static FrequencyGrid make(double xi_min, double xi_max, double ds, double c = 0.5);
  [[nodiscard]] std::size_t size() const { return xi.size(); }
  [[nodiscard]] FrequencyGrid refined() const { return make(xi_min, xi_max, 0.5 * ds, c); }
  // Every other node with the weights of the doubled step; needs an odd node count.
  [[nodiscard]] FrequencyGrid every_other() const;
};

// Eigenfunctions over the positive frequency nodes; negative frequencies
// follow from psi(-xi) = -sigma1 psi(xi).
struct EigenTableEntry {
  double xi = 0.0;
  std::vector<double> u, v;
  MatchingCoefficients coeffs;
  double gamma1 = 0.0, gamma2 = 1.0;
  double origin_slope = 0.0, gap = 0.0, residual = 0.0, match_jump = 0.0, two_radius = -1.0;
  double wronskian_drift = 0.0;  // max |W(conjugate, psi) - 1| over nodes >= match_index
};

class EigenTable {
 public:
  EigenTable() = default;
  EigenTable(FrequencyGrid xg, std::shared_ptr<const RadialGrid> grid, std::vector<EigenTableEntry> entries,
             std::vector<double> zero_u, std::vector<double> zero_v);

  [[nodiscard]] const FrequencyGrid& xi_grid() const { return xg_; }
  [[nodiscard]] const std::shared_ptr<const RadialGrid>& grid() const { return grid_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const EigenTableEntry& entry(std::size_t k) const { return entries_[k]; }
  [[nodiscard]] const std::vector<EigenTableEntry>& entries() const { return entries_; }
  // Signed access: index k >= 0 gives +xi_k, sign < 0 gives -xi_k via -sigma1.
  [[nodiscard]] Eigen::Vector2d value(std::size_t k, int sign, std::size_t node) const;
  // xi -> 0 limit sqrt(pi/4) (rho, -rho)
  [[nodiscard]] const std::vector<double>& zero_u() const { return zero_u_; }
  [[nodiscard]] const std::vector<double>& zero_v() const { return zero_v_; }
  // Table restricted to FrequencyGrid::every_other().
  [[nodiscard]] EigenTable every_other() const;
  // every_other() in frequency, restricted to grid()->every_other() in r.
  [[nodiscard]] EigenTable coarsened() const;

 private:
  FrequencyGrid xg_;
  std::shared_ptr<const RadialGrid> grid_;
  std::vector<EigenTableEntry> entries_;
  std::vector<double> zero_u_, zero_v_;
};

struct TableOptions {
  EigenOptions eigen;
  unsigned threads = 0;       // 0: hardware concurrency
  bool two_radius = false;    // record the two-radius consistency per node
};

class TableBuildError : public std::runtime_error {
 public:
  TableBuildError(const std::string& what, std::vector<std::size_t> failed)
      : std::runtime_error(what), failed_(std::move(failed)) {}
  [[nodiscard]] const std::vector<std::size_t>& failed() const { return failed_; }

 private:
  std::vector<std::size_t> failed_;
};

EigenTable build_table(const VortexProfile& profile, const FrequencyGrid& xg, std::shared_ptr<const RadialGrid> grid,
                       const TableOptions& opt = {});

// Relative deviation of the normalized coefficient vectors (without alpha2)
// obtained with r_m and 2 r_m.
double two_radius_consistency(const SpectralPoint& sp, const VortexProfile& profile, const RadialGrid& grid,
                              const EigenOptions& opt = {});

// Binary cache. The key is stored in the header and checked on load.
void save_table(const EigenTable& t, const std::string& path, const std::string& key);
// Returns false when the file is missing or the key differs.
bool load_table(const std::string& path, const std::string& key, EigenTable& out);
// Key stored in a table file, or nullopt when the file is missing or not a table.
std::optional<std::string> table_key(const std::string& path);

}  // namespace vspec
