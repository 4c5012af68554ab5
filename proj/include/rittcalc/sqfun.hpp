#pragma once

// Discrete square functions ||x||_{T,m}, Rademacher averages, Khintchine
// ratios, R-bound estimates and quadratic calculus ratios.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rittcalc/funcalc.hpp"
#include "rittcalc/numlin.hpp"

namespace rittcalc::sqfun {

using numlin::SpaceModel;

enum class Truncation { adaptive, fixed };  // fixed: always n_max terms
enum class Side { column, row };            // |y|^2 = y* y or y y* on Schatten models

struct SFConfig {
  int m = 1;
  int n_max = 20000;
  double tail_tol = 1e-10;
  Truncation truncation = Truncation::adaptive;
  Side side = Side::column;
};

struct SFReport {
  double value = 0.0;
  double tail_bound = 0.0;
  int n_used = 0;
  bool capped = false;        // n_max reached before tail_bound <= tail_tol
  std::vector<double> terms;  // k^(m - 1/2) ||T^(k-1) (I - T)^m x||, k = 1..n_used
};

SFReport square_function(const ComplexMatrix& t, const ComplexMatrix& x, const SpaceModel& space,
                         const SFConfig& cfg = {});

// k, term columns.
std::string terms_csv(const SFReport& r);

enum class GramMethod { truncation, stein };

struct GramOptions {
  GramMethod method = GramMethod::truncation;
  double tail_tol = 1e-14;  // relative to ||(I - T)^m||^2
  int n_max = 200000;
};

// G = sum_k k^(2m-1) (T*)^(k-1) (I - T*)^m (I - T)^m T^(k-1), so that
// ||x||_{T,m}^2 = <G x, x> on Hilbert space. The stein route needs m = 1.
ComplexMatrix gram_operator(const ComplexMatrix& t, int m, const GramOptions& opts = {});

struct SFConstant {
  double value = 0.0;
  bool exact = false;  // Hilbert Gram value; otherwise a lower bound
  ComplexVector witness;
  int tested = 0;
};

// Smallest C with ||x||_{T,m} <= C ||x||.
SFConstant sf_constant(const ComplexMatrix& t, int m, const SpaceModel& space, std::uint64_t seed = kDefaultSeed,
                       int trials = 500);

// Search without forming G: random starts, ascent polish and, on Hilbert
// space, subspace iteration with the matrix-free series for G.
SFConstant sf_constant_search(const ComplexMatrix& t, int m, const SpaceModel& space,
                              std::uint64_t seed = kDefaultSeed, int trials = 500);

enum class RadMode { automatic, exact, monte_carlo };

struct RadEstimate {
  double value = 0.0;
  bool exact = true;
  int samples = 0;  // sign patterns evaluated
  std::uint64_t seed = 0;
  double std_error = 0.0;
};

struct RadOptions {
  RadMode mode = RadMode::automatic;  // exact for at most 16 terms
  int samples = 4096;
  std::uint64_t seed = kDefaultSeed;
};

// (E ||sum_k eps_k x_k||^2)^(1/2).
RadEstimate rad_norm(const std::vector<ComplexMatrix>& xs, const SpaceModel& space, const RadOptions& opts = {});

// rad_norm divided by ||(sum_k |x_k|^2)^(1/2)||_p. Hilbert or LpWeighted.
double khintchine_ratio(const std::vector<ComplexMatrix>& xs, const SpaceModel& space, const RadOptions& opts = {});

// Interval known to contain khintchine_ratio for exponent p.
std::pair<double, double> khintchine_bounds(double p, bool real_coefficients);

struct NcKhintchine {
  double rad = 0.0;
  double column = 0.0;  // ||(sum x* x)^(1/2)||_p
  double row = 0.0;     // ||(sum x x*)^(1/2)||_p
  double block = 0.0;   // two-index families: ||[x_ij]||_p
  double block_t = 0.0; // ||[x_ji]||_p
  double estimate = 0.0;  // max for p >= 2, best candidate decomposition for p < 2
  bool optimal = true;    // false when estimate is only a candidate infimum
};

// One index family of n x n matrices in S^p.
NcKhintchine nc_khintchine(const std::vector<ComplexMatrix>& xs, double p, const RadOptions& opts = {});
// x[i][j], double Rademacher average.
NcKhintchine nc_khintchine2(const std::vector<std::vector<ComplexMatrix>>& xs, double p);

struct RBoundOptions {
  int trials = 200;
  int polish_steps = 200;
  std::uint64_t seed = kDefaultSeed;
  RadOptions rad;
};

struct RBoundEstimate {
  double value = 0.0;
  double std_error = 0.0;  // nonzero when the Rademacher averages were sampled
  int tested = 0;
};

// max rad_norm(T_k x_k) / rad_norm(x_k) over random and polished tuples.
RBoundEstimate r_bound_lower(const std::vector<ComplexMatrix>& ts, const SpaceModel& space,
                             const RBoundOptions& opts = {});

// sup over boundary samples of B_gamma of (sum_l |phi_l|^2)^(1/2).
double boundary_l2_sup(const std::vector<funcalc::HolomorphicFn>& phis, double gamma, int samples = 3000);

double quadratic_calc_ratio(const ComplexMatrix& t, const std::vector<funcalc::HolomorphicFn>& phis,
                            const ComplexMatrix& x, const SpaceModel& space, double gamma,
                            const funcalc::ContourOptions& copts = {}, const RadOptions& ropts = {});

double matrix_calc_ratio(const ComplexMatrix& t, const std::vector<std::vector<funcalc::HolomorphicFn>>& phi,
                         const std::vector<ComplexMatrix>& xs, const SpaceModel& space, double gamma,
                         const funcalc::ContourOptions& copts = {}, const RadOptions& ropts = {},
                         int samples = 3000);

// phi_l(z) = l^(m - 1/2) z^(l-1) (1 - z)^e with e = l as printed, or e = m.
enum class SfeExponent { l, m };
std::vector<funcalc::HolomorphicFn> sfe_family(int m, int count, SfeExponent exponent = SfeExponent::l);

struct C512 {
  double c1 = 0.0;
  double c2 = 0.0;
  double bound = 0.0;  // sqrt(6) c1^2
  bool holds = false;
};

C512 c512_check(const ComplexMatrix& t);

}  // namespace rittcalc::sqfun
