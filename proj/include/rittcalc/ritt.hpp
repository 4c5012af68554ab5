#pragma once

// Finite-N diagnostics for the Ritt property: power and increment suprema,
// spectral type, sampled resolvent bounds and the mean ergodic projection.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "rittcalc/numlin.hpp"

namespace rittcalc::ritt {


using numlin::OpNormOptions;
using numlin::SpaceModel;

// Eigenvalues with |lambda - 1| <= this * (1 + ||T||) count as exactly 1.
inline constexpr double kUnitClusterTol = 1e-10;

// Operator norms in the supremum computations; fewer restarts than the
// default since hundreds of powers are evaluated.
OpNormOptions sequence_norm_options();

// max_{0<=n<=N} ||T^n||. A lower bound outside Hilbert / SupSeq.
double power_bound(const ComplexMatrix& t, const SpaceModel& space, int n_max,
                   const OpNormOptions& opts = sequence_norm_options());

// max_{1<=n<=N} n ||T^n - T^(n-1)||.
double increment_bound(const ComplexMatrix& t, const SpaceModel& space, int n_max,
                       const OpNormOptions& opts = sequence_norm_options());

// max over eigenvalues of the smallest Stolz angle containing them; nullopt
// when some eigenvalue other than 1 has modulus >= 1 (up to the cluster
// tolerance).
std::optional<double> spectral_type(const ComplexMatrix& t);

// The sampled points: dilations (1 + 10^-k) of boundary points of B_beta,
// k = 1..4, plus the circles |lambda| = 2 and |lambda| = 10.
std::vector<Complex> resolvent_samples(double beta);

struct ResolventSup {
  double beta = 0.0;
  double value = 0.0;
  int sampled = 0;
  int skipped = 0;  // samples too close to the spectrum
  std::vector<double> values;  // per sample, NaN when skipped
};

// max of ||(lambda - 1) R(lambda, T)|| over resolvent_samples(beta).
// Heuristic: a sampled supremum, not a certified bound.
ResolventSup resolvent_sup(const ComplexMatrix& t, double beta, const SpaceModel& space,
                           const OpNormOptions& opts = sequence_norm_options());

// sup_{1<=n<=N} n^j ||T^n (I - T)^j|| for j = 0..3.
std::array<double, 4> decay_sequences(const ComplexMatrix& t, const SpaceModel& space, int n_max,
                                      const OpNormOptions& opts = sequence_norm_options());

// Projection onto Ker(I - T) along Ran(I - T). Zero when 1 is not an
// eigenvalue; DomainError when the eigenvalue 1 is defective.
ComplexMatrix mean_ergodic_projection(const ComplexMatrix& t);

enum class Verdict { ritt, not_ritt, inconclusive };
std::string to_string(Verdict v);

struct RittConfig {
  int n_max = 512;
  double stability_tol = 0.05;    // sup(2N) <= (1 + tol) sup(N)
  double angle_margin = 1e-6;     // type must be < pi/2 - margin
  std::vector<double> betas;      // empty: three angles between type and pi/2
  OpNormOptions norm_opts = sequence_norm_options();
};

struct RittReport {
  double power_bound = 0.0;
  double increment_bound = 0.0;
  std::optional<double> type_alpha;  // nullopt: not Stolz
  std::vector<std::pair<double, double>> resolvent_sup;  // (beta, sup)
  std::array<double, 4> decay{};
  // Same quantities at 2N, for the doubling test.
  double power_bound_2n = 0.0;
  double increment_bound_2n = 0.0;
  std::array<double, 4> decay_2n{};
  bool norms_exact = false;
  bool has_unit_eigenvalue = false;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> reasons;
  int n_used = 0;
  SpaceModel space = SpaceModel::hilbert(1);
};

RittReport ritt_verdict(const ComplexMatrix& t, const SpaceModel& space, const RittConfig& config = {});

}  // namespace rittcalc::ritt
