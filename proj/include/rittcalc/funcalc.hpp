#pragma once

// Holomorphic functional calculus on Stolz domains: phi(T) by Horner, by
// contour quadrature on the boundary of B_beta, and by eigendecomposition.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rittcalc/numlin.hpp"
#include "rittcalc/stolz.hpp"

namespace rittcalc::funcalc {

using numlin::SpaceModel;
using stolz::MeshSpec;

// |phi(lambda)| <= c |1 - lambda|^s on B_gamma.
struct H0Certificate {
  double c = 1.0;
  double s = 0.0;
};

class HolomorphicFn {
 public:
  enum class Kind { polynomial, rational, closure };

  // Coefficients in ascending powers. A polynomial vanishing at 1 receives
  // the certificate s = order of the zero, c = sum |q_k| with phi = (1-z)^s q.
  static HolomorphicFn polynomial(std::vector<Complex> coeffs);
  static HolomorphicFn rational(std::vector<Complex> num, std::vector<Complex> den);
  static HolomorphicFn closure(std::function<Complex(Complex)> f, std::optional<H0Certificate> cert = std::nullopt,
                               std::string name = "closure");

  Complex operator()(Complex z) const;

  Kind kind() const { return kind_; }
  const std::vector<Complex>& coeffs() const { return num_; }
  const std::vector<Complex>& denominator() const { return den_; }
  const std::optional<H0Certificate>& certificate() const { return cert_; }
  const std::string& name() const { return name_; }
  int degree() const { return static_cast<int>(num_.size()) - 1; }

  HolomorphicFn with_certificate(H0Certificate cert) const;
  HolomorphicFn with_name(std::string name) const;

  // Pointwise product; polynomial times polynomial stays a polynomial.
  HolomorphicFn operator*(const HolomorphicFn& other) const;

 private:
  Kind kind_ = Kind::closure;
  std::vector<Complex> num_, den_;
  std::function<Complex(Complex)> f_;
  std::optional<H0Certificate> cert_;
  std::string name_;
};

// Horner evaluation, also for the numerator/denominator of a rational phi.
Complex horner(const std::vector<Complex>& coeffs, Complex z);
ComplexMatrix eval_poly(const ComplexMatrix& t, const HolomorphicFn& phi);
ComplexMatrix eval_poly(const ComplexMatrix& t, const std::vector<Complex>& coeffs);
// num(T) den(T)^-1 for rational phi.
ComplexMatrix eval_rational(const ComplexMatrix& t, const HolomorphicFn& phi);

struct CalcReport {
  ComplexMatrix value;
  double error_estimate = 0.0;  // norm of the difference of the last two meshes
  double beta = 0.0;
  int nodes = 0;                // on the finest mesh used
  int refinements = 0;
  bool converged = false;       // error <= tol (1 + ||value||)
  bool deflated = false;        // 1 in sigma(T): integrated on Ran(I - P)
};

struct ContourOptions {
  MeshSpec mesh;
  double tol = 1e-8;
  int max_refinements = 4;
};

// Midpoint between the spectral type of T and gamma.
double default_beta(const ComplexMatrix& t, double gamma);

// (1 / 2 pi i) sum_j w_j tau_j phi(lambda_j) R(lambda_j, T) with mesh
// doubling until two consecutive meshes agree.
CalcReport eval_contour(const ComplexMatrix& t, const HolomorphicFn& phi, double beta, const ContourOptions& opts = {});

// Same contour and resolvents for every function in the list.
std::vector<CalcReport> eval_contour_many(const ComplexMatrix& t, const std::vector<HolomorphicFn>& phis, double beta,
                                          const ContourOptions& opts = {});

// (1 - z)^delta, principal branch, with certificate c = 1, s = delta.
HolomorphicFn frac_fn(double delta);

struct FracPowerReport {
  CalcReport calc;
  std::optional<ComplexMatrix> oracle;  // V diag((1 - lambda_i)^delta) V^-1
  std::optional<double> oracle_diff;
};

FracPowerReport frac_power(const ComplexMatrix& t, double delta, double beta, const ContourOptions& opts = {});

// phi(r T) by contour quadrature.
CalcReport scaled_calculus(const ComplexMatrix& t, const HolomorphicFn& phi, double r, double beta,
                           const ContourOptions& opts = {});

// ||phi(r T) - phi(T)|| for each r.
std::vector<std::pair<double, double>> scaled_study(const ComplexMatrix& t, const HolomorphicFn& phi,
                                                    const std::vector<double>& rs, double beta,
                                                    const ContourOptions& opts = {});

struct TransferOptions {
  double r_max = 1e8;
  MeshSpec mesh;
  // Regularizer (1 + z)^-k: f(A) = [(f g)(A)] (I + A)^k. -1 picks degree + 1
  // for polynomials and 0 otherwise.
  int regularize = -1;
  double decay_s = 1.0;  // |f g| ~ |z|^-s at infinity, for the tail estimate
  ContourOptions contour;
};

struct TransferReport {
  ComplexMatrix lhs;  // sector quadrature of f(A), A = I - T
  ComplexMatrix rhs;  // Stolz quadrature of phi(T), phi(lambda) = f(1 - lambda)
  double diff = 0.0;
  double tail_estimate = 0.0;
  double sector_error = 0.0;  // two-mesh difference of the sector quadrature
  double nu = 0.0;
  double beta = 0.0;
};

// f is a function of z on the sector; its certificate (if any) bounds |f(z)|
// by c |z|^s near 0.
TransferReport transfer_check(const ComplexMatrix& t, const HolomorphicFn& f, double nu,
                              const TransferOptions& opts = {});

// sup |phi| on B_gamma from boundary samples plus golden-section refinement.
double hinf_norm(const HolomorphicFn& phi, double gamma, int samples = 3000);
// sup |phi| on the unit disc.
double hinf_norm_disc(const HolomorphicFn& phi, int samples = 4096);

struct FamilySpec {
  int k_max = 64;
  int j_max = 4;
  int random_count = 200;
  int random_degree = 32;
  int fejer_max = 32;
  std::uint64_t seed = kDefaultSeed;
};

struct CalculusConstant {
  double value = 0.0;  // lower bound for the best constant K
  std::string argmax;
  int tested = 0;
};

// max over the test family of ||phi(T)|| / sup_{B_gamma} |phi|.
CalculusConstant calculus_constant(const ComplexMatrix& t, double gamma, const SpaceModel& space,
                                   const FamilySpec& family = {});

// phi(z) = phi1(z^2) + z phi2(z^2).
std::pair<HolomorphicFn, HolomorphicFn> evenodd_split(const HolomorphicFn& phi);

struct NevanlinnaReport {
  double sup = 0.0;
  double ratio = 0.0;  // sup / hinf_norm(phi, gamma)
  int argmax_k = 0;
};

NevanlinnaReport nevanlinna_diag(const ComplexMatrix& t, const HolomorphicFn& phi, const SpaceModel& space, int n_max,
                                 double gamma, const ContourOptions& opts = {});

// phi(T), by Horner when phi is a polynomial and by contour otherwise.
ComplexMatrix apply(const ComplexMatrix& t, const HolomorphicFn& phi, double beta, const ContourOptions& opts = {});

}  // namespace rittcalc::funcalc
