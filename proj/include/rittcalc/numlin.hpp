#pragma once

// Dense complex linear algebra and the four norm structures used throughout.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rittcalc/random.hpp"

namespace rittcalc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace numlin {

// ---------------------------------------------------------------------------
// Space models
// ---------------------------------------------------------------------------

struct Hilbert {
  Index dim = 0;
};

// L^p over a finite measure space: ||x|| = (sum_i w_i |x_i|^p)^(1/p).
struct LpWeighted {
  double p = 2.0;
  std::vector<double> weights;
};

// Schatten class S^p on n x n matrices. States are stored as vec(x), column-major.
struct SchattenP {
  double p = 2.0;
  Index n = 0;
};

// l^infinity on dim points.
struct SupSeq {
  Index dim = 0;
};

class SpaceModel {
 public:
  using Variant = std::variant<Hilbert, LpWeighted, SchattenP, SupSeq>;

  SpaceModel(Hilbert h);
  SpaceModel(LpWeighted l);
  SpaceModel(SchattenP s);
  SpaceModel(SupSeq s);

  static SpaceModel hilbert(Index dim) { return SpaceModel(Hilbert{dim}); }
  static SpaceModel lp(double p, Index dim) {
    return SpaceModel(LpWeighted{p, std::vector<double>(static_cast<std::size_t>(dim), 1.0)});
  }
  static SpaceModel lp(double p, std::vector<double> weights) {
    return SpaceModel(LpWeighted{p, std::move(weights)});
  }
  static SpaceModel schatten(double p, Index n) { return SpaceModel(SchattenP{p, n}); }
  static SpaceModel sup(Index dim) { return SpaceModel(SupSeq{dim}); }

  const Variant& variant() const { return v_; }
  template <class T>
  bool is() const { return std::holds_alternative<T>(v_); }
  template <class T>
  const T& as() const { return std::get<T>(v_); }

  // Length of the state vector (n^2 for Schatten models).
  Index state_dim() const;

  // Exponent p; 2 for Hilbert and +inf for SupSeq.
  double exponent() const;

  // True when the norm is Euclidean on the state vector.
  bool is_euclidean() const;

  // Dual model for the bilinear pairing sum_i x_i y_i, so that the transpose
  // of an operator is its Banach adjoint. LpWeighted{p, w} maps to
  // LpWeighted{p', w^(1-p')}.
  SpaceModel dual() const;

  std::string name() const;

 private:
  void validate() const;
  Variant v_;
};

// ---------------------------------------------------------------------------
// Spectra, solves, SVD
// ---------------------------------------------------------------------------

struct Spectrum {
  ComplexVector eigenvalues;                  // ordered by (real desc, imag desc)
  std::optional<ComplexMatrix> eigenvectors;  // unit columns, same order
  double condition = 1.0;                     // 2-norm condition of the eigenvector basis
};

// Complex Schur (Hessenberg + shifted QR) with an iteration cap of 100 * dim.
Spectrum eig(const ComplexMatrix& m, bool want_vectors = false);

struct SolveOptions {
  double residual_tol = 1e-9;  // ||MX - B|| <= residual_tol * ||B||
  double rcond_min = 1e-14;
};

ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& b, const SolveOptions& opts = {});

struct SvdResult {
  RealVector values;  // descending
  std::optional<ComplexMatrix> u;
  std::optional<ComplexMatrix> v;
};

SvdResult svd(const ComplexMatrix& m, bool want_factors = false);

// Largest singular value.
double norm2(const ComplexMatrix& m);

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

// Accepts a state vector, or an n x n matrix for Schatten models.
double vec_norm(const ComplexMatrix& x, const SpaceModel& space);

struct OpNormOptions {
  int restarts = 8;
  int max_iter = 200;
  std::uint64_t seed = kDefaultSeed;
};

struct OpNorm {
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
  ComplexVector witness;  // ||M w|| / ||w|| == lower

  double value() const { return lower; }
};

OpNorm op_norm(const ComplexMatrix& m, const SpaceModel& space, const OpNormOptions& opts = {});

// T^0 .. T^N. Throws OverflowError naming the first non-finite power.
std::vector<ComplexMatrix> mat_power_seq(const ComplexMatrix& t, int n);

// ---------------------------------------------------------------------------
// Small helpers shared by the other modules
// ---------------------------------------------------------------------------

ComplexMatrix identity(Index n);
void require_square(const ComplexMatrix& m, const char* what);
void require_finite(const ComplexMatrix& m, const char* what);
bool all_finite(const ComplexMatrix& m);

// vec(x) of an n x n matrix (column-major) and its inverse.
ComplexVector vec(const ComplexMatrix& x);
ComplexMatrix unvec(const ComplexVector& v, Index n);

// Reshape a caller-supplied state into a column vector of length state_dim().
ComplexVector as_state(const ComplexMatrix& x, const SpaceModel& space);

// Hermitian part helpers.
ComplexMatrix hermitian_part(const ComplexMatrix& m);
ComplexMatrix hermitian_sqrt(const ComplexMatrix& m);  // PSD square root, negative eigenvalues clipped
RealVector hermitian_eigenvalues(const ComplexMatrix& m);  // ascending

ComplexMatrix random_gaussian(Index rows, Index cols, CounterRng& rng);
ComplexMatrix random_real_gaussian(Index rows, Index cols, CounterRng& rng);
ComplexMatrix random_unitary(Index n, CounterRng& rng);

// Spectral radius.
double spectral_radius(const ComplexMatrix& m);

}  // namespace numlin
}  // namespace rittcalc
