#pragma once

// Experiments: exact identities, similarity to a contraction, the duality
// pairing bound, and a gallery of Schur multipliers and Markov maps.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rittcalc/funcalc.hpp"
#include "rittcalc/numlin.hpp"

namespace rittcalc::lab {

using numlin::SpaceModel;

struct Kp1 {
  std::string lhs;  // decimal, exact
  std::string rhs;
  bool equal = false;
};

// sum_{j=1}^k j (k + 1 - j) against k (k + 1) (k + 2) / 6.
Kp1 kp1_identity(std::int64_t k);

struct Residual {
  double residual = 0.0;
  double scale = 1.0;  // sum of the magnitudes of all terms
  bool ok() const { return residual <= 1e-10 * scale; }
};

// sum_{k=1}^N k (k+1) T^(k-1) (I - T)^3 against
// 2I - 2T^N - 2N T^N (I - T) - N (N+1) T^N (I - T)^2.
Residual partial_sum_identity(const ComplexMatrix& t, int n);

// ||sum_{k<=N} k (k+1) T^(k-1) (I - T)^3 x - 2x|| for each N.
std::vector<double> decomp_convergence(const ComplexMatrix& t, const ComplexVector& x, const std::vector<int>& ns);

struct SimilarityReport {
  ComplexMatrix v;       // |||x||| = ||V x||
  ComplexMatrix m;       // P* P + G
  double contraction_norm = 0.0;  // ||V T V^-1||
  double equiv_lower = 0.0;       // lambda_min(M)^(1/2)
  double equiv_upper = 0.0;       // lambda_max(M)^(1/2)
  double condition = 0.0;         // of V
  double tail = 0.0;              // truncation tolerance of G, 0 for the Stein route
  bool ok() const { return contraction_norm <= 1.0 + 1e-8; }
};

SimilarityReport similarity_builder(const ComplexMatrix& t);

struct PairingReport {
  double lhs = 0.0;  // |<phi(T) x, y>|
  double r_factor = 0.0;   // sup_{k<=N} (k+1) ||phi(T) T^(k-1) (I - T)||
  double sf_x = 0.0;       // ||x||_{T,1}
  double sf_y = 0.0;       // ||psi(T*) y||_{T*,1}
  double identity_residual = 0.0;  // partial sum of the expansion against <phi(T) x, y>
  bool truncated = false;          // identity_residual above tail_tol
  bool holds = false;              // lhs <= product + tail_tol
  double margin() const { return r_factor * sf_x * sf_y - lhs; }
};

PairingReport pairing_bound_check(const ComplexMatrix& t, const funcalc::HolomorphicFn& phi, const ComplexVector& x,
                                  const ComplexVector& y, int n = 1000, double tail_tol = 1e-8);

enum class GalleryKind { schur, markov, c0_witness, conditional_basis };
std::string to_string(GalleryKind k);

struct GalleryInstance {
  GalleryKind kind = GalleryKind::schur;
  std::map<std::string, double> params;
  ComplexMatrix t;
  SpaceModel space = SpaceModel::hilbert(1);
  std::map<std::string, double> checks;  // certificate residuals
  std::vector<std::string> flags;
  bool flagged(const std::string& f) const;
};

// Entrywise multiplication by a real t with |t_ij| <= 1, on S^p_n.
GalleryInstance gallery_schur(const Eigen::MatrixXd& t, double p);

// t_ij = cos(theta_i - theta_j) scaled into [-1 + delta, 1].
Eigen::MatrixXd schur_cosine(int n, double delta, std::uint64_t seed);

// x -> sum_i p_i (U_i x U_i* + U_i* x U_i) / 2 on M_n with the normalized trace.
GalleryInstance gallery_markov(int n, std::uint64_t seed, int terms = 3, double p = 2.0);
GalleryInstance gallery_markov_from(const std::vector<ComplexMatrix>& unitaries, const std::vector<double>& weights,
                                    double p = 2.0);
// Swap conjugation on M_2: on the diagonal it is (t, s) -> (s, t).
GalleryInstance gallery_flip(double p = 2.0);

struct C0Witness {
  int n = 0;
  int m = 0;                 // size of the covering family
  double covering = 0.0;     // constant c with ||y|| <= c sup_j |<y, y_j>|
  bool covering_certified = false;
  double rad = 0.0;
  double sup_column = 0.0;   // sup_j (sum_l |alpha_lj|^2)^(1/2)
  double ratio = 0.0;
  bool holds = false;        // ratio >= sqrt(n) / 2
};

// m_cover = 0 uses the normalized vectors of {-1, 0, 1}^n up to sign, whose
// covering constant is at most sqrt(H_n); m_cover > 0 uses that many
// repulsion-optimized points with a sampled covering constant.
C0Witness c0_growth_witness(int n, int m_cover = 0, std::uint64_t seed = kDefaultSeed);
GalleryInstance gallery_c0(int m);

struct ConditionalBasis {
  int n = 0;
  double kappa = 1.0;
  double basis_condition = 1.0;
  double sf_constant = 0.0;
  double sf_constant_adjoint = 0.0;
  double equiv_ratio = 0.0;  // lambda_max(M) / lambda_min(M)
  double contraction_norm = 0.0;
  ComplexMatrix t;
};

// T = S diag(1 - 2^-m) S^-1 with unit columns of S and cond(S) close to kappa.
ConditionalBasis conditional_basis_demo(int n, double kappa, std::uint64_t seed = kDefaultSeed);

}  // namespace rittcalc::lab
