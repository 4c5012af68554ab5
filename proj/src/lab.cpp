#include "rittcalc/lab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rittcalc/errors.hpp"
#include "rittcalc/ritt.hpp"
#include "rittcalc/sqfun.hpp"

namespace rittcalc::lab {

using namespace numlin;

namespace {

std::string to_decimal(unsigned __int128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Kp1 kp1_identity(std::int64_t k) {
  if (k < 1) throw DomainError("kp1_identity: k must be at least 1");
  using U = unsigned __int128;
  const U kk = static_cast<U>(k);
  U lhs = 0;
  for (U j = 1; j <= kk; ++j) lhs += j * (kk + 1 - j);
  const U rhs = kk * (kk + 1) * (kk + 2) / 6;
  return {to_decimal(lhs), to_decimal(rhs), lhs == rhs};
}

Residual partial_sum_identity(const ComplexMatrix& t, int n) {
  require_square(t, "partial_sum_identity");
  require_finite(t, "partial_sum_identity");
  if (n < 1) throw DomainError("partial_sum_identity: N must be at least 1");
  const Index d = t.rows();
  const ComplexMatrix id = identity(d), a = id - t, a2 = a * a, a3 = a2 * a;
  Residual r;
  ComplexMatrix lhs = ComplexMatrix::Zero(d, d), p = id;  // p = T^(k-1)
  double scale = 0.0;
  for (int k = 1; k <= n; ++k) {
    const ComplexMatrix term = (static_cast<double>(k) * (k + 1)) * (p * a3);
    lhs += term;
    scale += term.norm();
    p = p * t;
    if (!all_finite(p)) throw OverflowError("partial_sum_identity: T^k overflows", k);
  }
  // p = T^N now.
  const double nn = n;
  const ComplexMatrix r1 = 2.0 * p, r2 = (2.0 * nn) * (p * a), r3 = (nn * (nn + 1)) * (p * a2);
  const ComplexMatrix rhs = 2.0 * id - r1 - r2 - r3;
  r.scale = 1.0 + scale + 2.0 * std::sqrt(static_cast<double>(d)) + r1.norm() + r2.norm() + r3.norm();
  r.residual = (lhs - rhs).norm();
  return r;
}

std::vector<double> decomp_convergence(const ComplexMatrix& t, const ComplexVector& x, const std::vector<int>& ns) {
  require_square(t, "decomp_convergence");
  if (x.size() != t.rows()) throw ShapeError("decomp_convergence: vector does not match the operator");
  const ComplexMatrix p = ritt::mean_ergodic_projection(t);
  if ((p * x).norm() > 1e-10 * std::max(1.0, x.norm()))
    throw DomainError("decomp_convergence: x has a component in Ker(I - T)");
  int n_max = 0;
  for (int n : ns) {
    if (n < 1) throw DomainError("decomp_convergence: N must be at least 1");
    n_max = std::max(n_max, n);
  }
  const ComplexMatrix a = identity(t.rows()) - t;
  ComplexVector y = a * (a * (a * x));  // T^(k-1) (I - T)^3 x
  ComplexVector sum = ComplexVector::Zero(x.size());
  std::vector<double> at(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int k = 1; k <= n_max; ++k) {
    sum += (static_cast<double>(k) * (k + 1)) * y;
    at[static_cast<std::size_t>(k)] = (sum - 2.0 * x).norm();
    y = t * y;
  }
  std::vector<double> out;
  for (int n : ns) out.push_back(at[static_cast<std::size_t>(n)]);
  return out;
}

SimilarityReport similarity_builder(const ComplexMatrix& t) {
  require_square(t, "similarity_builder");
  require_finite(t, "similarity_builder");
  const Index n = t.rows();
  const ComplexMatrix p = ritt::mean_ergodic_projection(t);
  sqfun::GramOptions go;
  SimilarityReport out;
  if (n <= 40) {
    go.method = sqfun::GramMethod::stein;
  } else {
    out.tail = go.tail_tol;
  }
  const ComplexMatrix g = sqfun::gram_operator(t, 1, go);
  out.m = hermitian_part(p.adjoint() * p + g);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(out.m);
  const RealVector mu = es.eigenvalues();
  const double lo = mu(0), hi = mu(n - 1);
  if (!(lo > 1e-13 * hi)) throw DomainError("similarity_builder: no two-sided square function equivalence");
  const ComplexMatrix q = es.eigenvectors();
  out.v = q * mu.cwiseSqrt().cast<Complex>().asDiagonal() * q.adjoint();
  const ComplexMatrix vinv = q * mu.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * q.adjoint();
  out.contraction_norm = norm2(out.v * t * vinv);
  out.equiv_lower = std::sqrt(lo);
  out.equiv_upper = std::sqrt(hi);
  out.condition = std::sqrt(hi / lo);
  return out;
}

PairingReport pairing_bound_check(const ComplexMatrix& t, const funcalc::HolomorphicFn& phi, const ComplexVector& x,
                                  const ComplexVector& y, int n, double tail_tol) {
  require_square(t, "pairing_bound_check");
  const Index d = t.rows();
  if (x.size() != d || y.size() != d) throw ShapeError("pairing_bound_check: vectors do not match the operator");
  if (phi.kind() != funcalc::HolomorphicFn::Kind::polynomial)
    throw DomainError("pairing_bound_check: phi must be a polynomial");
  if (std::abs(phi(1.0)) > 1e-12 * (1.0 + phi.coeffs().size()))
    throw DomainError("pairing_bound_check: phi(1) must vanish");
  if (n < 1) throw DomainError("pairing_bound_check: N must be at least 1");

  const ComplexMatrix id = identity(d), a = id - t, ts = t.adjoint();
  const ComplexMatrix phit = funcalc::eval_poly(t, phi);
  PairingReport out;
  const Complex pair = y.dot(phit * x);
  out.lhs = std::abs(pair);

  ComplexMatrix pk = id;  // T^(k-1)
  for (int k = 1; k <= n; ++k) {
    out.r_factor = std::max(out.r_factor, (k + 1.0) * norm2(phit * pk * a));
    pk = pk * t;
  }
  sqfun::SFConfig cfg;
  cfg.tail_tol = 1e-12;
  out.sf_x = sqfun::square_function(t, x, SpaceModel::hilbert(d), cfg).value;
  const ComplexMatrix s = id + ts + ts * ts;
  const ComplexMatrix psi_star = 0.5 * (s * s * s);
  out.sf_y = sqfun::square_function(ts, psi_star * y, SpaceModel::hilbert(d), cfg).value;

  // sum_k k (k+1) <psi(T) phi(T) T^(3(k-1)) (I - T)^3 x, y>.
  const ComplexMatrix s_t = id + t + t * t;
  ComplexVector v = 0.5 * (s_t * s_t * s_t) * (phit * (a * (a * (a * x))));
  const ComplexMatrix t3 = t * t * t;
  Complex partial = 0.0;
  for (int k = 1; k <= n; ++k) {
    partial += (static_cast<double>(k) * (k + 1)) * y.dot(v);
    v = t3 * v;
  }
  out.identity_residual = std::abs(partial - pair);
  out.truncated = out.identity_residual > tail_tol;
  out.holds = out.lhs <= out.r_factor * out.sf_x * out.sf_y + tail_tol;
  return out;
}

std::string to_string(GalleryKind k) {
  switch (k) {
    case GalleryKind::schur: return "schur";
    case GalleryKind::markov: return "markov";
    case GalleryKind::c0_witness: return "c0-witness";
    case GalleryKind::conditional_basis: return "conditional-basis";
  }
  return "unknown";
}

bool GalleryInstance::flagged(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

GalleryInstance gallery_schur(const Eigen::MatrixXd& t, double p) {
  if (t.rows() != t.cols() || t.rows() == 0) throw ShapeError("gallery_schur: multiplier must be square");
  if (!t.allFinite() || t.cwiseAbs().maxCoeff() > 1.0) throw DomainError("gallery_schur: entries must lie in [-1, 1]");
  const Index n = t.rows();
  GalleryInstance g;
  g.kind = GalleryKind::schur;
  g.space = SpaceModel::schatten(p, n);
  g.params = {{"n", static_cast<double>(n)}, {"p", p}, {"delta", 1.0 + t.minCoeff()}};
  g.t = ComplexMatrix::Zero(n * n, n * n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g.t(j * n + i, j * n + i) = t(i, j);
  g.checks["max_abs_entry"] = t.cwiseAbs().maxCoeff();
  if (1.0 + t.minCoeff() <= 0.0) g.flags.push_back("minus-one-entry");
  return g;
}

Eigen::MatrixXd schur_cosine(int n, double delta, std::uint64_t seed) {
  if (n < 2 || !(delta > 0.0) || delta > 2.0) throw DomainError("schur_cosine: need n >= 2 and 0 < delta <= 2");
  CounterRng rng(seed);
  std::vector<double> theta{0.0, M_PI};
  for (int i = 2; i < n; ++i) theta.push_back(rng.uniform(0.0, M_PI));
  Eigen::MatrixXd t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      t(i, j) = 0.5 * delta + (1.0 - 0.5 * delta) * std::cos(theta[static_cast<std::size_t>(i)] - theta[static_cast<std::size_t>(j)]);
  return t;
}

GalleryInstance gallery_markov_from(const std::vector<ComplexMatrix>& unitaries, const std::vector<double>& weights,
                                    double p) {
  if (unitaries.empty() || unitaries.size() != weights.size())
    throw ShapeError("gallery_markov: need one weight per unitary");
  const Index n = unitaries.front().rows();
  double wsum = 0.0;
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    const ComplexMatrix& u = unitaries[i];
    if (u.rows() != n || u.cols() != n) throw ShapeError("gallery_markov: unitaries must share a square shape");
    if ((u.adjoint() * u - identity(n)).norm() > 1e-10) throw DomainError("gallery_markov: matrix is not unitary");
    if (!(weights[i] >= 0.0)) throw DomainError("gallery_markov: weights must be nonnegative");
    wsum += weights[i];
  }
  if (std::abs(wsum - 1.0) > 1e-12) throw DomainError("gallery_markov: weights must sum to 1");

  GalleryInstance g;
  g.kind = GalleryKind::markov;
  g.space = SpaceModel::schatten(p, n);
  g.params = {{"n", static_cast<double>(n)}, {"p", p}, {"terms", static_cast<double>(unitaries.size())}};
  g.t = ComplexMatrix::Zero(n * n, n * n);
  for (std::size_t i = 0; i < unitaries.size(); ++i) {
    const ComplexMatrix& u = unitaries[i];
    g.t += 0.5 * weights[i] * (kron(u.conjugate(), u) + kron(u.transpose(), u.adjoint()));
  }

  auto apply = [&](const ComplexMatrix& x) { return unvec(g.t * vec(x), n); };
  g.checks["unital"] = (apply(identity(n)) - identity(n)).norm();
  double trace = 0.0;
  ComplexMatrix choi = ComplexMatrix::Zero(n * n, n * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(a, b) = 1.0;
      const ComplexMatrix te = apply(e);
      trace = std::max(trace, std::abs(te.trace() - e.trace()));
      choi.block(a * n, b * n, n, n) = te;
    }
  g.checks["trace"] = trace;
  g.checks["choi_hermitian"] = (choi - choi.adjoint()).norm();
  g.checks["choi_min_eigenvalue"] = hermitian_eigenvalues(choi).minCoeff();
  g.checks["selfadjoint"] = (g.t - g.t.adjoint()).norm();
  const ComplexVector ev = eig(g.t).eigenvalues;
  double imag = 0.0, lo = 1.0, hi = -1.0;
  for (Index i = 0; i < ev.size(); ++i) {
    imag = std::max(imag, std::abs(ev(i).imag()));
    lo = std::min(lo, ev(i).real());
    hi = std::max(hi, ev(i).real());
  }
  g.checks["spectrum_imag"] = imag;
  g.checks["spectrum_min"] = lo;
  g.checks["spectrum_max"] = hi;
  if (lo <= -1.0 + 1e-8) g.flags.push_back("minus-one-eigenvalue");
  return g;
}

GalleryInstance gallery_markov(int n, std::uint64_t seed, int terms, double p) {
  if (n < 2 || terms < 1) throw DomainError("gallery_markov: need n >= 2 and at least one term");
  CounterRng rng(seed);
  std::vector<ComplexMatrix> us;
  std::vector<double> w;
  double s = 0.0;
  for (int i = 0; i < terms; ++i) {
    us.push_back(random_unitary(n, rng));
    w.push_back(rng.uniform(0.1, 1.0));
    s += w.back();
  }
  for (double& v : w) v /= s;
  GalleryInstance g = gallery_markov_from(us, w, p);
  g.params["seed"] = static_cast<double>(seed);
  return g;
}

GalleryInstance gallery_flip(double p) {
  ComplexMatrix swap(2, 2);
  swap << 0.0, 1.0, 1.0, 0.0;
  return gallery_markov_from({swap}, {1.0}, p);
}

namespace {

// Normalized nonzero vectors of {-1, 0, 1}^n, one per pair +-v.
std::vector<Eigen::VectorXd> ternary_family(int n) {
  std::vector<Eigen::VectorXd> out;
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (std::int64_t code = 1; code < total; ++code) {
    Eigen::VectorXd v(n);
    std::int64_t c = code;
    int first = 0;
    for (int i = 0; i < n; ++i) {
      v(i) = static_cast<double>(c % 3) - 1.0;
      c /= 3;
      if (first == 0 && v(i) != 0.0) first = v(i) > 0 ? 1 : -1;
    }
    if (first <= 0) continue;
    out.push_back(v / v.norm());
  }
  return out;
}

double min_max_overlap(const std::vector<Eigen::VectorXd>& ys, const Eigen::VectorXd& y) {
  double m = 0.0;
  for (const auto& v : ys) m = std::max(m, std::abs(v.dot(y)));
  return m;
}

std::vector<Eigen::VectorXd> repulsion_family(int n, int m, CounterRng& rng) {
  std::vector<Eigen::VectorXd> ys;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.normal();
    ys.push_back(v / v.norm());
  }
  for (int it = 0; it < 300; ++it) {
    const double step = 0.1 / (1.0 + it / 30.0);
    std::vector<Eigen::VectorXd> next = ys;
    for (int a = 0; a < m; ++a) {
      Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
      for (int b = 0; b < m; ++b) {
        if (a == b) continue;
        const double c = ys[static_cast<std::size_t>(a)].dot(ys[static_cast<std::size_t>(b)]);
        f -= c * c * c * ys[static_cast<std::size_t>(b)];
      }
      next[static_cast<std::size_t>(a)] += step * f;
      next[static_cast<std::size_t>(a)].normalize();
    }
    ys = next;
  }
  return ys;
}

// 1 / min over sampled unit y of max_j |<y, y_j>|, with local descent.
double sampled_covering(const std::vector<Eigen::VectorXd>& ys, int n, CounterRng& rng) {
  double worst = 1.0;
  Eigen::VectorXd wy;
  for (int s = 0; s < 4000; ++s) {
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y(i) = rng.normal();
    y.normalize();
    const double v = min_max_overlap(ys, y);
    if (v < worst) worst = v, wy = y;
  }
  double step = 0.2;
  for (int it = 0; it < 400 && step > 1e-6; ++it) {
    Eigen::VectorXd y = wy;
    for (int i = 0; i < n; ++i) y(i) += step * rng.normal();
    y.normalize();
    const double v = min_max_overlap(ys, y);
    if (v < worst)
      worst = v, wy = y;
    else
      step *= 0.97;
  }
  return 1.0 / worst;
}

}  // namespace

C0Witness c0_growth_witness(int n, int m_cover, std::uint64_t seed) {
  if (n < 1 || n > 12) throw DomainError("c0_growth_witness: n must lie in [1, 12]");
  C0Witness out;
  out.n = n;
  std::vector<Eigen::VectorXd> ys;
  if (m_cover == 0) {
    ys = ternary_family(n);
    double h = 0.0;
    for (int k = 1; k <= n; ++k) h += 1.0 / k;
    out.covering = std::sqrt(h);
    out.covering_certified = true;
  } else {
    CounterRng rng(seed);
    ys = repulsion_family(n, m_cover, rng);
    out.covering = sampled_covering(ys, n, rng);
  }
  if (out.covering > 2.0) {
    std::ostringstream os;
    os << "c0_growth_witness: covering constant " << out.covering << " exceeds 2";
    throw ConvergenceError(os.str());
  }
  out.m = static_cast<int>(ys.size());
  // alpha_lj = <h_l, y_j> with h_l the standard basis; x_l = sum_j alpha_lj e_j in l^inf_m.
  std::vector<ComplexMatrix> xs;
  for (int l = 0; l < n; ++l) {
    ComplexVector x(out.m);
    for (int j = 0; j < out.m; ++j) x(j) = ys[static_cast<std::size_t>(j)](l);
    xs.emplace_back(x);
  }
  sqfun::RadOptions ro;
  ro.mode = sqfun::RadMode::exact;
  out.rad = sqfun::rad_norm(xs, SpaceModel::sup(out.m), ro).value;
  for (const auto& y : ys) out.sup_column = std::max(out.sup_column, y.norm());
  out.ratio = out.rad / out.sup_column;
  out.holds = out.ratio >= std::sqrt(static_cast<double>(n)) / 2.0;
  return out;
}

GalleryInstance gallery_c0(int m) {
  if (m < 1) throw DomainError("gallery_c0: m must be positive");
  GalleryInstance g;
  g.kind = GalleryKind::c0_witness;
  g.space = SpaceModel::sup(m);
  g.params = {{"m", static_cast<double>(m)}};
  g.t = identity(m);
  for (int j = 0; j < m; ++j) g.t(j, j) -= std::pow(2.0, -(j + 1));
  return g;
}

ConditionalBasis conditional_basis_demo(int n, double kappa, std::uint64_t seed) {
  if (n < 1 || !(kappa >= 1.0)) throw DomainError("conditional_basis_demo: need n >= 1 and kappa >= 1");
  CounterRng rng(seed);
  const ComplexMatrix q1 = random_unitary(n, rng), q2 = random_unitary(n, rng);
  ComplexMatrix grade = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) grade(i, i) = n > 1 ? std::pow(kappa, -static_cast<double>(i) / (n - 1)) : 1.0;
  ComplexMatrix s = q1 * grade * q2;
  for (int j = 0; j < n; ++j) s.col(j).normalize();
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (int m = 0; m < n; ++m) d(m, m) = 1.0 - std::pow(2.0, -(m + 1));

  ConditionalBasis out;
  out.n = n;
  out.kappa = kappa;
  const RealVector sv = svd(s).values;
  out.basis_condition = sv(0) / sv(n - 1);
  out.t = s * d * s.inverse();
  const SpaceModel h = SpaceModel::hilbert(n);
  out.sf_constant = sqfun::sf_constant(out.t, 1, h).value;
  out.sf_constant_adjoint = sqfun::sf_constant(out.t.adjoint(), 1, h).value;
  const SimilarityReport sr = similarity_builder(out.t);
  out.equiv_ratio = std::pow(sr.equiv_upper / sr.equiv_lower, 2);
  out.contraction_norm = sr.contraction_norm;
  return out;
}

}  // namespace rittcalc::lab
