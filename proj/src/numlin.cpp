#include "rittcalc/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "rittcalc/errors.hpp"

namespace rittcalc {

double CounterRng::normal() {
  // Box-Muller on two counter draws; u1 kept away from 0.
  const double u1 = (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

namespace numlin {

namespace {

double conjugate_exponent(double p) {
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  return p / (p - 1.0);
}

Complex unit_phase(Complex z) {
  const double a = std::abs(z);
  return a == 0.0 ? Complex(0.0) : z / a;
}

// (sum |x_i|^p)^(1/p), scaled to avoid overflow.
double pnorm(const ComplexVector& x, double p) {
  const double amax = x.cwiseAbs().maxCoeff();
  if (amax == 0.0) return 0.0;
  if (std::isinf(p)) return amax;
  double s = 0.0;
  for (Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)) / amax, p);
  return amax * std::pow(s, 1.0 / p);
}

double schatten_from_values(const RealVector& sv, double p) {
  if (sv.size() == 0) return 0.0;
  const double smax = sv.maxCoeff();
  if (smax == 0.0) return 0.0;
  if (std::isinf(p)) return smax;
  double s = 0.0;
  for (Index i = 0; i < sv.size(); ++i) s += std::pow(sv(i) / smax, p);
  return smax * std::pow(s, 1.0 / p);
}

// Dual vector of y in l^p: unit l^q norm with <dual, y> = ||y||_p.
ComplexVector lp_dual(const ComplexVector& y, double p) {
  ComplexVector d = ComplexVector::Zero(y.size());
  const double ny = pnorm(y, p);
  if (ny == 0.0) return d;
  for (Index i = 0; i < y.size(); ++i)
    d(i) = unit_phase(y(i)) * std::pow(std::abs(y(i)) / ny, p - 1.0);
  return d;
}

// Norming element of g in S^q for the Frobenius pairing, of unit S^p norm.
ComplexMatrix schatten_dual(const ComplexMatrix& g, double q) {
  Eigen::JacobiSVD<ComplexMatrix> s(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sv = s.singularValues();
  ComplexMatrix out = ComplexMatrix::Zero(g.rows(), g.cols());
  if (sv.size() == 0 || sv(0) == 0.0) return out;
  if (std::isinf(q)) {
    // p == 1: the extreme points of the S^1 ball are rank one.
    return s.matrixU().col(0) * s.matrixV().col(0).adjoint();
  }
  const double nq = schatten_from_values(sv, q);
  for (Index k = 0; k < sv.size(); ++k) {
    const double c = std::pow(sv(k) / nq, q - 1.0);
    if (c == 0.0) continue;
    out += c * s.matrixU().col(k) * s.matrixV().col(k).adjoint();
  }
  return out;
}

// Multi-start norm ascent for an operator on l^p (unit weights).
OpNorm lp_ascent(const ComplexMatrix& b, double p, const OpNormOptions& opts) {
  const Index n = b.cols();
  const double q = conjugate_exponent(p);
  std::vector<ComplexVector> starts;
  starts.push_back(ComplexVector::Ones(n));
  {
    Index best = 0;
    double bestv = -1.0;
    for (Index j = 0; j < n; ++j) {
      const double v = pnorm(b.col(j), p);
      if (v > bestv) {
        bestv = v;
        best = j;
      }
    }
    starts.push_back(ComplexVector::Unit(n, best));
  }
  CounterRng rng(opts.seed, 0x11);
  for (int r = 0; r < opts.restarts; ++r) {
    ComplexVector x(n);
    for (Index i = 0; i < n; ++i) x(i) = Complex(rng.normal(), rng.normal());
    starts.push_back(x);
  }

  OpNorm out;
  out.lower = 0.0;
  out.witness = ComplexVector::Unit(n, 0);
  for (ComplexVector x : starts) {
    const double nx = pnorm(x, p);
    if (nx == 0.0) continue;
    x /= nx;
    for (int it = 0; it < opts.max_iter; ++it) {
      const ComplexVector y = b * x;
      const double val = pnorm(y, p);
      if (val > out.lower) {
        out.lower = val;
        out.witness = x;
      }
      if (val == 0.0) break;
      const ComplexVector z = b.adjoint() * lp_dual(y, p);
      const double zq = pnorm(z, q);
      const double zx = std::real(z.dot(x));
      if (zq <= zx * (1.0 + 1e-14)) break;
      x = lp_dual(z, q);
    }
  }
  return out;
}

OpNorm schatten_ascent(const ComplexMatrix& m, double p, Index n, const OpNormOptions& opts) {
  const double q = conjugate_exponent(p);
  const auto snorm = [&](const ComplexMatrix& x) {
    Eigen::JacobiSVD<ComplexMatrix> s(x);
    return schatten_from_values(s.singularValues(), p);
  };
  std::vector<ComplexMatrix> starts;
  starts.push_back(identity(n));
  {
    // Best matrix unit.
    Index best = 0;
    double bestv = -1.0;
    for (Index j = 0; j < m.cols(); ++j) {
      const double v = snorm(unvec(m.col(j), n));
      if (v > bestv) {
        bestv = v;
        best = j;
      }
    }
    starts.push_back(unvec(ComplexVector::Unit(n * n, best), n));
  }
  CounterRng rng(opts.seed, 0x22);
  for (int r = 0; r < opts.restarts; ++r) {
    ComplexMatrix x(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) x(i, j) = Complex(rng.normal(), rng.normal());
    starts.push_back(x);
  }

  OpNorm out;
  out.witness = ComplexVector::Unit(n * n, 0);
  for (ComplexMatrix x : starts) {
    const double nx = snorm(x);
    if (nx == 0.0) continue;
    x /= nx;
    for (int it = 0; it < opts.max_iter; ++it) {
      const ComplexMatrix y = unvec(m * vec(x), n);
      const double val = snorm(y);
      if (val > out.lower) {
        out.lower = val;
        out.witness = vec(x);
      }
      if (val == 0.0) break;
      // Norming functional of y lives in S^q; pull back with the adjoint.
      const ComplexMatrix z = schatten_dual(y, p);
      const ComplexMatrix g = unvec(m.adjoint() * vec(z), n);
      Eigen::JacobiSVD<ComplexMatrix> sg(g);
      const double gq = schatten_from_values(sg.singularValues(), q);
      const double gx = std::real(vec(g).dot(vec(x)));
      if (gq <= gx * (1.0 + 1e-14)) break;
      x = schatten_dual(g, q);
    }
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// SpaceModel
// ---------------------------------------------------------------------------

SpaceModel::SpaceModel(Hilbert h) : v_(h) { validate(); }
SpaceModel::SpaceModel(LpWeighted l) : v_(std::move(l)) { validate(); }
SpaceModel::SpaceModel(SchattenP s) : v_(s) { validate(); }
SpaceModel::SpaceModel(SupSeq s) : v_(s) { validate(); }

void SpaceModel::validate() const {
  if (const auto* h = std::get_if<Hilbert>(&v_)) {
    if (h->dim < 1) throw DomainError("Hilbert model needs dim >= 1");
  } else if (const auto* l = std::get_if<LpWeighted>(&v_)) {
    if (!(l->p > 1.0) || std::isinf(l->p)) throw DomainError("LpWeighted needs 1 < p < inf");
    if (l->weights.empty()) throw DomainError("LpWeighted needs at least one weight");
    for (double w : l->weights)
      if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("LpWeighted weights must be positive");
  } else if (const auto* s = std::get_if<SchattenP>(&v_)) {
    if (!(s->p >= 1.0) || std::isinf(s->p)) throw DomainError("SchattenP needs 1 <= p < inf");
    if (s->n < 1) throw DomainError("SchattenP needs n >= 1");
  } else if (const auto* u = std::get_if<SupSeq>(&v_)) {
    if (u->dim < 1) throw DomainError("SupSeq needs dim >= 1");
  }
}

Index SpaceModel::state_dim() const {
  return std::visit(
      [](const auto& s) -> Index {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, LpWeighted>)
          return static_cast<Index>(s.weights.size());
        else if constexpr (std::is_same_v<S, SchattenP>)
          return s.n * s.n;
        else
          return s.dim;
      },
      v_);
}

double SpaceModel::exponent() const {
  if (is<Hilbert>()) return 2.0;
  if (is<LpWeighted>()) return as<LpWeighted>().p;
  if (is<SchattenP>()) return as<SchattenP>().p;
  return std::numeric_limits<double>::infinity();
}

bool SpaceModel::is_euclidean() const {
  if (is<Hilbert>()) return true;
  if (is<SchattenP>()) return as<SchattenP>().p == 2.0;
  if (is<LpWeighted>()) {
    const auto& l = as<LpWeighted>();
    return l.p == 2.0 && std::all_of(l.weights.begin(), l.weights.end(), [](double w) { return w == 1.0; });
  }
  return false;
}

SpaceModel SpaceModel::dual() const {
  if (is<Hilbert>()) return *this;
  if (is<LpWeighted>()) {
    const auto& l = as<LpWeighted>();
    const double q = conjugate_exponent(l.p);
    std::vector<double> w(l.weights.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::pow(l.weights[i], 1.0 - q);
    return SpaceModel(LpWeighted{q, std::move(w)});
  }
  if (is<SchattenP>()) {
    const auto& s = as<SchattenP>();
    if (s.p == 1.0) throw DomainError("dual of S^1 (S^inf) is not a supported model");
    return SpaceModel(SchattenP{conjugate_exponent(s.p), s.n});
  }
  throw DomainError("dual of SupSeq (l^1) is not a supported model");
}

std::string SpaceModel::name() const {
  std::ostringstream os;
  if (is<Hilbert>()) {
    os << "hilbert:" << as<Hilbert>().dim;
  } else if (is<LpWeighted>()) {
    const auto& l = as<LpWeighted>();
    os << "lp:" << l.p << ":" << l.weights.size();
  } else if (is<SchattenP>()) {
    const auto& s = as<SchattenP>();
    os << "schatten:" << s.p << ":" << s.n;
  } else {
    os << "sup:" << as<SupSeq>().dim;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// helpers
// ---------------------------------------------------------------------------

ComplexMatrix identity(Index n) { return ComplexMatrix::Identity(n, n); }

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw ShapeError(os.str());
  }
}

bool all_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!all_finite(m)) throw DomainError(std::string(what) + ": matrix has non-finite entries");
}

ComplexVector vec(const ComplexMatrix& x) {
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

ComplexMatrix unvec(const ComplexVector& v, Index n) {
  if (v.size() != n * n) throw ShapeError("unvec: length is not n^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

ComplexVector as_state(const ComplexMatrix& x, const SpaceModel& space) {
  const Index d = space.state_dim();
  if (space.is<SchattenP>()) {
    const Index n = space.as<SchattenP>().n;
    if (x.rows() == n && x.cols() == n) return vec(x);
  }
  if (x.size() == d && (x.cols() == 1 || x.rows() == 1)) return vec(x);
  std::ostringstream os;
  os << "state of shape " << x.rows() << "x" << x.cols() << " does not fit " << space.name();
  throw ShapeError(os.str());
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

RealVector hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  const RealVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix random_gaussian(Index rows, Index cols, CounterRng& rng) {
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
  return m;
}

ComplexMatrix random_real_gaussian(Index rows, Index cols, CounterRng& rng) {
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(rng.normal(), 0.0);
  return m;
}

ComplexMatrix random_unitary(Index n, CounterRng& rng) {
  const ComplexMatrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) q.col(j) *= unit_phase(r(j, j)) == Complex(0.0) ? Complex(1.0) : unit_phase(r(j, j));
  return q;
}

double spectral_radius(const ComplexMatrix& m) {
  const Spectrum s = eig(m);
  return s.eigenvalues.size() ? s.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
}

// ---------------------------------------------------------------------------
// eig / solve / svd
// ---------------------------------------------------------------------------

Spectrum eig(const ComplexMatrix& m, bool want_vectors) {
  require_square(m, "eig");
  require_finite(m, "eig");
  const Index n = m.rows();
  Eigen::ComplexSchur<ComplexMatrix> schur(n);
  schur.setMaxIterations(100 * n);
  schur.compute(m, true);
  if (schur.info() != Eigen::Success) {
    std::ostringstream os;
    os << "eig: shifted QR did not converge within " << 100 * n << " iterations";
    throw ConvergenceError(os.str());
  }
  const ComplexMatrix& tri = schur.matrixT();
  const ComplexMatrix& u = schur.matrixU();

  // Eigenvectors of the triangular factor by back substitution.
  const double guard = std::max(tri.norm(), 1.0) * std::numeric_limits<double>::epsilon();
  ComplexMatrix y = ComplexMatrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    const Complex lambda = tri(k, k);
    y(k, k) = 1.0;
    for (Index i = k - 1; i >= 0; --i) {
      Complex s = 0.0;
      for (Index j = i + 1; j <= k; ++j) s += tri(i, j) * y(j, k);
      Complex d = tri(i, i) - lambda;
      if (std::abs(d) < guard) d = guard;
      y(i, k) = -s / d;
    }
  }
  ComplexMatrix v = u * y;
  for (Index k = 0; k < n; ++k) v.col(k).normalize();

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    const Complex la = tri(a, a), lb = tri(b, b);
    if (la.real() != lb.real()) return la.real() > lb.real();
    return la.imag() > lb.imag();
  });

  Spectrum out;
  out.eigenvalues.resize(n);
  ComplexMatrix vs(n, n);
  for (Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = tri(order[k], order[k]);
    vs.col(k) = v.col(order[k]);
  }
  const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(vs).singularValues();
  // Numerically dependent eigenvectors mean a defective matrix.
  const bool dependent = !(sv(n - 1) > static_cast<double>(n) * std::numeric_limits<double>::epsilon() * sv(0));
  out.condition = dependent ? std::numeric_limits<double>::infinity() : sv(0) / sv(n - 1);
  if (want_vectors) out.eigenvectors = std::move(vs);
  return out;
}

ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& b, const SolveOptions& opts) {
  require_square(m, "solve");
  if (b.rows() != m.rows()) throw ShapeError("solve: right-hand side has the wrong number of rows");
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  double rcond = lu.rcond();
  const double umin = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (!(umin > 0.0) || !std::isfinite(rcond)) rcond = 0.0;
  if (!(rcond >= opts.rcond_min)) {
    std::ostringstream os;
    os << "solve: matrix is singular to working precision (rcond = " << rcond << ")";
    throw SingularMatrixError(os.str(), rcond);
  }
  ComplexMatrix x = lu.solve(b);
  x += lu.solve(b - m * x);
  const double bn = b.norm();
  const double res = (m * x - b).norm();
  if (!(res <= opts.residual_tol * bn) && bn > 0.0) {
    std::ostringstream os;
    os << "solve: residual " << res << " exceeds " << opts.residual_tol << " * ||B|| (rcond = " << rcond << ")";
    throw ConvergenceError(os.str());
  }
  return x;
}

SvdResult svd(const ComplexMatrix& m, bool want_factors) {
  SvdResult out;
  if (m.size() == 0) {
    out.values = RealVector();
    return out;
  }
  if (want_factors) {
    Eigen::JacobiSVD<ComplexMatrix> s(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.values = s.singularValues();
    out.u = s.matrixU();
    out.v = s.matrixV();
  } else {
    out.values = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  }
  return out;
}

double norm2(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}

// ---------------------------------------------------------------------------
// norms
// ---------------------------------------------------------------------------

double vec_norm(const ComplexMatrix& x, const SpaceModel& space) {
  const ComplexVector v = as_state(x, space);
  if (space.is<Hilbert>()) return v.norm();
  if (space.is<SupSeq>()) return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  if (space.is<LpWeighted>()) {
    const auto& l = space.as<LpWeighted>();
    ComplexVector scaled(v.size());
    for (Index i = 0; i < v.size(); ++i) scaled(i) = v(i) * std::pow(l.weights[static_cast<std::size_t>(i)], 1.0 / l.p);
    return pnorm(scaled, l.p);
  }
  const auto& s = space.as<SchattenP>();
  if (s.p == 2.0) return v.norm();
  return schatten_from_values(Eigen::JacobiSVD<ComplexMatrix>(unvec(v, s.n)).singularValues(), s.p);
}

OpNorm op_norm(const ComplexMatrix& m, const SpaceModel& space, const OpNormOptions& opts) {
  const Index d = space.state_dim();
  if (m.rows() != d || m.cols() != d) {
    std::ostringstream os;
    os << "op_norm: operator is " << m.rows() << "x" << m.cols() << " but " << space.name() << " has dimension " << d;
    throw ShapeError(os.str());
  }
  OpNorm out;
  if (space.is<Hilbert>() || (space.is<SchattenP>() && space.as<SchattenP>().p == 2.0)) {
    Eigen::JacobiSVD<ComplexMatrix> s(m, Eigen::ComputeThinV);
    out.lower = out.upper = s.singularValues()(0);
    out.exact = true;
    out.witness = s.matrixV().col(0);
    return out;
  }
  if (space.is<SupSeq>()) {
    // Max row sum is attained by the phase vector of the heaviest row.
    const RealVector rows = m.cwiseAbs().rowwise().sum();
    Index r = 0;
    rows.maxCoeff(&r);
    out.lower = out.upper = rows(r);
    out.exact = true;
    out.witness.resize(d);
    for (Index j = 0; j < d; ++j) {
      const Complex ph = unit_phase(m(r, j));
      out.witness(j) = ph == Complex(0.0) ? Complex(1.0) : std::conj(ph);
    }
    return out;
  }
  if (space.is<LpWeighted>()) {
    const auto& l = space.as<LpWeighted>();
    RealVector scale(d);
    for (Index i = 0; i < d; ++i) scale(i) = std::pow(l.weights[static_cast<std::size_t>(i)], 1.0 / l.p);
    // Isometric change of variables to unweighted l^p.
    const ComplexMatrix b = scale.cast<Complex>().asDiagonal() * m * scale.cwiseInverse().cast<Complex>().asDiagonal();
    if (l.p == 2.0) {
      Eigen::JacobiSVD<ComplexMatrix> s(b, Eigen::ComputeThinV);
      out.lower = out.upper = s.singularValues()(0);
      out.exact = true;
      out.witness = scale.cwiseInverse().cast<Complex>().asDiagonal() * s.matrixV().col(0);
      return out;
    }
    out = lp_ascent(b, l.p, opts);
    out.witness = scale.cwiseInverse().cast<Complex>().asDiagonal() * out.witness;
    const double n1 = b.cwiseAbs().colwise().sum().maxCoeff();
    const double ninf = b.cwiseAbs().rowwise().sum().maxCoeff();
    out.upper = std::pow(n1, 1.0 / l.p) * std::pow(ninf, 1.0 - 1.0 / l.p);
    out.exact = false;
    if (out.lower > out.upper) out.upper = out.lower;  // rounding only
    return out;
  }
  const auto& s = space.as<SchattenP>();
  out = schatten_ascent(m, s.p, s.n, opts);
  const double interp = norm2(m) * std::pow(static_cast<double>(s.n), std::abs(0.5 - 1.0 / s.p));
  double tri = 0.0;
  for (Index j = 0; j < d; ++j)
    tri += schatten_from_values(Eigen::JacobiSVD<ComplexMatrix>(unvec(m.col(j), s.n)).singularValues(), s.p);
  out.upper = std::min(interp, tri);
  out.exact = false;
  if (out.lower > out.upper) out.upper = out.lower;
  return out;
}

std::vector<ComplexMatrix> mat_power_seq(const ComplexMatrix& t, int n) {
  require_square(t, "mat_power_seq");
  if (n < 0) throw DomainError("mat_power_seq: N must be >= 0");
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(identity(t.rows()));
  for (int k = 1; k <= n; ++k) {
    out.push_back(out.back() * t);
    if (!all_finite(out.back())) {
      std::ostringstream os;
      os << "mat_power_seq: T^" << k << " overflowed";
      throw OverflowError(os.str(), k);
    }
  }
  return out;
}

}  // namespace numlin
}  // namespace rittcalc
