#include "rittcalc/sqfun.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

#include "rittcalc/errors.hpp"
#include "rittcalc/ritt.hpp"
#include "rittcalc/stolz.hpp"

namespace rittcalc::sqfun {

using namespace numlin;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Splitting C^n = Ker (I - T)^c + Ran (I - T)^c at the eigenvalue-1 cluster.
struct Fitting {
  int cluster = 0;
  double rho_eff = 0.0;      // spectral radius off the cluster
  ComplexMatrix p_unit;      // projection onto the generalized 1-eigenspace
  ComplexMatrix range;       // orthonormal basis of the complement
};

Fitting fitting(const ComplexMatrix& t) {
  const Index n = t.rows();
  const ComplexVector ev = eig(t).eigenvalues;
  const double tol = ritt::kUnitClusterTol * (1.0 + norm2(t));
  Fitting f;
  for (Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i) - 1.0) <= tol)
      ++f.cluster;
    else
      f.rho_eff = std::max(f.rho_eff, std::abs(ev(i)));
  }
  if (f.cluster == 0) {
    f.p_unit = ComplexMatrix::Zero(n, n);
    f.range = identity(n);
    return f;
  }
  ComplexMatrix a = identity(n);
  for (int i = 0; i < f.cluster; ++i) a = a * (identity(n) - t);
  Eigen::JacobiSVD<ComplexMatrix> s(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Index c = f.cluster;
  const ComplexMatrix k = s.matrixV().rightCols(c);
  f.range = s.matrixU().leftCols(n - c);
  ComplexMatrix basis(n, n);
  basis << k, f.range;
  const ComplexMatrix inv = basis.partialPivLu().inverse();
  f.p_unit = k * inv.topRows(c);
  return f;
}

ComplexMatrix one_minus_pow(const ComplexMatrix& t, int m) {
  const ComplexMatrix d = identity(t.rows()) - t;
  ComplexMatrix out = identity(t.rows());
  for (int i = 0; i < m; ++i) out = out * d;
  return out;
}

double weight(int k, int m) { return std::pow(static_cast<double>(k), 2 * m - 1); }

// First k >= 2 at which k^(2m-1) ||T^(k-1) y||^2 increases.
long first_increase(const ComplexMatrix& t, ComplexMatrix y, int m) {
  double prev = y.squaredNorm();
  for (int k = 2; k <= 1000; ++k) {
    y = t * y;
    const double cur = weight(k, m) * y.squaredNorm();
    if (!std::isfinite(cur) || cur > prev * (1.0 + 1e-12) + 1e-300) return k;
    prev = cur;
  }
  return 2;
}

// Running estimate of C in a_k <= C rho^(k-1), and the tail it implies.
class GeometricTail {
 public:
  GeometricTail(double rho_eff, int m, bool squared)
      : log_rho_(std::log(std::pow(std::max(rho_eff, 0.1), 0.9))), m_(m), squared_(squared) {}

  void observe(int k, double a) {
    if (a > 0.0) log_c_ = std::max(log_c_, std::log(a) - (k - 1) * log_rho_);
  }

  // squared: sum_{j>N} j^(2m-1) C^2 rho^(2(j-1)); otherwise
  // sum_{j>N} j^(m-1/2) C rho^(j-1).
  double tail(int n) const {
    if (log_c_ == -kInf) return 0.0;
    const double e = squared_ ? 2 * m_ - 1 : m_ - 0.5;
    const double lr = squared_ ? 2.0 * log_rho_ : log_rho_;
    const double lc = squared_ ? 2.0 * log_c_ : log_c_;
    const double peak = e / -lr;
    double sum = 0.0;
    for (long j = n + 1; j < n + 10000000L; ++j) {
      const double term = std::exp(lc + e * std::log(static_cast<double>(j)) + (j - 1) * lr);
      sum += term;
      if (j > peak && term <= 1e-18 * sum) break;
    }
    return sum;
  }

 private:
  double log_rho_;
  double log_c_ = -kInf;
  int m_;
  bool squared_;
};

bool check_point(int k) { return k <= 8 || k % 32 == 0; }

// Schatten p-norm of S^(1/2) for positive S.
double psd_sqrt_schatten(const ComplexMatrix& s, double p) {
  const RealVector mu = hermitian_eigenvalues(s);
  if (std::isinf(p)) return std::sqrt(std::max(0.0, mu.maxCoeff()));
  double acc = 0.0;
  for (Index i = 0; i < mu.size(); ++i) acc += std::pow(std::max(0.0, mu(i)), p / 2.0);
  return std::pow(acc, 1.0 / p);
}

// Norm of a single term, or an upper bound for it that is cheap to compute.
double term_norm(const ComplexVector& v, const SpaceModel& space) {
  if (space.is<SchattenP>()) {
    const auto& s = space.as<SchattenP>();
    return std::pow(static_cast<double>(s.n), std::max(0.0, 1.0 / s.p - 0.5)) * v.norm();
  }
  return vec_norm(v, space);
}

// Accumulates sum_k c_k |y_k|^2 in the lattice or operator sense.
class SquareSum {
 public:
  SquareSum(const SpaceModel& space, Side side) : space_(space), side_(side) {
    if (space.is<SchattenP>()) {
      const Index n = space.as<SchattenP>().n;
      s_ = ComplexMatrix::Zero(n, n);
    } else {
      pointwise_ = RealVector::Zero(space.state_dim());
    }
  }

  void add(double c, const ComplexVector& y) {
    if (space_.is<Hilbert>()) {
      scalar_ += c * y.squaredNorm();
    } else if (space_.is<SchattenP>()) {
      const ComplexMatrix m = unvec(y, space_.as<SchattenP>().n);
      s_ += c * (side_ == Side::column ? ComplexMatrix(m.adjoint() * m) : ComplexMatrix(m * m.adjoint()));
    } else {
      pointwise_ += c * y.cwiseAbs2();
    }
  }

  double value() const {
    if (space_.is<Hilbert>()) return std::sqrt(scalar_);
    if (space_.is<SchattenP>()) return psd_sqrt_schatten(s_, space_.as<SchattenP>().p);
    const ComplexVector r = pointwise_.cwiseSqrt().cast<Complex>();
    return vec_norm(r, space_);
  }

 private:
  const SpaceModel& space_;
  Side side_;
  double scalar_ = 0.0;
  RealVector pointwise_;
  ComplexMatrix s_;
};

void check_operator(const ComplexMatrix& t, const SpaceModel& space, const char* what) {
  require_square(t, what);
  require_finite(t, what);
  if (t.rows() != space.state_dim()) {
    std::ostringstream os;
    os << what << ": operator is " << t.rows() << "x" << t.cols() << " but " << space.name() << " has dimension "
       << space.state_dim();
    throw ShapeError(os.str());
  }
}

// Stein equation X - A* X A = Q for spectral radius of A below 1.
ComplexMatrix stein(const ComplexMatrix& a, const ComplexMatrix& q) {
  const Index r = a.rows();
  if (r == 0) return q;
  if (r <= 40) {
    const ComplexMatrix at = a.transpose(), ah = a.adjoint();
    ComplexMatrix k = ComplexMatrix::Identity(r * r, r * r);
    for (Index i = 0; i < r; ++i)
      for (Index j = 0; j < r; ++j) k.block(i * r, j * r, r, r) -= at(i, j) * ah;
    const ComplexVector x = solve(k, vec(q));
    return unvec(x, r);
  }
  // Smith doubling.
  ComplexMatrix x = q, p = a;
  for (int it = 0; it < 64 && p.norm() > 1e-18; ++it) {
    x += p.adjoint() * x * p;
    p = p * p;
  }
  return x;
}

struct SeriesSetup {
  Fitting fit;
  ComplexMatrix b1;  // (I - T)^m with the 1-eigenspace removed
};

SeriesSetup series_setup(const ComplexMatrix& t, int m, const char* what) {
  if (m < 1) throw DomainError(std::string(what) + ": m must be at least 1");
  SeriesSetup s{fitting(t), {}};
  const ComplexMatrix d = one_minus_pow(t, m);
  if (s.fit.rho_eff >= 1.0) {
    std::ostringstream os;
    os << what << ": spectral radius off Ker(I - T) is " << s.fit.rho_eff << " >= 1";
    throw DivergenceError(os.str(), first_increase(t, d, m));
  }
  const double leak = (d * s.fit.p_unit).norm();
  if (leak > 1e-9 * std::max(1.0, d.norm())) {
    std::ostringstream os;
    os << what << ": eigenvalue 1 has a Jordan block longer than m = " << m;
    throw DomainError(os.str());
  }
  s.b1 = d * (identity(t.rows()) - s.fit.p_unit);
  return s;
}

}  // namespace

SFReport square_function(const ComplexMatrix& t, const ComplexMatrix& x, const SpaceModel& space, const SFConfig& cfg) {
  check_operator(t, space, "square_function");
  if (cfg.m < 1) throw DomainError("square_function: m must be at least 1");
  if (!(cfg.tail_tol > 0.0)) throw DomainError("square_function: tail_tol must be positive");
  if (cfg.n_max < 1) throw DomainError("square_function: n_max must be at least 1");
  const ComplexVector x0 = as_state(x, space);
  const int m = cfg.m;

  const Fitting fit = fitting(t);
  const ComplexVector raw = one_minus_pow(t, m) * x0;
  const ComplexVector leak = fit.p_unit * raw;
  const bool leaks = leak.norm() > 1e-9 * std::pow(1.0 + norm2(t), m) * x0.norm();
  if (raw.norm() > 0.0 && (fit.rho_eff >= 1.0 || leaks))
    throw DivergenceError("square_function: terms k^(2m-1) ||T^(k-1) (I - T)^m x||^2 do not decay",
                          first_increase(t, raw, m));

  SFReport out;
  SquareSum sum(space, cfg.side);
  const bool hilbert = space.is<Hilbert>();
  GeometricTail tail(fit.rho_eff, m, hilbert);
  ComplexVector y = raw - leak;
  for (int k = 1; k <= cfg.n_max; ++k) {
    if (k > 1) y = t * y;
    const double a = term_norm(y, space);
    if (!std::isfinite(a)) throw OverflowError("square_function: non-finite term", k);
    out.terms.push_back(std::sqrt(weight(k, m)) * a);
    sum.add(weight(k, m), y);
    tail.observe(k, a);
    out.n_used = k;
    if (a == 0.0) {
      out.tail_bound = 0.0;
      break;
    }
    if (cfg.truncation == Truncation::adaptive && check_point(k)) {
      const double tb = hilbert ? std::sqrt(tail.tail(k)) : tail.tail(k);
      out.tail_bound = tb;
      if (tb <= cfg.tail_tol) break;
    }
    if (k == cfg.n_max) {
      out.tail_bound = hilbert ? std::sqrt(tail.tail(k)) : tail.tail(k);
      out.capped = cfg.truncation == Truncation::adaptive && out.tail_bound > cfg.tail_tol;
    }
  }
  out.value = sum.value();
  return out;
}

std::string terms_csv(const SFReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "k,term\n";
  for (std::size_t i = 0; i < r.terms.size(); ++i) os << i + 1 << "," << r.terms[i] << "\n";
  return os.str();
}

ComplexMatrix gram_operator(const ComplexMatrix& t, int m, const GramOptions& opts) {
  require_square(t, "gram_operator");
  require_finite(t, "gram_operator");
  const Index n = t.rows();
  const SeriesSetup s = series_setup(t, m, "gram_operator");

  if (opts.method == GramMethod::stein) {
    if (m != 1) throw DomainError("gram_operator: the Stein route is available for m = 1 only");
    const ComplexMatrix& u = s.fit.range;
    const ComplexMatrix tr = u.adjoint() * t * u;
    const ComplexMatrix w = u.adjoint() * (identity(n) - s.fit.p_unit);
    const ComplexMatrix dr = identity(tr.rows()) - tr;
    const ComplexMatrix h = hermitian_part(stein(tr, dr.adjoint() * dr));
    const ComplexMatrix gr = hermitian_part(stein(tr, h));
    return hermitian_part(w.adjoint() * gr * w);
  }

  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  ComplexMatrix b = s.b1;
  GeometricTail tail(s.fit.rho_eff, m, true);
  const double scale = std::max(1.0, s.b1.squaredNorm());
  for (int k = 1; k <= opts.n_max; ++k) {
    if (k > 1) b = t * b;
    const double a = b.norm();
    if (!std::isfinite(a)) throw OverflowError("gram_operator: non-finite term", k);
    g += weight(k, m) * (b.adjoint() * b);
    tail.observe(k, a);
    if (a == 0.0) break;
    if (check_point(k) && tail.tail(k) <= opts.tail_tol * scale) break;
  }
  return hermitian_part(g);
}

namespace {

ComplexVector random_state(Index d, CounterRng& rng) {
  ComplexVector v(d);
  for (Index i = 0; i < d; ++i) v(i) = Complex(rng.normal(), rng.normal());
  return v;
}

double sf_ratio(const ComplexMatrix& t, const ComplexVector& x, const SpaceModel& space, int m) {
  const double nx = vec_norm(x, space);
  if (nx == 0.0) return 0.0;
  SFConfig cfg;
  cfg.m = m;
  cfg.tail_tol = 1e-12 * nx;
  return square_function(t, x, space, cfg).value / nx;
}

// G X for a block X, without forming G.
class SeriesGram {
 public:
  SeriesGram(const ComplexMatrix& t, int m) : t_(t), m_(m), setup_(series_setup(t, m, "sf_constant_search")) {
    ComplexMatrix b = setup_.b1;
    GeometricTail tail(setup_.fit.rho_eff, m, true);
    const double scale = std::max(1.0, b.squaredNorm());
    for (n_ = 1; n_ < 200000; ++n_) {
      if (n_ > 1) b = t * b;
      const double a = b.norm();
      tail.observe(n_, a);
      if (a == 0.0 || (check_point(n_) && tail.tail(n_) <= 1e-15 * scale)) break;
    }
  }

  ComplexMatrix apply(const ComplexMatrix& x) const {
    std::vector<ComplexMatrix> d(static_cast<std::size_t>(n_));
    d[0] = setup_.b1 * x;
    for (int k = 1; k < n_; ++k) d[static_cast<std::size_t>(k)] = t_ * d[static_cast<std::size_t>(k - 1)];
    ComplexMatrix z = weight(n_, m_) * d.back();
    for (int k = n_ - 1; k >= 1; --k) z = t_.adjoint() * z + weight(k, m_) * d[static_cast<std::size_t>(k - 1)];
    return setup_.b1.adjoint() * z;
  }

 private:
  const ComplexMatrix& t_;
  int m_;
  SeriesSetup setup_;
  int n_ = 1;
};

ComplexMatrix orthonormalize(const ComplexMatrix& y) {
  Eigen::HouseholderQR<ComplexMatrix> qr(y);
  return qr.householderQ() * ComplexMatrix::Identity(y.rows(), y.cols());
}

}  // namespace

SFConstant sf_constant(const ComplexMatrix& t, int m, const SpaceModel& space, std::uint64_t seed, int trials) {
  check_operator(t, space, "sf_constant");
  if (!space.is<Hilbert>()) return sf_constant_search(t, m, space, seed, trials);
  GramOptions go;
  if (m == 1 && t.rows() <= 40) go.method = GramMethod::stein;
  const ComplexMatrix g = gram_operator(t, m, go);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(g);
  SFConstant out;
  const Index top = g.rows() - 1;
  out.value = std::sqrt(std::max(0.0, es.eigenvalues()(top)));
  out.witness = es.eigenvectors().col(top);
  out.exact = true;
  out.tested = 1;
  return out;
}

SFConstant sf_constant_search(const ComplexMatrix& t, int m, const SpaceModel& space, std::uint64_t seed,
                              int trials) {
  check_operator(t, space, "sf_constant_search");
  const Index d = space.state_dim();
  CounterRng rng(seed);
  SFConstant out;
  auto consider = [&](const ComplexVector& x) {
    const double r = sf_ratio(t, x, space, m);
    ++out.tested;
    if (r > out.value || out.witness.size() == 0) {
      out.value = r;
      out.witness = x / vec_norm(x, space);
    }
  };
  for (Index i = 0; i < d; ++i) consider(ComplexVector::Unit(d, i));
  for (int i = 0; i < trials; ++i) consider(random_state(d, rng));

  double step = 0.5;
  int fails = 0;
  for (int it = 0; it < 200 && step > 1e-6; ++it) {
    ComplexVector x = out.witness + step * random_state(d, rng) / std::sqrt(2.0 * static_cast<double>(d));
    const double before = out.value;
    consider(x);
    if (out.value > before) {
      fails = 0;
    } else if (++fails >= 8) {
      step *= 0.5;
      fails = 0;
    }
  }

  if (space.is<Hilbert>() && d > 0) {
    const SeriesGram g(t, m);
    const Index b = std::min<Index>(d, 6);
    ComplexMatrix x(d, b);
    x.col(0) = out.witness;
    for (Index j = 1; j < b; ++j) x.col(j) = random_state(d, rng);
    x = orthonormalize(x);
    double theta = 0.0;
    int settled = 0;
    ComplexVector best = x.col(0);
    for (int it = 0; it < 5000 && settled < 3; ++it) {
      const ComplexMatrix y = g.apply(x);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(x.adjoint() * y));
      const double next = es.eigenvalues()(b - 1);
      best = x * es.eigenvectors().col(b - 1);
      settled = std::abs(next - theta) <= 1e-15 * std::max(next, 1e-300) ? settled + 1 : 0;
      theta = next;
      if (y.norm() == 0.0) break;
      x = orthonormalize(y * es.eigenvectors());
    }
    ++out.tested;
    const double v = std::sqrt(std::max(0.0, theta));
    if (v > out.value) {
      out.value = v;
      out.witness = best / best.norm();
    }
  }
  return out;
}

RadEstimate rad_norm(const std::vector<ComplexMatrix>& xs, const SpaceModel& space, const RadOptions& opts) {
  const std::size_t k = xs.size();
  std::vector<ComplexVector> v;
  v.reserve(k);
  for (const auto& x : xs) v.push_back(as_state(x, space));
  RadEstimate out;
  if (k == 0) return out;
  const bool exact = opts.mode == RadMode::exact || (opts.mode == RadMode::automatic && k <= 16);
  if (exact) {
    if (k > 20) throw DomainError("rad_norm: exact enumeration needs at most 20 terms");
    // The average is invariant under a global sign change, so eps_1 = +1.
    ComplexVector s = ComplexVector::Zero(space.state_dim());
    for (const auto& x : v) s += x;
    std::vector<int> sign(k, 1);
    const std::uint64_t patterns = std::uint64_t{1} << (k - 1);
    double acc = 0.0;
    for (std::uint64_t i = 0; i < patterns; ++i) {
      if (i > 0) {
        const std::size_t j = static_cast<std::size_t>(std::countr_zero(i)) + 1;
        s -= 2.0 * sign[j] * v[j];
        sign[j] = -sign[j];
      }
      const double nrm = vec_norm(s, space);
      acc += nrm * nrm;
    }
    out.value = std::sqrt(acc / static_cast<double>(patterns));
    out.samples = static_cast<int>(patterns);
    return out;
  }
  if (opts.samples < 2) throw DomainError("rad_norm: Monte Carlo needs at least 2 samples");
  CounterRng rng(opts.seed);
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < opts.samples; ++i) {
    ComplexVector s = ComplexVector::Zero(space.state_dim());
    for (const auto& x : v) s += static_cast<double>(rng.sign()) * x;
    const double nrm = vec_norm(s, space);
    const double q = nrm * nrm;
    const double delta = q - mean;
    mean += delta / (i + 1);
    m2 += delta * (q - mean);
  }
  out.exact = false;
  out.samples = opts.samples;
  out.seed = opts.seed;
  out.value = std::sqrt(mean);
  const double se_q = std::sqrt(m2 / (opts.samples - 1) / opts.samples);
  out.std_error = out.value > 0.0 ? se_q / (2.0 * out.value) : 0.0;
  return out;
}

double khintchine_ratio(const std::vector<ComplexMatrix>& xs, const SpaceModel& space, const RadOptions& opts) {
  if (!space.is<Hilbert>() && !space.is<LpWeighted>())
    throw DomainError("khintchine_ratio: needs a Hilbert or LpWeighted model");
  RealVector s = RealVector::Zero(space.state_dim());
  for (const auto& x : xs) s += as_state(x, space).cwiseAbs2();
  const double den = vec_norm(ComplexVector(s.cwiseSqrt().cast<Complex>()), space);
  const double num = rad_norm(xs, space, opts).value;
  if (den == 0.0) return 1.0;
  return num / den;
}

std::pair<double, double> khintchine_bounds(double p, bool real_coefficients) {
  if (!(p >= 1.0) || std::isinf(p)) throw DomainError("khintchine_bounds: p must lie in [1, inf)");
  const double gauss = std::sqrt(2.0) * std::pow(std::tgamma((p + 1.0) / 2.0) / std::sqrt(M_PI), 1.0 / p);
  if (p >= 2.0) {
    const double upper = real_coefficients ? gauss : std::sqrt(2.0) * std::pow(2.0, -1.0 / p) * gauss;
    return {1.0, upper};
  }
  const double lower =
      real_coefficients ? std::min(std::pow(2.0, 0.5 - 1.0 / p), gauss) : std::pow(3.0, -(2.0 - p) / (2.0 * p));
  return {lower, std::sqrt(2.0)};
}

namespace {

double schatten_norm(const ComplexMatrix& m, double p) {
  const RealVector sv = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  if (std::isinf(p)) return sv.size() ? sv(0) : 0.0;
  double acc = 0.0;
  for (Index i = 0; i < sv.size(); ++i) acc += std::pow(sv(i), p);
  return std::pow(acc, 1.0 / p);
}

Index common_size(const std::vector<ComplexMatrix>& xs) {
  if (xs.empty()) throw ShapeError("nc_khintchine: empty family");
  const Index n = xs.front().rows();
  for (const auto& x : xs)
    if (x.rows() != n || x.cols() != n) throw ShapeError("nc_khintchine: family must consist of equal square matrices");
  return n;
}

}  // namespace

NcKhintchine nc_khintchine(const std::vector<ComplexMatrix>& xs, double p, const RadOptions& opts) {
  const Index n = common_size(xs);
  ComplexMatrix col = ComplexMatrix::Zero(n, n), row = col;
  for (const auto& x : xs) {
    col += x.adjoint() * x;
    row += x * x.adjoint();
  }
  NcKhintchine out;
  out.rad = rad_norm(xs, SpaceModel::schatten(p, n), opts).value;
  out.column = psd_sqrt_schatten(col, p);
  out.row = psd_sqrt_schatten(row, p);
  if (p >= 2.0) {
    out.estimate = std::max(out.column, out.row);
  } else {
    // Candidates x = u + v: all in u, all in v, half each.
    out.estimate = std::min({out.column, out.row, 0.5 * (out.column + out.row)});
    out.optimal = false;
  }
  return out;
}

NcKhintchine nc_khintchine2(const std::vector<std::vector<ComplexMatrix>>& xs, double p) {
  const std::size_t nf = xs.size();
  if (nf == 0 || nf > 6) throw DomainError("nc_khintchine2: need between 1 and 6 indices");
  std::vector<ComplexMatrix> flat;
  for (const auto& r : xs) {
    if (r.size() != nf) throw ShapeError("nc_khintchine2: family must be square");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  const Index n = common_size(flat);
  const Index ni = static_cast<Index>(nf);
  ComplexMatrix col = ComplexMatrix::Zero(n, n), row = col;
  ComplexMatrix block(ni * n, ni * n), block_t(ni * n, ni * n);
  for (Index i = 0; i < ni; ++i)
    for (Index j = 0; j < ni; ++j) {
      const ComplexMatrix& x = xs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      col += x.adjoint() * x;
      row += x * x.adjoint();
      block.block(i * n, j * n, n, n) = x;
      block_t.block(j * n, i * n, n, n) = x;
    }
  const int patterns = 1 << nf;
  double acc = 0.0;
  for (int a = 0; a < patterns; ++a)
    for (int b = 0; b < patterns; ++b) {
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      for (std::size_t i = 0; i < nf; ++i)
        for (std::size_t j = 0; j < nf; ++j) {
          const double e = (((a >> i) & 1) ? -1.0 : 1.0) * (((b >> j) & 1) ? -1.0 : 1.0);
          s += e * xs[i][j];
        }
      const double v = schatten_norm(s, p);
      acc += v * v;
    }
  NcKhintchine out;
  out.rad = std::sqrt(acc / (static_cast<double>(patterns) * patterns));
  out.column = psd_sqrt_schatten(col, p);
  out.row = psd_sqrt_schatten(row, p);
  out.block = schatten_norm(block, p);
  out.block_t = schatten_norm(block_t, p);
  if (p >= 2.0) {
    out.estimate = std::max({out.column, out.row, out.block, out.block_t});
  } else {
    const double quarter = 0.25 * (out.column + out.row + out.block + out.block_t);
    out.estimate = std::min({out.column, out.row, out.block, out.block_t, quarter});
    out.optimal = false;
  }
  return out;
}

RBoundEstimate r_bound_lower(const std::vector<ComplexMatrix>& ts, const SpaceModel& space, const RBoundOptions& opts) {
  RBoundEstimate out;
  if (ts.empty()) return out;
  for (const auto& t : ts) check_operator(t, space, "r_bound_lower");
  const Index d = space.state_dim();
  const std::size_t k = ts.size();
  CounterRng rng(opts.seed);
  std::vector<ComplexVector> best;

  auto consider = [&](const std::vector<ComplexVector>& xs) {
    std::vector<ComplexMatrix> in(xs.begin(), xs.end()), img;
    for (std::size_t i = 0; i < k; ++i) img.emplace_back(ts[i] * xs[i]);
    const RadEstimate den = rad_norm(in, space, opts.rad);
    if (den.value == 0.0) return;
    const RadEstimate num = rad_norm(img, space, opts.rad);
    const double r = num.value / den.value;
    ++out.tested;
    if (r > out.value) {
      out.value = r;
      const double rel_n = num.value > 0 ? num.std_error / num.value : 0.0, rel_d = den.std_error / den.value;
      out.std_error = r * std::hypot(rel_n, rel_d);
      best = xs;
    }
  };

  for (std::size_t i = 0; i < k; ++i) {
    std::vector<ComplexVector> xs(k, ComplexVector::Zero(d));
    xs[i] = op_norm(ts[i], space).witness;
    if (xs[i].size() == d) consider(xs);
  }
  for (int trial = 0; trial < opts.trials; ++trial) {
    std::vector<ComplexVector> xs;
    for (std::size_t i = 0; i < k; ++i) xs.push_back(random_state(d, rng));
    consider(xs);
  }
  double step = 0.5;
  int fails = 0;
  for (int it = 0; it < opts.polish_steps && step > 1e-6 && !best.empty(); ++it) {
    double scale = 0.0;
    for (const auto& x : best) scale = std::max(scale, x.norm());
    std::vector<ComplexVector> xs = best;
    for (auto& x : xs) x += step * scale * random_state(d, rng) / std::sqrt(2.0 * static_cast<double>(d));
    const double before = out.value;
    consider(xs);
    if (out.value > before) {
      fails = 0;
    } else if (++fails >= 8) {
      step *= 0.5;
      fails = 0;
    }
  }
  return out;
}

namespace {

// sup over u in [0, 3] of f(boundary_point(gamma, u)): grid plus golden section.
template <class F>
double boundary_sup(F f, int samples) {
  if (samples < 2) throw DomainError("boundary sup: need at least 2 samples");
  double best = 0.0, best_u = 0.0;
  const double h = 3.0 / samples;
  for (int i = 0; i <= samples; ++i) {
    const double v = f(i * h);
    if (v > best) best = v, best_u = i * h;
  }
  double a = std::max(0.0, best_u - h), b = std::min(3.0, best_u + h);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a), fc = f(c), fd = f(d);
  for (int it = 0; it < 60; ++it) {
    if (fc > fd) {
      b = d, d = c, fd = fc, c = b - g * (b - a), fc = f(c);
    } else {
      a = c, c = d, fc = fd, d = a + g * (b - a), fd = f(d);
    }
  }
  return std::max({best, fc, fd});
}

}  // namespace

double boundary_l2_sup(const std::vector<funcalc::HolomorphicFn>& phis, double gamma, int samples) {
  return boundary_sup(
      [&](double u) {
        const Complex z = stolz::boundary_point(gamma, u);
        double s = 0.0;
        for (const auto& phi : phis) s += std::norm(phi(z));
        return std::sqrt(s);
      },
      samples);
}

double quadratic_calc_ratio(const ComplexMatrix& t, const std::vector<funcalc::HolomorphicFn>& phis,
                            const ComplexMatrix& x, const SpaceModel& space, double gamma,
                            const funcalc::ContourOptions& copts, const RadOptions& ropts) {
  check_operator(t, space, "quadratic_calc_ratio");
  const ComplexVector x0 = as_state(x, space);
  const double beta = funcalc::default_beta(t, gamma);
  std::vector<ComplexMatrix> ys;
  for (const auto& phi : phis) ys.emplace_back(funcalc::apply(t, phi, beta, copts) * x0);
  const double den = vec_norm(x0, space) * boundary_l2_sup(phis, gamma);
  if (den == 0.0) throw DomainError("quadratic_calc_ratio: zero denominator");
  return rad_norm(ys, space, ropts).value / den;
}

double matrix_calc_ratio(const ComplexMatrix& t, const std::vector<std::vector<funcalc::HolomorphicFn>>& phi,
                         const std::vector<ComplexMatrix>& xs, const SpaceModel& space, double gamma,
                         const funcalc::ContourOptions& copts, const RadOptions& ropts, int samples) {
  check_operator(t, space, "matrix_calc_ratio");
  const std::size_t nl = phi.size(), nj = xs.size();
  for (const auto& r : phi)
    if (r.size() != nj) throw ShapeError("matrix_calc_ratio: function matrix does not match the vector family");
  const double beta = funcalc::default_beta(t, gamma);
  std::vector<ComplexVector> x0;
  for (const auto& x : xs) x0.push_back(as_state(x, space));
  std::vector<ComplexMatrix> ys;
  for (std::size_t l = 0; l < nl; ++l) {
    ComplexVector y = ComplexVector::Zero(space.state_dim());
    for (std::size_t j = 0; j < nj; ++j) y += funcalc::apply(t, phi[l][j], beta, copts) * x0[j];
    ys.emplace_back(y);
  }
  ComplexMatrix f(static_cast<Index>(nl), static_cast<Index>(nj));
  const double sup = boundary_sup(
      [&](double u) {
        const Complex z = stolz::boundary_point(gamma, u);
        for (std::size_t l = 0; l < nl; ++l)
          for (std::size_t j = 0; j < nj; ++j) f(static_cast<Index>(l), static_cast<Index>(j)) = phi[l][j](z);
        return norm2(f);
      },
      samples);
  const double den = sup * rad_norm(xs, space, ropts).value;
  if (den == 0.0) throw DomainError("matrix_calc_ratio: zero denominator");
  return rad_norm(ys, space, ropts).value / den;
}

std::vector<funcalc::HolomorphicFn> sfe_family(int m, int count, SfeExponent exponent) {
  if (m < 1 || count < 1) throw DomainError("sfe_family: m and count must be positive");
  std::vector<funcalc::HolomorphicFn> out;
  for (int l = 1; l <= count; ++l) {
    const int e = exponent == SfeExponent::l ? l : m;
    std::vector<Complex> c(static_cast<std::size_t>(l + e), 0.0);
    double binom = 1.0;
    for (int i = 0; i <= e; ++i) {
      c[static_cast<std::size_t>(l - 1 + i)] = std::pow(static_cast<double>(l), m - 0.5) * binom * (i % 2 ? -1.0 : 1.0);
      binom = binom * (e - i) / (i + 1);
    }
    out.push_back(funcalc::HolomorphicFn::polynomial(std::move(c)).with_name("sfe_" + std::to_string(l)));
  }
  return out;
}

C512 c512_check(const ComplexMatrix& t) {
  const SpaceModel h = SpaceModel::hilbert(t.rows());
  C512 out;
  out.c1 = sf_constant(t, 1, h).value;
  out.c2 = sf_constant(t, 2, h).value;
  out.bound = std::sqrt(6.0) * out.c1 * out.c1;
  out.holds = out.c2 <= out.bound + 1e-8;
  return out;
}

}  // namespace rittcalc::sqfun
