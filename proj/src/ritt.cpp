#include "rittcalc/ritt.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rittcalc/errors.hpp"
#include "rittcalc/stolz.hpp"

namespace rittcalc::ritt {

namespace {

constexpr double kPi = M_PI;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Eigenvalues within this of 1 are candidates for the fixed space. Looser than
// kUnitClusterTol: a defective eigenvalue 1 splits by about sqrt(eps).
constexpr double kFixedClusterTol = 1e-6;

struct SeqNeeds {
  bool power = false;
  bool increment = false;
  bool decay = false;
};

// Per-n norms, index n (entry 0 unused for increment and decay).
struct Seqs {
  std::vector<double> power;
  std::vector<double> increment;
  std::array<std::vector<double>, 4> decay;
};

Seqs compute_sequences(const ComplexMatrix& t, const SpaceModel& space, int n_max, SeqNeeds need,
                       const OpNormOptions& opts) {
  numlin::require_square(t, "sequence");
  numlin::require_finite(t, "sequence");
  if (n_max < 1) throw DomainError("N must be >= 1");
  if (t.rows() != space.state_dim()) throw ShapeError("operator size does not match the space model");
  const Index n = t.rows();
  auto norm = [&](const ComplexMatrix& m) {
    if (m.cwiseAbs().maxCoeff() == 0.0) return 0.0;
    return numlin::op_norm(m, space, opts).lower;
  };
  const std::size_t len = static_cast<std::size_t>(n_max) + 1;
  Seqs s;
  if (need.power) s.power.assign(len, 0.0);
  if (need.increment) s.increment.assign(len, 0.0);
  const ComplexMatrix id = numlin::identity(n);
  std::array<ComplexMatrix, 4> a;
  a[0] = id;
  for (int j = 1; j < 4; ++j) a[j] = a[j - 1] * (id - t);
  if (need.decay)
    for (auto& d : s.decay) d.assign(len, 0.0);

  ComplexMatrix prev = id, cur = id;
  if (need.power) s.power[0] = 1.0;
  bool vanished = false;
  for (int k = 1; k <= n_max; ++k) {
    cur = prev * t;
    if (!numlin::all_finite(cur)) {
      std::ostringstream os;
      os << "T^" << k << " overflowed";
      throw OverflowError(os.str(), k);
    }
    if (vanished) continue;  // every later term is exactly zero
    const double nk = static_cast<double>(k);
    if (need.power) s.power[k] = norm(cur);
    if (need.increment) s.increment[k] = nk * norm(cur - prev);
    if (need.decay)
      for (int j = 0; j < 4; ++j) s.decay[j][k] = std::pow(nk, j) * norm(cur * a[j]);
    if (cur.cwiseAbs().maxCoeff() == 0.0) vanished = true;
    prev = cur;
  }
  return s;
}

double prefix_max(const std::vector<double>& v, int from, int to) {
  double m = 0.0;
  for (int k = from; k <= to; ++k) m = std::max(m, v[static_cast<std::size_t>(k)]);
  return m;
}

}  // namespace

OpNormOptions sequence_norm_options() {
  OpNormOptions o;
  o.restarts = 3;
  o.max_iter = 100;
  return o;
}

double power_bound(const ComplexMatrix& t, const SpaceModel& space, int n_max, const OpNormOptions& opts) {
  const Seqs s = compute_sequences(t, space, n_max, {true, false, false}, opts);
  return prefix_max(s.power, 0, n_max);
}

double increment_bound(const ComplexMatrix& t, const SpaceModel& space, int n_max, const OpNormOptions& opts) {
  const Seqs s = compute_sequences(t, space, n_max, {false, true, false}, opts);
  return prefix_max(s.increment, 1, n_max);
}

std::array<double, 4> decay_sequences(const ComplexMatrix& t, const SpaceModel& space, int n_max,
                                      const OpNormOptions& opts) {
  const Seqs s = compute_sequences(t, space, n_max, {false, false, true}, opts);
  std::array<double, 4> out{};
  for (int j = 0; j < 4; ++j) out[j] = prefix_max(s.decay[j], 1, n_max);
  return out;
}

std::optional<double> spectral_type(const ComplexMatrix& t) {
  const numlin::Spectrum sp = numlin::eig(t);
  const double tol = kUnitClusterTol * (1.0 + numlin::norm2(t));
  double alpha = 0.0;
  for (Index i = 0; i < sp.eigenvalues.size(); ++i) {
    const Complex l = sp.eigenvalues(i);
    if (std::abs(l - 1.0) <= tol) continue;
    if (std::abs(l) >= 1.0 - tol) return std::nullopt;  // on or beyond the unit circle
    const auto a = stolz::min_angle(l);
    if (!a) return std::nullopt;
    alpha = std::max(alpha, *a);
  }
  return alpha;
}

std::vector<Complex> resolvent_samples(double beta) {
  stolz::StolzParams check(beta);
  (void)check;
  std::vector<double> us;
  for (int j = 0; j <= 30; ++j) {
    us.push_back(std::ldexp(1.0, -j));
    us.push_back(3.0 - std::ldexp(1.0, -j));
  }
  for (int i = 1; i < 40; ++i) {
    us.push_back(i / 40.0);
    us.push_back(3.0 - i / 40.0);
  }
  for (int i = 0; i <= 120; ++i) us.push_back(1.0 + i / 120.0);

  std::vector<Complex> base;
  for (double u : us) base.push_back(stolz::boundary_point(beta, u));
  base.push_back(-std::sin(beta));
  base.push_back(stolz::tangent_point(beta));
  base.push_back(std::conj(stolz::tangent_point(beta)));

  std::vector<Complex> out;
  for (int k = 1; k <= 4; ++k) {
    const double f = 1.0 + std::pow(10.0, -k);
    for (const Complex& z : base) {
      const Complex l = f * z;
      if (std::abs(l - 1.0) >= 1e-8) out.push_back(l);
    }
  }
  for (double r : {2.0, 10.0})
    for (int i = 0; i < 64; ++i) out.push_back(std::polar(r, 2.0 * kPi * i / 64.0));
  return out;
}

ResolventSup resolvent_sup(const ComplexMatrix& t, double beta, const SpaceModel& space, const OpNormOptions& opts) {
  numlin::require_square(t, "resolvent_sup");
  if (t.rows() != space.state_dim()) throw ShapeError("operator size does not match the space model");
  const numlin::Spectrum sp = numlin::eig(t);
  const double tol = 1e-10 * (1.0 + numlin::norm2(t));
  const ComplexMatrix id = numlin::identity(t.rows());

  ResolventSup out;
  out.beta = beta;
  for (const Complex& l : resolvent_samples(beta)) {
    double dist = kInf;
    for (Index i = 0; i < sp.eigenvalues.size(); ++i) dist = std::min(dist, std::abs(l - sp.eigenvalues(i)));
    double v = std::numeric_limits<double>::quiet_NaN();
    if (dist > tol) {
      try {
        const ComplexMatrix r = numlin::solve(l * id - t, id);
        v = numlin::op_norm((l - 1.0) * r, space, opts).lower;
      } catch (const SingularMatrixError&) {
      } catch (const ConvergenceError&) {
      }
    }
    out.values.push_back(v);
    if (std::isnan(v)) {
      ++out.skipped;
    } else {
      ++out.sampled;
      out.value = std::max(out.value, v);
    }
  }
  return out;
}

ComplexMatrix mean_ergodic_projection(const ComplexMatrix& t) {
  numlin::require_square(t, "mean_ergodic_projection");
  numlin::require_finite(t, "mean_ergodic_projection");
  const Index n = t.rows();
  const double scale = 1.0 + numlin::norm2(t);
  const numlin::Spectrum sp = numlin::eig(t);
  Index k = 0;
  for (Index i = 0; i < n; ++i)
    if (std::abs(sp.eigenvalues(i) - 1.0) <= kFixedClusterTol * scale) ++k;
  if (k == 0) return ComplexMatrix::Zero(n, n);

  const numlin::SvdResult s = numlin::svd(numlin::identity(n) - t, true);
  // The cluster must be matched by a kernel of the same dimension.
  if (s.values(n - k) > 10.0 * kFixedClusterTol * scale)
    throw DomainError("not power bounded at 1: eigenvalue 1 is defective");
  const ComplexMatrix x = s.v->rightCols(k);  // right kernel
  const ComplexMatrix y = s.u->rightCols(k);  // left kernel
  const ComplexMatrix g = y.adjoint() * x;
  if (numlin::svd(g).values(k - 1) < 1e-6)
    throw DomainError("not power bounded at 1: eigenvalue 1 is defective");
  return x * numlin::solve(g, y.adjoint());
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ritt:
      return "ritt";
    case Verdict::not_ritt:
      return "not-ritt";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

RittReport ritt_verdict(const ComplexMatrix& t, const SpaceModel& space, const RittConfig& config) {
  numlin::require_square(t, "ritt_verdict");
  if (config.n_max < 1) throw DomainError("N must be >= 1");
  RittReport r;
  r.space = space;
  r.n_used = config.n_max;
  r.norms_exact = space.is<numlin::Hilbert>() || space.is<numlin::SupSeq>();
  r.type_alpha = spectral_type(t);

  bool refuted = false;
  if (!r.type_alpha) {
    refuted = true;
    r.reasons.push_back("spectrum not contained in any Stolz domain (eigenvalue of modulus >= 1 other than 1)");
  }

  const numlin::Spectrum sp = numlin::eig(t);
  const double scale = 1.0 + numlin::norm2(t);
  for (Index i = 0; i < sp.eigenvalues.size(); ++i)
    if (std::abs(sp.eigenvalues(i) - 1.0) <= kFixedClusterTol * scale) r.has_unit_eigenvalue = true;
  if (r.has_unit_eigenvalue) {
    try {
      mean_ergodic_projection(t);
    } catch (const DomainError& e) {
      refuted = true;
      r.reasons.push_back(e.what());
    }
  }

  const int n2 = 2 * config.n_max;
  bool stable = true;
  try {
    const Seqs s = compute_sequences(t, space, n2, {true, true, true}, config.norm_opts);
    r.power_bound = prefix_max(s.power, 0, config.n_max);
    r.power_bound_2n = prefix_max(s.power, 0, n2);
    r.increment_bound = prefix_max(s.increment, 1, config.n_max);
    r.increment_bound_2n = prefix_max(s.increment, 1, n2);
    for (int j = 0; j < 4; ++j) {
      r.decay[j] = prefix_max(s.decay[j], 1, config.n_max);
      r.decay_2n[j] = prefix_max(s.decay[j], 1, n2);
    }
    auto check = [&](const char* name, double a, double b) {
      if (b > (1.0 + config.stability_tol) * a + 1e-12) {
        stable = false;
        std::ostringstream os;
        os << name << " grows under N doubling: " << a << " -> " << b;
        r.reasons.push_back(os.str());
      }
    };
    check("power bound", r.power_bound, r.power_bound_2n);
    check("increment bound", r.increment_bound, r.increment_bound_2n);
    const char* names[4] = {"S0", "S1", "S2", "S3"};
    for (int j = 0; j < 4; ++j) check(names[j], r.decay[j], r.decay_2n[j]);
  } catch (const OverflowError& e) {
    refuted = true;
    stable = false;
    r.power_bound = r.power_bound_2n = kInf;
    r.increment_bound = r.increment_bound_2n = kInf;
    r.decay.fill(kInf);
    r.decay_2n.fill(kInf);
    r.reasons.push_back(std::string("powers are unbounded: ") + e.what());
  }

  bool type_ok = false;
  if (r.type_alpha) {
    type_ok = *r.type_alpha < kPi / 2 - config.angle_margin;
    if (!type_ok) r.reasons.push_back("spectral type within the margin of pi/2");
  }

  bool resolvent_ok = true;
  if (type_ok) {
    std::vector<double> betas = config.betas;
    if (betas.empty())
      for (double f : {0.25, 0.5, 0.75}) betas.push_back(*r.type_alpha + f * (kPi / 2 - *r.type_alpha));
    for (double b : betas) {
      if (!(b > *r.type_alpha && b < kPi / 2)) continue;
      const ResolventSup rs = resolvent_sup(t, b, space, config.norm_opts);
      r.resolvent_sup.emplace_back(b, rs.value);
      if (!std::isfinite(rs.value)) {
        resolvent_ok = false;
        r.reasons.push_back("non-finite sampled resolvent bound");
      }
    }
  }

  if (refuted)
    r.verdict = Verdict::not_ritt;
  else if (type_ok && stable && resolvent_ok)
    r.verdict = Verdict::ritt;
  else
    r.verdict = Verdict::inconclusive;
  return r;
}

}  // namespace rittcalc::ritt
