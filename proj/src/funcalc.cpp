#include "rittcalc/funcalc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "rittcalc/errors.hpp"
#include "rittcalc/ritt.hpp"

namespace rittcalc::funcalc {

namespace {

constexpr double kPi = M_PI;
const Complex kTwoPiI(0.0, 2.0 * kPi);

// Eigenvalues closer than this to 1 need a certificate (the vertex is not
// regular for T there).
constexpr double kVertexTol = 1e-6;

double coeff_mass(const std::vector<Complex>& a) {
  double s = 0.0;
  for (const Complex& c : a) s += std::abs(c);
  return s;
}

std::vector<Complex> trim(std::vector<Complex> a) {
  while (a.size() > 1 && a.back() == Complex(0.0)) a.pop_back();
  if (a.empty()) a.push_back(0.0);
  return a;
}

// Everything eval_contour needs to know about T before touching phi.
struct Prepared {
  ComplexMatrix t;
  ComplexMatrix range_proj;  // I - P, or I
  ComplexVector eigenvalues;
  double scale = 1.0;
  double beta = 0.0;
  bool deflated = false;
};

Prepared prepare(const ComplexMatrix& t, double beta, const std::vector<const HolomorphicFn*>& phis) {
  numlin::require_square(t, "eval_contour");
  numlin::require_finite(t, "eval_contour");
  stolz::StolzParams check(beta);
  (void)check;
  const auto alpha = ritt::spectral_type(t);
  if (!alpha) throw DomainError("spectrum of T is not contained in a Stolz domain");
  if (!(beta > *alpha)) {
    std::ostringstream os;
    os << "beta = " << beta << " must exceed the spectral type " << *alpha;
    throw DomainError(os.str());
  }
  Prepared p;
  p.t = t;
  p.beta = beta;
  p.scale = 1.0 + numlin::norm2(t);
  p.eigenvalues = numlin::eig(t).eigenvalues;
  const Index n = t.rows();
  p.range_proj = numlin::identity(n);
  bool near_vertex = false;
  for (Index i = 0; i < n; ++i)
    if (std::abs(p.eigenvalues(i) - 1.0) <= kVertexTol) near_vertex = true;
  if (near_vertex) {
    for (const HolomorphicFn* phi : phis) {
      const auto& c = phi->certificate();
      if (!c || c->s < 0.5)
        throw InadmissibleError("1 is (nearly) in the spectrum: " + phi->name() +
                                " needs a vanishing certificate |phi| <= c|1-z|^s with s >= 1/2");
    }
    try {
      p.range_proj -= ritt::mean_ergodic_projection(t);
    } catch (const DomainError& e) {
      throw InadmissibleError(e.what());
    }
    p.deflated = true;
  }
  return p;
}

// Quadrature nodes with (w tau / 2 pi i) and R(lambda, T)(I - P) per node.
struct Level {
  std::vector<Complex> nodes;
  std::vector<Complex> coef;
  std::vector<ComplexMatrix> res;
};

Level build_level(const Prepared& p, const MeshSpec& mesh) {
  const stolz::StolzContour c = stolz::boundary_contour(p.beta, mesh);
  const Index n = p.t.rows();
  const ComplexMatrix id = numlin::identity(n);
  const double tol = 1e-10 * p.scale;
  Level l;
  l.nodes = c.nodes;
  l.coef.reserve(c.size());
  l.res.reserve(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    const Complex z = c.nodes[j];
    for (Index i = 0; i < p.eigenvalues.size(); ++i)
      if (std::abs(z - p.eigenvalues(i)) <= tol && !(p.deflated && std::abs(p.eigenvalues(i) - 1.0) <= kVertexTol))
        throw DomainError("contour node hits the spectrum");
    l.coef.push_back(c.weights[j] * c.tangents[j] / kTwoPiI);
    l.res.push_back(numlin::solve(z * id - p.t, p.range_proj));
  }
  return l;
}

ComplexMatrix integrate(const Level& l, const HolomorphicFn& phi, Index n) {
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (std::size_t j = 0; j < l.nodes.size(); ++j) {
    const Complex f = phi(l.nodes[j]);
    if (f == Complex(0.0)) continue;
    s += (l.coef[j] * f) * l.res[j];
  }
  return s;
}

std::vector<CalcReport> run_contour(const Prepared& p, const std::vector<const HolomorphicFn*>& phis,
                                    const ContourOptions& opts) {
  opts.mesh.validate();
  const Index n = p.t.rows();
  std::vector<std::unique_ptr<Level>> levels;
  auto level = [&](int k) -> const Level& {
    while (static_cast<int>(levels.size()) <= k) {
      MeshSpec m = opts.mesh;
      for (int r = 0; r < static_cast<int>(levels.size()); ++r) m = m.refined();
      levels.push_back(std::make_unique<Level>(build_level(p, m)));
    }
    return *levels[static_cast<std::size_t>(k)];
  };

  std::vector<CalcReport> out;
  for (const HolomorphicFn* phi : phis) {
    CalcReport r;
    r.beta = p.beta;
    r.deflated = p.deflated;
    ComplexMatrix prev = integrate(level(0), *phi, n);
    for (int k = 1; k <= opts.max_refinements; ++k) {
      ComplexMatrix cur = integrate(level(k), *phi, n);
      r.error_estimate = numlin::norm2(cur - prev);
      r.refinements = k;
      r.nodes = static_cast<int>(level(k).nodes.size());
      r.value = std::move(cur);
      const double bar = opts.tol * (1.0 + numlin::norm2(r.value));
      if (r.error_estimate <= bar) {
        r.converged = true;
        break;
      }
      prev = r.value;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Golden-section maximization of g on [a, b].
template <class G>
double golden_max(G g, double a, double b, int iters = 80) {
  const double inv = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv * (b - a), d = a + inv * (b - a);
  double gc = g(c), gd = g(d);
  double best = std::max(gc, gd);
  for (int i = 0; i < iters && b - a > 1e-15; ++i) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv * (b - a);
      gd = g(d);
    }
    best = std::max({best, gc, gd});
  }
  return best;
}

// Max of g over sorted parameters us, refined around the largest samples.
template <class G>
double sampled_max(G g, std::vector<double> us) {
  std::sort(us.begin(), us.end());
  us.erase(std::unique(us.begin(), us.end()), us.end());
  std::vector<double> v(us.size());
  for (std::size_t i = 0; i < us.size(); ++i) v[i] = g(us[i]);
  std::vector<std::size_t> idx(us.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  const std::size_t top = std::min<std::size_t>(5, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(top), idx.end(),
                    [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
  double best = *std::max_element(v.begin(), v.end());
  for (std::size_t t = 0; t < top; ++t) {
    const std::size_t i = idx[t];
    const double a = us[i > 0 ? i - 1 : i], b = us[i + 1 < us.size() ? i + 1 : i];
    if (b > a) best = std::max(best, golden_max(g, a, b));
  }
  return best;
}

std::vector<Complex> compose_one_minus(const std::vector<Complex>& a) {
  // sum_k a_k (1 - l)^k in powers of l.
  std::vector<Complex> out(a.size(), 0.0);
  std::vector<double> binom(1, 1.0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k > 0) {
      std::vector<double> next(k + 1, 1.0);
      for (std::size_t i = 1; i < k; ++i) next[i] = binom[i - 1] + binom[i];
      binom = std::move(next);
    }
    for (std::size_t i = 0; i <= k; ++i) out[i] += a[k] * binom[i] * ((i % 2) ? -1.0 : 1.0);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

HolomorphicFn HolomorphicFn::polynomial(std::vector<Complex> coeffs) {
  HolomorphicFn h;
  h.kind_ = Kind::polynomial;
  h.num_ = trim(std::move(coeffs));
  h.name_ = "polynomial";
  // Order of the zero at 1 by repeated synthetic division.
  std::vector<Complex> q = h.num_;
  const double mass = coeff_mass(q);
  int order = 0;
  while (q.size() > 1) {
    std::vector<Complex> b(q.size() - 1);
    Complex acc = 0.0;
    for (std::size_t k = q.size() - 1; k >= 1; --k) {
      acc += q[k];
      b[k - 1] = acc;
    }
    const Complex rem = acc + q[0];
    if (std::abs(rem) > 1e-13 * mass) break;
    q = std::move(b);
    ++order;
  }
  if (order == 0 && mass == 0.0) order = 1;  // phi = 0
  if (order > 0) h.cert_ = H0Certificate{coeff_mass(q), static_cast<double>(order)};
  return h;
}

HolomorphicFn HolomorphicFn::rational(std::vector<Complex> num, std::vector<Complex> den) {
  HolomorphicFn h;
  h.kind_ = Kind::rational;
  h.num_ = trim(std::move(num));
  h.den_ = trim(std::move(den));
  if (h.den_.size() == 1 && h.den_[0] == Complex(0.0)) throw DomainError("rational function with zero denominator");
  h.name_ = "rational";
  return h;
}

HolomorphicFn HolomorphicFn::closure(std::function<Complex(Complex)> f, std::optional<H0Certificate> cert,
                                     std::string name) {
  HolomorphicFn h;
  h.kind_ = Kind::closure;
  h.f_ = std::move(f);
  h.cert_ = cert;
  h.name_ = std::move(name);
  return h;
}

Complex HolomorphicFn::operator()(Complex z) const {
  switch (kind_) {
    case Kind::polynomial:
      return horner(num_, z);
    case Kind::rational:
      return horner(num_, z) / horner(den_, z);
    case Kind::closure:
      return f_(z);
  }
  return 0.0;
}

HolomorphicFn HolomorphicFn::with_certificate(H0Certificate cert) const {
  HolomorphicFn h = *this;
  h.cert_ = cert;
  return h;
}

HolomorphicFn HolomorphicFn::with_name(std::string name) const {
  HolomorphicFn h = *this;
  h.name_ = std::move(name);
  return h;
}

HolomorphicFn HolomorphicFn::operator*(const HolomorphicFn& other) const {
  if (kind_ == Kind::polynomial && other.kind_ == Kind::polynomial) {
    std::vector<Complex> c(num_.size() + other.num_.size() - 1, 0.0);
    for (std::size_t i = 0; i < num_.size(); ++i)
      for (std::size_t j = 0; j < other.num_.size(); ++j) c[i + j] += num_[i] * other.num_[j];
    return polynomial(std::move(c)).with_name(name_ + "*" + other.name_);
  }
  std::optional<H0Certificate> cert;
  if (cert_ && other.cert_) cert = H0Certificate{cert_->c * other.cert_->c, cert_->s + other.cert_->s};
  const HolomorphicFn a = *this, b = other;
  return closure([a, b](Complex z) { return a(z) * b(z); }, cert, name_ + "*" + other.name_);
}

Complex horner(const std::vector<Complex>& coeffs, Complex z) {
  Complex s = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) s = s * z + coeffs[k];
  return s;
}

ComplexMatrix eval_poly(const ComplexMatrix& t, const std::vector<Complex>& coeffs) {
  numlin::require_square(t, "eval_poly");
  const Index n = t.rows();
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    s = s * t;
    s.diagonal().array() += coeffs[k];
  }
  return s;
}

ComplexMatrix eval_poly(const ComplexMatrix& t, const HolomorphicFn& phi) {
  if (phi.kind() != HolomorphicFn::Kind::polynomial) throw DomainError("eval_poly needs a polynomial");
  return eval_poly(t, phi.coeffs());
}

ComplexMatrix eval_rational(const ComplexMatrix& t, const HolomorphicFn& phi) {
  if (phi.kind() == HolomorphicFn::Kind::polynomial) return eval_poly(t, phi.coeffs());
  if (phi.kind() != HolomorphicFn::Kind::rational) throw DomainError("eval_rational needs a rational function");
  const ComplexMatrix num = eval_poly(t, phi.coeffs()), den = eval_poly(t, phi.denominator());
  // den(T) commutes with num(T).
  return numlin::solve(den, num);
}

double default_beta(const ComplexMatrix& t, double gamma) {
  const auto alpha = ritt::spectral_type(t);
  if (!alpha) throw DomainError("spectrum of T is not contained in a Stolz domain");
  if (!(gamma > *alpha && gamma < kPi / 2)) throw DomainError("gamma must lie between the spectral type and pi/2");
  return 0.5 * (*alpha + gamma);
}

CalcReport eval_contour(const ComplexMatrix& t, const HolomorphicFn& phi, double beta, const ContourOptions& opts) {
  return eval_contour_many(t, {phi}, beta, opts).front();
}

std::vector<CalcReport> eval_contour_many(const ComplexMatrix& t, const std::vector<HolomorphicFn>& phis, double beta,
                                          const ContourOptions& opts) {
  std::vector<const HolomorphicFn*> ptrs;
  for (const auto& f : phis) ptrs.push_back(&f);
  const Prepared p = prepare(t, beta, ptrs);
  return run_contour(p, ptrs, opts);
}

HolomorphicFn frac_fn(double delta) {
  if (!(delta > 0.0)) throw DomainError("fractional power needs delta > 0");
  std::ostringstream os;
  os << "frac:" << delta;
  return HolomorphicFn::closure([delta](Complex z) { return std::pow(1.0 - z, delta); }, H0Certificate{1.0, delta},
                                os.str());
}

FracPowerReport frac_power(const ComplexMatrix& t, double delta, double beta, const ContourOptions& opts) {
  FracPowerReport r;
  r.calc = eval_contour(t, frac_fn(delta), beta, opts);
  const numlin::Spectrum sp = numlin::eig(t, true);
  if (std::isfinite(sp.condition) && sp.condition < 1e12) {
    const Index n = t.rows();
    ComplexVector d(n);
    for (Index i = 0; i < n; ++i) {
      const Complex l = sp.eigenvalues(i);
      d(i) = std::abs(l - 1.0) <= kVertexTol ? Complex(0.0) : std::pow(1.0 - l, delta);
    }
    const ComplexMatrix& v = *sp.eigenvectors;
    // V D V^-1 = (V^-* D^* V^*)^*
    const ComplexMatrix vd = v * d.asDiagonal();
    r.oracle = numlin::solve(v.adjoint(), vd.adjoint()).adjoint();
    r.oracle_diff = numlin::norm2(*r.oracle - r.calc.value);
  }
  return r;
}

CalcReport scaled_calculus(const ComplexMatrix& t, const HolomorphicFn& phi, double r, double beta,
                           const ContourOptions& opts) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("scaling factor r must lie in (0, 1)");
  return eval_contour(r * t, phi, beta, opts);
}

std::vector<std::pair<double, double>> scaled_study(const ComplexMatrix& t, const HolomorphicFn& phi,
                                                    const std::vector<double>& rs, double beta,
                                                    const ContourOptions& opts) {
  const ComplexMatrix base = eval_contour(t, phi, beta, opts).value;
  std::vector<std::pair<double, double>> out;
  for (double r : rs) out.emplace_back(r, numlin::norm2(scaled_calculus(t, phi, r, beta, opts).value - base));
  return out;
}

TransferReport transfer_check(const ComplexMatrix& t, const HolomorphicFn& f, double nu, const TransferOptions& opts) {
  numlin::require_square(t, "transfer_check");
  if (!(nu > 0.0 && nu < kPi / 2)) throw DomainError("sector angle must lie in (0, pi/2)");
  const Index n = t.rows();
  const ComplexMatrix id = numlin::identity(n);
  const ComplexMatrix a = id - t;
  const auto alpha = ritt::spectral_type(t);
  if (!alpha) throw DomainError("spectrum of T is not contained in a Stolz domain");
  if (!(nu > *alpha)) throw DomainError("sector angle must exceed the spectral type");

  const numlin::Spectrum sa = numlin::eig(a);
  bool zero_in_spectrum = false;
  for (Index i = 0; i < n; ++i) {
    const Complex mu = sa.eigenvalues(i);
    if (std::abs(mu) <= kVertexTol) {
      zero_in_spectrum = true;
      continue;
    }
    if (!(std::abs(std::arg(mu)) < nu)) throw DomainError("spectrum of I - T leaves the sector");
  }

  int k = opts.regularize;
  if (k < 0) k = f.kind() == HolomorphicFn::Kind::polynomial ? f.degree() + 1 : 0;
  const HolomorphicFn fg = HolomorphicFn::closure(
      [f, k](Complex z) { return f(z) * std::pow(1.0 + z, -static_cast<double>(k)); }, f.certificate(), "f g");

  ComplexMatrix range = id;
  if (zero_in_spectrum) {
    const auto& c = f.certificate();
    if (!c || !(c->s > 0.0)) throw InadmissibleError("0 is in the spectrum of I - T: f needs decay at 0");
    try {
      range -= ritt::mean_ergodic_projection(t);
    } catch (const DomainError& e) {
      throw InadmissibleError(e.what());
    }
  }

  auto sector_sum = [&](const MeshSpec& mesh) {
    const stolz::SectorContour c = stolz::sector_contour(nu, opts.r_max, mesh);
    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    for (std::size_t j = 0; j < c.size(); ++j) {
      const Complex z = c.nodes[j];
      const Complex v = fg(z);
      if (v == Complex(0.0)) continue;
      s += (c.weights[j] * c.tangents[j] * v / kTwoPiI) * numlin::solve(z * id - a, range);
    }
    return s;
  };
  const ComplexMatrix s0 = sector_sum(opts.mesh), s1 = sector_sum(opts.mesh.refined());
  ComplexMatrix reg = id;
  for (int i = 0; i < k; ++i) reg = reg * (id + a);

  TransferReport r;
  r.nu = nu;
  r.lhs = s1 * reg;
  r.sector_error = numlin::norm2((s1 - s0) * reg);

  // Tail beyond r_max: |f g| ~ c |z|^-s with ||z R(z, A)|| <= M on the rays.
  double m = 0.0, fmax = 0.0;
  for (double sgn : {1.0, -1.0}) {
    const Complex z = std::polar(opts.r_max, sgn * nu);
    m = std::max(m, numlin::norm2(z * numlin::solve(z * id - a, id)));
    fmax = std::max(fmax, std::abs(fg(z)));
  }
  const stolz::SectorContour probe = stolz::sector_contour(nu, opts.r_max, MeshSpec{});
  r.tail_estimate =
      probe.truncation_estimate(fmax * std::pow(opts.r_max, opts.decay_s), opts.decay_s, m) * numlin::norm2(reg);

  HolomorphicFn phi = f.kind() == HolomorphicFn::Kind::polynomial
                          ? HolomorphicFn::polynomial(compose_one_minus(f.coeffs()))
                          : HolomorphicFn::closure([f](Complex l) { return f(1.0 - l); }, f.certificate(), "f(1-z)");
  r.beta = 0.5 * (*alpha + nu);
  r.rhs = eval_contour(t, phi, r.beta, opts.contour).value;
  r.diff = numlin::norm2(r.lhs - r.rhs);
  return r;
}

double hinf_norm(const HolomorphicFn& phi, double gamma, int samples) {
  stolz::StolzParams check(gamma);
  (void)check;
  std::vector<double> us;
  for (int i = 0; i <= samples; ++i) us.push_back(3.0 * i / samples);
  for (int j = 1; j <= 40; ++j) {
    us.push_back(std::ldexp(1.0, -j));
    us.push_back(3.0 - std::ldexp(1.0, -j));
  }
  return sampled_max([&](double u) { return std::abs(phi(stolz::boundary_point(gamma, u))); }, us);
}

double hinf_norm_disc(const HolomorphicFn& phi, int samples) {
  std::vector<double> th;
  for (int i = 0; i <= samples; ++i) th.push_back(2.0 * kPi * i / samples);
  return sampled_max([&](double x) { return std::abs(phi(std::polar(1.0, x))); }, th);
}

CalculusConstant calculus_constant(const ComplexMatrix& t, double gamma, const SpaceModel& space,
                                   const FamilySpec& family) {
  std::vector<std::pair<std::string, std::vector<Complex>>> fam;
  for (int j = 0; j <= family.j_max; ++j) {
    std::vector<Complex> base(1, 1.0);
    for (int i = 0; i < j; ++i) {
      std::vector<Complex> next(base.size() + 1, 0.0);
      for (std::size_t q = 0; q < base.size(); ++q) {
        next[q] += base[q];
        next[q + 1] -= base[q];
      }
      base = std::move(next);
    }
    for (int k = 0; k <= family.k_max; ++k) {
      std::vector<Complex> c(static_cast<std::size_t>(k), 0.0);
      c.insert(c.end(), base.begin(), base.end());
      fam.emplace_back("z^" + std::to_string(k) + "(1-z)^" + std::to_string(j), std::move(c));
    }
  }
  CounterRng rng(family.seed, 0xCA1C);
  for (int i = 0; i < family.random_count; ++i) {
    const int d = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(std::max(1, family.random_degree)));
    std::vector<Complex> c;
    for (int q = 0; q <= d; ++q) c.emplace_back(rng.normal(), rng.normal());
    fam.emplace_back("random#" + std::to_string(i), std::move(c));
  }
  for (int m = 1; m <= family.fejer_max; m *= 2) {
    std::vector<Complex> c;
    for (int q = 0; q <= m; ++q) c.emplace_back(1.0 - static_cast<double>(q) / (m + 1));
    fam.emplace_back("fejer" + std::to_string(m), std::move(c));
  }

  CalculusConstant out;
  for (const auto& [name, c] : fam) {
    const HolomorphicFn phi = HolomorphicFn::polynomial(c);
    const double h = hinf_norm(phi, gamma, 1000);
    if (!(h > 0.0)) continue;
    const double ratio = numlin::op_norm(eval_poly(t, c), space).lower / h;
    ++out.tested;
    if (ratio > out.value) {
      out.value = ratio;
      out.argmax = name;
    }
  }
  return out;
}

std::pair<HolomorphicFn, HolomorphicFn> evenodd_split(const HolomorphicFn& phi) {
  if (phi.kind() != HolomorphicFn::Kind::polynomial) throw DomainError("evenodd_split needs a polynomial");
  std::vector<Complex> even, odd;
  const auto& a = phi.coeffs();
  for (std::size_t k = 0; k < a.size(); ++k) (k % 2 ? odd : even).push_back(a[k]);
  if (odd.empty()) odd.push_back(0.0);
  return {HolomorphicFn::polynomial(even), HolomorphicFn::polynomial(odd)};
}

ComplexMatrix apply(const ComplexMatrix& t, const HolomorphicFn& phi, double beta, const ContourOptions& opts) {
  switch (phi.kind()) {
    case HolomorphicFn::Kind::polynomial:
      return eval_poly(t, phi.coeffs());
    case HolomorphicFn::Kind::rational:
      return eval_rational(t, phi);
    case HolomorphicFn::Kind::closure:
      break;
  }
  return eval_contour(t, phi, beta, opts).value;
}

NevanlinnaReport nevanlinna_diag(const ComplexMatrix& t, const HolomorphicFn& phi, const SpaceModel& space, int n_max,
                                 double gamma, const ContourOptions& opts) {
  if (n_max < 1) throw DomainError("N must be >= 1");
  const double beta = phi.kind() == HolomorphicFn::Kind::closure ? default_beta(t, gamma) : 0.0;
  const ComplexMatrix f = apply(t, phi, beta, opts);
  const numlin::OpNormOptions nopts = ritt::sequence_norm_options();
  NevanlinnaReport r;
  ComplexMatrix prev = numlin::identity(t.rows());
  for (int k = 1; k <= n_max; ++k) {
    const ComplexMatrix cur = prev * t;
    if (!numlin::all_finite(cur)) throw OverflowError("T^k overflowed", k);
    const ComplexMatrix m = f * (cur - prev);
    const double v = m.cwiseAbs().maxCoeff() == 0.0 ? 0.0 : k * numlin::op_norm(m, space, nopts).lower;
    if (v > r.sup) {
      r.sup = v;
      r.argmax_k = k;
    }
    prev = cur;
  }
  const double h = hinf_norm(phi, gamma);
  r.ratio = h > 0.0 ? r.sup / h : 0.0;
  return r;
}

}  // namespace rittcalc::funcalc
