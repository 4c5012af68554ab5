#include "rittcalc/verify.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "rittcalc/errors.hpp"
#include "rittcalc/funcalc.hpp"
#include "rittcalc/lab.hpp"
#include "rittcalc/ritt.hpp"
#include "rittcalc/sqfun.hpp"

namespace rittcalc::verify {

using namespace numlin;
using funcalc::HolomorphicFn;

namespace {

constexpr double kPi = 3.14159265358979323846;

Check le(std::string name, double v, double bound) {
  return {std::move(name), v <= bound, v, bound, "<=", 0.0};
}
Check ge(std::string name, double v, double bound) {
  return {std::move(name), v >= bound, v, bound, ">=", 0.0};
}
Check eq(std::string name, double v, double target) {
  return {std::move(name), v == target, v, target, "==", 0.0};
}
Check in(std::string name, double v, double lo, double hi) {
  return {std::move(name), v >= lo && v <= hi, v, lo, "in", hi};
}

ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (Complex v : d) m(i, i) = v, ++i;
  return m;
}

ComplexMatrix with_spectrum(const std::vector<Complex>& ev, CounterRng& rng) {
  const Index n = static_cast<Index>(ev.size());
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = ev[static_cast<std::size_t>(i)];
  const ComplexMatrix s = random_gaussian(n, n, rng) + 2.0 * identity(n);
  return s * d * s.inverse();
}

// Spectrum in B_{pi/6}: a disc of radius 0.45 plus real points in [0.5, 0.95].
std::vector<Complex> ritt_eigenvalues(Index n, CounterRng& rng) {
  std::vector<Complex> ev;
  for (Index i = 0; i < n; ++i) {
    if (i % 2 == 0)
      ev.push_back(std::polar(0.45 * std::sqrt(rng.uniform()), rng.uniform(-kPi, kPi)));
    else
      ev.push_back(rng.uniform(0.5, 0.95));
  }
  return ev;
}

ComplexMatrix random_ritt(Index n, CounterRng& rng) { return with_spectrum(ritt_eigenvalues(n, rng), rng); }

std::vector<Complex> vanishing_poly(int degree, CounterRng& rng) {
  std::vector<Complex> c;
  Complex sum = 0.0;
  for (int k = 0; k <= degree; ++k) {
    c.emplace_back(rng.normal(), rng.normal());
    sum += c.back();
  }
  c[0] -= sum;
  return c;
}

ComplexVector rand_vec(Index d, CounterRng& rng) { return random_gaussian(d, 1, rng).col(0); }

double rel(const ComplexMatrix& a, const ComplexMatrix& b) { return norm2(a - b) / std::max(norm2(b), 1e-300); }

std::vector<Check> identities(CounterRng& rng) {
  std::vector<Check> out;
  int bad = 0;
  for (int k = 1; k <= 10000; ++k) bad += lab::kp1_identity(k).equal ? 0 : 1;
  out.push_back(eq("kp1 mismatches for k = 1..10^4", bad, 0));

  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Index d = 2 + i % 7;
    const ComplexMatrix t = random_gaussian(d, d, rng) / std::sqrt(2.0 * static_cast<double>(d));
    for (int n : {1, 2, 5, 10, 50, 100, 200}) {
      const lab::Residual r = lab::partial_sum_identity(t, n);
      worst = std::max(worst, r.residual / r.scale);
    }
  }
  out.push_back(le("partial sums: max residual / scale, 50 matrices, N <= 200", worst, 1e-10));
  out.push_back(eq("partial sums: residual at T = I", lab::partial_sum_identity(identity(3), 200).residual, 0.0));
  out.push_back(
      eq("partial sums: residual at T = 0", lab::partial_sum_identity(ComplexMatrix::Zero(3, 3), 200).residual, 0.0));
  return out;
}

std::vector<Check> contour(CounterRng& rng) {
  double worst_type = 0.0, worst_rel = 0.0, worst_beta = 0.0;
  bool converged = true;
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix t = random_ritt(4 + i % 3, rng);
    worst_type = std::max(worst_type, ritt::spectral_type(t).value_or(kPi));
    std::vector<HolomorphicFn> phis;
    for (int j = 0; j < 10; ++j) phis.push_back(HolomorphicFn::polynomial(vanishing_poly(2 + 2 * j, rng)));
    const double b1 = funcalc::default_beta(t, kPi / 3), b2 = funcalc::default_beta(t, 1.4);
    const auto r1 = funcalc::eval_contour_many(t, phis, b1);
    const auto r2 = funcalc::eval_contour_many(t, phis, b2);
    for (std::size_t j = 0; j < phis.size(); ++j) {
      const ComplexMatrix exact = funcalc::eval_poly(t, phis[j]);
      converged = converged && r1[j].converged && r2[j].converged;
      worst_rel = std::max({worst_rel, rel(r1[j].value, exact), rel(r2[j].value, exact)});
      const double est = r1[j].error_estimate + r2[j].error_estimate;
      worst_beta = std::max(worst_beta, norm2(r1[j].value - r2[j].value) / std::max(est, 1e-300));
    }
  }
  return {le("spectral type of the test matrices", worst_type, kPi / 6),
          eq("all quadratures converged", converged ? 1.0 : 0.0, 1.0),
          le("contour vs Horner: max relative error", worst_rel, 1e-7),
          le("two angles: max difference / summed estimates", worst_beta, 1.0)};
}

std::vector<Check> fractional(CounterRng& rng) {
  const ComplexMatrix d = diag({0.5, 0.75});
  const double doc = norm2(funcalc::frac_power(d, 0.5, kPi / 4).calc.value - diag({std::sqrt(0.5), 0.5}));
  double worst_oracle = 0.0, worst_add = 0.0;
  int missing = 0;
  for (int i = 0; i < 10; ++i) {
    const ComplexMatrix t = random_ritt(4, rng);
    const double beta = funcalc::default_beta(t, 1.4);
    const funcalc::FracPowerReport h = funcalc::frac_power(t, 0.5, beta);
    if (h.oracle_diff)
      worst_oracle = std::max(worst_oracle, *h.oracle_diff);
    else
      ++missing;
    const ComplexMatrix one = funcalc::frac_power(t, 1.0, beta).calc.value;
    worst_add = std::max(worst_add, norm2(h.calc.value * h.calc.value - one));
  }
  return {le("diag(0.5, 0.75)^(1/2) error", doc, 1e-7), eq("instances without an eigen-oracle", missing, 0),
          le("contour vs eigen-oracle, max", worst_oracle, 1e-7),
          le("additivity 1/2 + 1/2 = 1, max", worst_add, 1e-6)};
}

std::vector<Check> transfer(CounterRng& rng) {
  const HolomorphicFn f = HolomorphicFn::closure([](Complex z) { return z / ((1.0 + z) * (1.0 + z)); },
                                                 funcalc::H0Certificate{1.0, 1.0}, "z/(1+z)^2");
  double worst = funcalc::transfer_check(diag({0.5}), f, kPi / 4).diff;
  for (int i = 0; i < 9; ++i) {
    const ComplexMatrix t = random_ritt(4, rng);
    const double alpha = ritt::spectral_type(t).value_or(kPi / 2);
    worst = std::max(worst, funcalc::transfer_check(t, f, 0.5 * (alpha + kPi / 2)).diff);
  }
  return {le("sector vs Stolz quadrature, max difference over 10 instances", worst, 1e-6)};
}

std::vector<Check> square_functions(CounterRng& rng) {
  std::vector<Check> out;
  const double half = sqfun::sf_constant(0.5 * identity(3), 1, SpaceModel::hilbert(3)).value;
  out.push_back(le("constant at T = 0.5 I: |C - 2/3|", std::abs(half - 2.0 / 3.0), 1e-10));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const ComplexMatrix t = random_ritt(4, rng);
    const SpaceModel h = SpaceModel::hilbert(4);
    const double exact = sqfun::sf_constant(t, 1, h).value;
    const double search = sqfun::sf_constant_search(t, 1, h, rng.next_u64(), 50).value;
    worst = std::max(worst, std::abs(exact - search));
  }
  out.push_back(le("Gram vs sampled constant, max difference", worst, 1e-6));
  double excess = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix t = random_ritt(4, rng);
    const SpaceModel h = SpaceModel::hilbert(4);
    for (int j = 0; j < 5; ++j) {
      const ComplexVector x = rand_vec(4, rng);
      sqfun::SFConfig cfg;
      const double lhs = sqfun::square_function(t, t * x, h, cfg).value;
      const double rhs = sqfun::square_function(t, x, h, cfg).value;
      excess = std::max(excess, lhs - rhs - cfg.tail_tol);
    }
  }
  out.push_back(le("shift inequality, max excess over 100 vectors", excess, 0.0));
  return out;
}

std::vector<Check> rademacher(CounterRng& rng) {
  double worst = 0.0;
  for (int k = 1; k <= 12; ++k) {
    std::vector<ComplexMatrix> xs;
    double s = 0.0;
    for (int i = 0; i < k; ++i) {
      xs.emplace_back(rand_vec(3, rng));
      s += xs.back().squaredNorm();
    }
    const double r = sqfun::rad_norm(xs, SpaceModel::hilbert(3), {sqfun::RadMode::exact}).value;
    worst = std::max(worst, std::abs(r - std::sqrt(s)));
  }
  double kh = 0.0;
  for (int i = 0; i < 5; ++i) {
    std::vector<ComplexMatrix> xs;
    for (int k = 0; k < 6; ++k) xs.emplace_back(rand_vec(4, rng));
    std::vector<double> w;
    for (int j = 0; j < 4; ++j) w.push_back(rng.uniform(0.5, 2.0));
    kh = std::max(kh, std::abs(sqfun::khintchine_ratio(xs, SpaceModel::lp(2.0, w)) - 1.0));
  }
  ComplexVector c(2), d(2);
  c << 1.0, 1.0;
  d << 1.0, -1.0;
  const double sup = sqfun::rad_norm({c, d}, SpaceModel::sup(2)).value;
  return {le("Hilbert identity, K <= 12, max error", worst, 1e-12),
          le("Khintchine ratio at p = 2, max |ratio - 1|", kh, 1e-12),
          eq("sup-norm example {(1,1), (1,-1)}", sup, 2.0)};
}

std::vector<Check> r_bound(CounterRng& rng) {
  std::vector<Check> out;
  const sqfun::RBoundEstimate two = sqfun::r_bound_lower({2.0 * identity(2), identity(2)}, SpaceModel::hilbert(2));
  out.push_back(in("R({2I, I}) on Hilbert", two.value, 2.0 - 1e-3, 2.0));
  const ComplexMatrix t2 = random_gaussian(2, 2, rng);
  const ComplexMatrix t4 = random_gaussian(4, 4, rng);
  const std::vector<std::pair<SpaceModel, const ComplexMatrix*>> models{
      {SpaceModel::hilbert(2), &t2}, {SpaceModel::lp(3.0, 2), &t2},    {SpaceModel::lp(1.5, 2), &t2},
      {SpaceModel::sup(2), &t2},     {SpaceModel::schatten(3.0, 2), &t4}};
  for (const auto& [space, t] : models) {
    const OpNorm on = op_norm(*t, space);
    const double r = sqfun::r_bound_lower({*t}, space).value;
    out.push_back(in("single operator on " + space.name() + " within the norm bracket", r,
                     on.lower * (1 - 1e-12), on.upper * (1 + 1e-12)));
  }
  return out;
}

ComplexMatrix jordanish() {
  ComplexMatrix t = 0.5 * identity(2);
  t(0, 1) = 10.0;
  return t;
}

std::vector<Check> similarity(CounterRng& rng) {
  std::vector<ComplexMatrix> ts{jordanish()};
  for (int trial = 0; ts.size() < 10 && trial < 200; ++trial) {
    std::vector<Complex> ev = ritt_eigenvalues(4, rng);
    if (trial % 3 == 0) ev[1] = 1.0;
    const ComplexMatrix t = with_spectrum(ev, rng);
    if (norm2(t) > 1.0) ts.push_back(t);
  }
  double min_norm = std::numeric_limits<double>::infinity(), worst = 0.0, bracket = 0.0;
  for (const ComplexMatrix& t : ts) {
    min_norm = std::min(min_norm, norm2(t));
    const lab::SimilarityReport r = lab::similarity_builder(t);
    worst = std::max(worst, r.contraction_norm);
    for (int i = 0; i < 10; ++i) {
      const ComplexVector x = rand_vec(t.rows(), rng);
      const double n3 = (r.v * x).norm(), n = x.norm();
      bracket = std::max({bracket, (r.equiv_lower * n - n3) / n, (n3 - r.equiv_upper * n) / n});
    }
  }
  const lab::ConditionalBasis cb = lab::conditional_basis_demo(8, 1e3);
  return {eq("non-contractive instances", static_cast<double>(ts.size()), 10.0),
          ge("min ||T|| over the instances", min_norm, 1.0),
          le("max ||V T V^-1||", worst, 1.0 + 1e-8),
          le("equivalence bracket, max violation over 100 vectors", bracket, 1e-10),
          ge("conditional basis, kappa = 1e3: upper / lower equivalence constant", std::sqrt(cb.equiv_ratio), 1e2)};
}

std::vector<Check> c512(CounterRng& rng) {
  double excess = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 20; ++i) {
    const sqfun::C512 c = sqfun::c512_check(random_ritt(2 + i % 4, rng));
    excess = std::max(excess, c.c2 - c.bound);
  }
  return {le("max C2 - sqrt(6) C1^2 over 20 instances", excess, 1e-8)};
}

std::vector<Check> growth(CounterRng& rng) {
  std::vector<Check> out;
  double r1 = 0.0, r9 = 0.0;
  for (int n : {1, 4, 9}) {
    const lab::C0Witness w = lab::c0_growth_witness(n, 0, rng.next_u64());
    out.push_back(le("covering constant, n = " + std::to_string(n), w.covering, 2.0));
    out.push_back(ge("ratio, n = " + std::to_string(n), w.ratio, std::sqrt(static_cast<double>(n)) / 2.0));
    if (n == 1) r1 = w.ratio;
    if (n == 9) r9 = w.ratio;
  }
  out.push_back(ge("ratio(9) / ratio(1)", r9 / r1, 1.5));
  return out;
}

std::vector<Check> gallery(CounterRng& rng) {
  std::vector<Check> out;
  const Eigen::MatrixXd c = lab::schur_cosine(4, 0.1, rng.next_u64());
  out.push_back(le("Schur symbol: |min entry + 0.9|", std::abs(c.minCoeff() + 0.9), 1e-12));
  const lab::GalleryInstance s = lab::gallery_schur(c, 3.0);
  const double a = ritt::increment_bound(s.t, s.space, 512), b = ritt::increment_bound(s.t, s.space, 1024);
  out.push_back(le("Schur on S^3_4: increment bound at 1024 / at 512", b / a, 1.05));
  double unital = 0.0, trace = 0.0, choi = 0.0, sa = 0.0;
  for (int n : {2, 3, 4}) {
    const lab::GalleryInstance g = lab::gallery_markov(n, rng.next_u64());
    unital = std::max(unital, g.checks.at("unital"));
    trace = std::max(trace, g.checks.at("trace"));
    choi = std::max({choi, -g.checks.at("choi_min_eigenvalue"), g.checks.at("choi_hermitian")});
    sa = std::max(sa, g.checks.at("selfadjoint"));
  }
  out.push_back(le("Markov: unital residual", unital, 1e-10));
  out.push_back(le("Markov: trace residual", trace, 1e-10));
  out.push_back(le("Markov: Choi negativity", choi, 1e-10));
  out.push_back(le("Markov: selfadjointness residual", sa, 1e-10));
  out.push_back(eq("flip map flagged for eigenvalue -1", lab::gallery_flip().flagged("minus-one-eigenvalue") ? 1 : 0, 1));
  return out;
}

}  // namespace

bool CriterionResult::passed() const {
  for (const Check& c : checks)
    if (!c.passed) return false;
  return !checks.empty();
}

const Check* CriterionResult::headline() const {
  const Check* best = nullptr;
  double best_slack = std::numeric_limits<double>::infinity();
  for (const Check& c : checks) {
    double slack;
    const double scale = std::max(std::abs(c.bound), 1e-300);
    if (c.relation == "<=")
      slack = (c.bound - c.value) / scale;
    else if (c.relation == ">=")
      slack = (c.value - c.bound) / scale;
    else if (c.relation == "in")
      slack = std::min(c.value - c.bound, c.bound2 - c.value) / std::max(std::abs(c.bound2), 1e-300);
    else
      slack = c.passed ? std::numeric_limits<double>::max() : -1.0;
    if (!c.passed) slack -= 1e300;
    if (!best || slack < best_slack) best = &c, best_slack = slack;
  }
  return best;
}

std::optional<Suite> parse_suite(const std::string& s) {
  for (Suite v : {Suite::identities, Suite::contour, Suite::similarity, Suite::rad, Suite::gallery, Suite::all})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

std::string to_string(Suite s) {
  switch (s) {
    case Suite::identities: return "identities";
    case Suite::contour: return "contour";
    case Suite::similarity: return "similarity";
    case Suite::rad: return "rad";
    case Suite::gallery: return "gallery";
    case Suite::all: return "all";
  }
  return "?";
}

std::vector<int> criteria(Suite s) {
  switch (s) {
    case Suite::identities: return {1};
    case Suite::contour: return {2, 3, 4};
    case Suite::rad: return {5, 6, 7, 9};
    case Suite::similarity: return {8};
    case Suite::gallery: return {10, 11};
    case Suite::all: return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  }
  return {};
}

std::string criterion_title(int id) {
  switch (id) {
    case 1: return "exact identities";
    case 2: return "contour vs polynomial oracle";
    case 3: return "fractional powers";
    case 4: return "transfer principle";
    case 5: return "square functions";
    case 6: return "Rademacher averages";
    case 7: return "R-bounds";
    case 8: return "similarity to a contraction";
    case 9: return "C2 <= sqrt(6) C1^2";
    case 10: return "c0 growth witness";
    case 11: return "gallery";
    default: throw DomainError("no criterion " + std::to_string(id));
  }
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
  CriterionResult r;
  r.id = id;
  r.title = criterion_title(id);
  CounterRng rng(seed, static_cast<std::uint64_t>(id));
  const auto start = std::chrono::steady_clock::now();
  switch (id) {
    case 1: r.checks = identities(rng); break;
    case 2: r.checks = contour(rng); break;
    case 3: r.checks = fractional(rng); break;
    case 4: r.checks = transfer(rng); break;
    case 5: r.checks = square_functions(rng); break;
    case 6: r.checks = rademacher(rng); break;
    case 7: r.checks = r_bound(rng); break;
    case 8: r.checks = similarity(rng); break;
    case 9: r.checks = c512(rng); break;
    case 10: r.checks = growth(rng); break;
    case 11: r.checks = gallery(rng); break;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

bool SuiteReport::passed() const {
  for (const CriterionResult& c : results)
    if (!c.passed()) return false;
  return true;
}

SuiteReport run_suite(Suite s, std::uint64_t seed) {
  SuiteReport r;
  r.suite = s;
  r.seed = seed;
  for (int id : criteria(s)) r.results.push_back(run_criterion(id, seed));
  return r;
}

report::Json to_json(const SuiteReport& r, bool timing) {
  using report::Json;
  using report::number;
  Json crit = Json::array();
  for (const CriterionResult& c : r.results) {
    Json checks = Json::array();
    for (const Check& k : c.checks) {
      Json j{{"name", k.name}, {"passed", k.passed}, {"value", number(k.value)}, {"relation", k.relation}};
      if (k.relation == "in")
        j["bounds"] = Json::array({number(k.bound), number(k.bound2)});
      else
        j["bound"] = number(k.bound);
      checks.push_back(std::move(j));
    }
    Json cj{{"id", c.id}, {"title", c.title}, {"passed", c.passed()}, {"checks", std::move(checks)}};
    if (timing) cj["seconds"] = c.seconds;
    crit.push_back(std::move(cj));
  }
  return Json{{"suite", to_string(r.suite)}, {"passed", r.passed()}, {"criteria", std::move(crit)}};
}

}  // namespace rittcalc::verify
