#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "rittcalc/errors.hpp"
#include "rittcalc/ritt.hpp"
#include "rittcalc/stolz.hpp"

using namespace rittcalc;
using namespace rittcalc::numlin;
using namespace rittcalc::ritt;

namespace {

constexpr double kPi = M_PI;
using fixtures::diag;
using fixtures::jordanish;
using fixtures::ritt_eigenvalues;
using fixtures::with_spectrum;

}  // namespace

TEST_CASE("power_bound") {
  CHECK(power_bound(identity(3), SpaceModel::hilbert(3), 50) == doctest::Approx(1.0));
  CHECK(power_bound(diag({0.5}), SpaceModel::hilbert(1), 50) == doctest::Approx(1.0));

  const ComplexMatrix t = jordanish();
  double brute = 0.0;
  ComplexMatrix p = identity(2);
  for (int n = 0; n <= 100; ++n) {
    brute = std::max(brute, Eigen::JacobiSVD<ComplexMatrix>(p).singularValues()(0));
    p = p * t;
  }
  CHECK(std::abs(power_bound(t, SpaceModel::hilbert(2), 100) - brute) <= 1e-10 * brute);
  CHECK(brute > 2.0);
}

TEST_CASE("power_bound overflow names the first bad power") {
  CHECK_THROWS_AS(power_bound(diag({1e200}), SpaceModel::hilbert(1), 10), OverflowError);
}

TEST_CASE("increment_bound") {
  CHECK(increment_bound(identity(2), SpaceModel::hilbert(2), 40) == 0.0);
  CHECK(increment_bound(ComplexMatrix::Zero(2, 2), SpaceModel::hilbert(2), 40) == doctest::Approx(1.0));
  CHECK(increment_bound(diag({0.5}), SpaceModel::hilbert(1), 40) == doctest::Approx(0.5));
}

TEST_CASE("spectral_type") {
  CHECK(*spectral_type(diag({0.5, 0.9})) == 0.0);
  CHECK(std::abs(*spectral_type(diag({Complex(0.0, 0.5)})) - kPi / 6) <= 1e-10);
  CHECK_FALSE(spectral_type(diag({-1.0})).has_value());
  CHECK(*spectral_type(diag({1.0, 0.5})) == 0.0);
}

TEST_CASE("resolvent_sup: T = 0 against a dense-grid maximization") {
  const double beta = kPi / 6;
  const ResolventSup rs = resolvent_sup(ComplexMatrix::Zero(1, 1), beta, SpaceModel::hilbert(1));
  double oracle = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const double f = 1.0 + std::pow(10.0, -k);
    for (int i = 0; i <= 300000; ++i) {
      const Complex l = f * stolz::boundary_point(beta, 3.0 * i / 300000.0);
      if (std::abs(l - 1.0) < 1e-8) continue;
      oracle = std::max(oracle, std::abs((l - 1.0) / l));
    }
  }
  CHECK(std::abs(rs.value - oracle) <= 1e-9);
  CHECK(std::abs(rs.value - 3.0) <= 1e-3);
  CHECK(rs.skipped == 0);
}

TEST_CASE("resolvent_sup: identity and normal matrices follow the eigenvalue formula") {
  CHECK(resolvent_sup(identity(2), kPi / 4, SpaceModel::hilbert(2)).value == doctest::Approx(1.0));

  CounterRng rng(31);
  const ComplexMatrix u = random_unitary(3, rng);
  const std::vector<Complex> mu{0.5, Complex(0.1, 0.3), 0.8};
  const ComplexMatrix t = u * diag({mu[0], mu[1], mu[2]}) * u.adjoint();
  const double beta = kPi / 3;
  const ResolventSup rs = resolvent_sup(t, beta, SpaceModel::hilbert(3));
  const std::vector<Complex> samples = resolvent_samples(beta);
  REQUIRE(samples.size() == rs.values.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double formula = 0.0;
    for (const Complex& m : mu) formula = std::max(formula, std::abs(samples[i] - 1.0) / std::abs(samples[i] - m));
    CHECK(std::abs(rs.values[i] - formula) <= 1e-10 * std::max(1.0, formula));
  }
}

TEST_CASE("decay_sequences") {
  const auto id = decay_sequences(identity(2), SpaceModel::hilbert(2), 20);
  CHECK(id[0] == doctest::Approx(1.0));
  CHECK(id[1] == 0.0);
  CHECK(id[2] == 0.0);
  CHECK(id[3] == 0.0);
  // The sequences start at n = 1, so T = 0 gives zeros throughout.
  for (double v : decay_sequences(ComplexMatrix::Zero(2, 2), SpaceModel::hilbert(2), 20)) CHECK(v == 0.0);

  const ComplexMatrix t = diag({0.5, 0.9});
  const auto a = decay_sequences(t, SpaceModel::hilbert(2), 100), b = decay_sequences(t, SpaceModel::hilbert(2), 200);
  for (int j = 0; j < 4; ++j) CHECK(std::abs(a[j] - b[j]) <= 1e-12);
  // S3 for the scalar 0.9: max_n n^3 0.9^n 0.1^3, by enumeration.
  double s3 = 0.0;
  for (int n = 1; n <= 200; ++n) s3 = std::max(s3, std::pow(n, 3) * std::pow(0.9, n) * 1e-3);
  CHECK(a[3] == doctest::Approx(s3).epsilon(1e-12));
}

TEST_CASE("mean_ergodic_projection: documented cases") {
  const ComplexMatrix p = mean_ergodic_projection(diag({1.0, 0.5}));
  CHECK((p - diag({1.0, 0.0})).norm() <= 1e-12);

  ComplexMatrix t(2, 2);
  t << 1.0, 1.0, 0.0, 0.5;
  ComplexMatrix expect(2, 2);
  expect << 1.0, 2.0, 0.0, 0.0;
  CHECK((mean_ergodic_projection(t) - expect).norm() <= 1e-12);

  CHECK(mean_ergodic_projection(diag({0.5, 0.2})).norm() == 0.0);

  ComplexMatrix jordan(2, 2);
  jordan << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(mean_ergodic_projection(jordan), DomainError);
}

TEST_CASE("mean_ergodic_projection: projection identities on random semisimple matrices") {
  CounterRng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> ev = ritt_eigenvalues(5, rng);
    ev[0] = 1.0;
    if (trial % 2) ev[1] = 1.0;
    const ComplexMatrix t = with_spectrum(ev, rng);
    const ComplexMatrix p = mean_ergodic_projection(t);
    CHECK((p * p - p).norm() <= 1e-10);
    CHECK((p * t - p).norm() <= 1e-10);
    CHECK((t * p - p).norm() <= 1e-10);
    CHECK(std::abs(p.trace() - Complex(trial % 2 ? 2.0 : 1.0)) <= 1e-10);
  }
}

TEST_CASE("ritt_verdict: documented cases") {
  RittConfig cfg;
  cfg.n_max = 128;
  const RittReport a = ritt_verdict(diag({0.5, 0.9}), SpaceModel::hilbert(2), cfg);
  CHECK(a.verdict == Verdict::ritt);
  CHECK(*a.type_alpha == 0.0);
  CHECK(a.resolvent_sup.size() == 3);

  ComplexMatrix rot(2, 2);
  rot << 0.0, -1.0, 1.0, 0.0;
  CHECK(ritt_verdict(rot, SpaceModel::hilbert(2), cfg).verdict == Verdict::not_ritt);

  const RittReport j = ritt_verdict(jordanish(), SpaceModel::hilbert(2), cfg);
  CHECK(j.verdict == Verdict::ritt);
  CHECK(j.power_bound > 1.0);

  ComplexMatrix jordan(2, 2);
  jordan << 1.0, 1.0, 0.0, 1.0;
  CHECK(ritt_verdict(jordan, SpaceModel::hilbert(2), cfg).verdict == Verdict::not_ritt);

  CHECK(ritt_verdict(diag({1.0, 0.5}), SpaceModel::hilbert(2), cfg).verdict == Verdict::ritt);
  CHECK(ritt_verdict(diag({1.5}), SpaceModel::hilbert(1), cfg).verdict == Verdict::not_ritt);
}

TEST_CASE("ritt_verdict is invariant under transposition") {
  CounterRng rng(43);
  RittConfig cfg;
  cfg.n_max = 128;
  for (int trial = 0; trial < 6; ++trial) {
    const ComplexMatrix t = with_spectrum(ritt_eigenvalues(4, rng), rng);
    const RittReport a = ritt_verdict(t, SpaceModel::hilbert(4), cfg);
    const RittReport b = ritt_verdict(t.transpose(), SpaceModel::hilbert(4), cfg);
    CHECK(a.verdict == b.verdict);
    CHECK(std::abs(*a.type_alpha - *b.type_alpha) <= 1e-8);
    for (int j = 0; j < 4; ++j) CHECK(std::abs(a.decay[j] - b.decay[j]) <= 1e-9 * (1.0 + a.decay[j]));
  }
}

TEST_CASE("increment_bound of rT stays uniformly bounded for Ritt T") {
  CounterRng rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix t = with_spectrum(ritt_eigenvalues(3, rng), rng);
    const SpaceModel h = SpaceModel::hilbert(3);
    REQUIRE(ritt_verdict(t, h, RittConfig{128}).verdict == Verdict::ritt);
    // n ||r^n T^n - r^(n-1) T^(n-1)|| <= C1 + sup_n n r^(n-1)(1 - r) ||T^(n-1)|| <= C1 + power bound.
    const double bound = increment_bound(t, h, 1000) + power_bound(t, h, 1000);
    for (double r : {0.9, 0.99, 0.999}) CHECK(increment_bound(r * t, h, 1000) <= bound);
  }
}

TEST_CASE("ritt diagnostics in non-Hilbert models") {
  const ComplexMatrix t = diag({0.5, 0.9});
  CHECK(power_bound(t, SpaceModel::lp(3.0, 2), 50) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(increment_bound(t, SpaceModel::sup(2), 50) == doctest::Approx(increment_bound(t, SpaceModel::hilbert(2), 50)));
  CHECK_THROWS_AS(power_bound(t, SpaceModel::hilbert(3), 5), ShapeError);
}
