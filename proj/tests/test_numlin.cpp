#include <cmath>

#include "doctest.h"
#include "rittcalc/errors.hpp"
#include "rittcalc/numlin.hpp"

using namespace rittcalc;
using namespace rittcalc::numlin;

namespace {

ComplexMatrix diag(std::initializer_list<double> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

}  // namespace

TEST_CASE("eig: diagonal and nilpotent spectra") {
  const Spectrum s = eig(diag({0.2, 0.5}));
  REQUIRE(s.eigenvalues.size() == 2);
  CHECK(std::abs(s.eigenvalues(0) - 0.5) < 1e-15);
  CHECK(std::abs(s.eigenvalues(1) - 0.2) < 1e-15);

  ComplexMatrix nil = ComplexMatrix::Zero(2, 2);
  nil(0, 1) = 1.0;
  const Spectrum z = eig(nil);
  CHECK(std::abs(z.eigenvalues(0)) < 1e-15);
  CHECK(std::abs(z.eigenvalues(1)) < 1e-15);
  CHECK(std::isinf(z.condition));  // defective
}

TEST_CASE("eig: residual of every eigenpair of a random matrix") {
  CounterRng rng(7);
  const ComplexMatrix m = random_gaussian(6, 6, rng);
  const Spectrum s = eig(m, true);
  REQUIRE(s.eigenvectors.has_value());
  for (Index k = 0; k < 6; ++k) {
    const ComplexVector v = s.eigenvectors->col(k);
    CHECK((m * v - s.eigenvalues(k) * v).norm() <= 1e-10 * v.norm());
  }
  for (Index k = 1; k < 6; ++k) {
    const Complex a = s.eigenvalues(k - 1), b = s.eigenvalues(k);
    CHECK((a.real() > b.real() || (a.real() == b.real() && a.imag() >= b.imag())));
  }
}

TEST_CASE("eig rejects non-square input") {
  CHECK_THROWS_AS(eig(ComplexMatrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("solve: trivial systems and residual on a random system") {
  CounterRng rng(11);
  const ComplexMatrix b = random_gaussian(3, 2, rng);
  CHECK((solve(identity(3), b) - b).norm() == doctest::Approx(0.0));

  ComplexMatrix two(1, 1), one(1, 1);
  two(0, 0) = 2.0;
  one(0, 0) = 1.0;
  CHECK(std::abs(solve(two, one)(0, 0) - 0.5) < 1e-16);

  const ComplexMatrix m = random_gaussian(8, 8, rng) + 4.0 * identity(8);
  const ComplexMatrix rhs = random_gaussian(8, 3, rng);
  const ComplexMatrix x = solve(m, rhs);
  CHECK((m * x - rhs).norm() <= 1e-12 * rhs.norm());
}

TEST_CASE("solve: singular matrix carries its condition estimate") {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  try {
    solve(m, identity(2));
    FAIL("expected SingularMatrixError");
  } catch (const SingularMatrixError& e) {
    CHECK(e.rcond() < 1e-14);
  }
}

TEST_CASE("svd: rank one, identity, reconstruction") {
  ComplexMatrix ones = ComplexMatrix::Constant(2, 2, 1.0);
  const SvdResult a = svd(ones);
  CHECK(a.values(0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(a.values(1)) < 1e-15);

  const SvdResult id = svd(identity(4));
  for (Index i = 0; i < 4; ++i) CHECK(id.values(i) == doctest::Approx(1.0).epsilon(1e-15));

  CounterRng rng(3);
  const ComplexMatrix m = random_gaussian(5, 4, rng);
  const SvdResult s = svd(m, true);
  const ComplexMatrix rec = *s.u * s.values.cast<Complex>().asDiagonal() * s.v->adjoint();
  CHECK((m - rec).norm() <= 1e-10);
  for (Index i = 1; i < s.values.size(); ++i) CHECK(s.values(i - 1) >= s.values(i));
}

TEST_CASE("vec_norm in every model") {
  ComplexMatrix x(2, 1);
  x << 3.0, 4.0;
  CHECK(vec_norm(x, SpaceModel::hilbert(2)) == doctest::Approx(5.0));
  ComplexMatrix ones = ComplexMatrix::Constant(2, 1, 1.0);
  CHECK(vec_norm(ones, SpaceModel::lp(2.0, 2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(vec_norm(ComplexMatrix::Constant(2, 2, 1.0), SpaceModel::schatten(3.0, 2)) == doctest::Approx(2.0));
  CHECK(vec_norm(x, SpaceModel::sup(2)) == doctest::Approx(4.0));
  CHECK_THROWS_AS(vec_norm(x, SpaceModel::hilbert(3)), ShapeError);
}

TEST_CASE("Frobenius consistency: S^2 norm equals the Euclidean norm of vec(x)") {
  CounterRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix x = random_gaussian(3, 3, rng);
    CHECK(std::abs(vec_norm(x, SpaceModel::schatten(2.0, 3)) - vec_norm(vec(x), SpaceModel::hilbert(9))) <= 1e-12);
  }
}

TEST_CASE("space model invariants") {
  CHECK_THROWS_AS(SpaceModel::lp(2.0, std::vector<double>{1.0, 0.0}), DomainError);
  CHECK_THROWS_AS(SpaceModel::lp(1.0, 2), DomainError);
  const SpaceModel d = SpaceModel::lp(3.0, std::vector<double>{1.0, 2.0}).dual();
  CHECK(d.as<LpWeighted>().p == doctest::Approx(1.5));
  CHECK(d.as<LpWeighted>().weights[1] == doctest::Approx(std::pow(2.0, -0.5)));
  CHECK(SpaceModel::schatten(4.0, 3).dual().as<SchattenP>().p == doctest::Approx(4.0 / 3.0));
  CHECK(SpaceModel::schatten(4.0, 3).state_dim() == 9);
}

TEST_CASE("op_norm: diagonal on weighted l^p and identity everywhere") {
  const ComplexMatrix d = diag({2.0, 1.0});
  for (double p : {1.5, 3.0, 7.0}) {
    const OpNorm n = op_norm(d, SpaceModel::lp(p, 2));
    CHECK(n.lower == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(n.upper >= n.lower);
  }
  for (const SpaceModel& s : {SpaceModel::hilbert(4), SpaceModel::lp(3.0, 4), SpaceModel::schatten(3.0, 2),
                              SpaceModel::schatten(1.0, 2), SpaceModel::sup(4)}) {
    const OpNorm n = op_norm(identity(4), s);
    CHECK(n.lower == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(n.upper >= 1.0 - 1e-12);
    if (!s.is<SchattenP>()) CHECK(n.upper == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("op_norm: Hilbert matches the top singular value") {
  CounterRng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix m = random_gaussian(4, 4, rng);
    const OpNorm n = op_norm(m, SpaceModel::hilbert(4));
    CHECK(n.exact);
    CHECK(std::abs(n.lower - svd(m).values(0)) <= 1e-12 * n.lower);
  }
}

TEST_CASE("op_norm: approximate bracket is ordered and attained by the witness") {
  CounterRng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix m = random_gaussian(4, 4, rng);
    for (const SpaceModel& s :
         {SpaceModel::lp(3.0, std::vector<double>{1.0, 2.0, 0.5, 1.0}), SpaceModel::lp(1.3, 4), SpaceModel::schatten(3.0, 2),
          SpaceModel::schatten(1.0, 2)}) {
      const OpNorm n = op_norm(m, s);
      CHECK(n.lower <= n.upper);
      const double attained = vec_norm(m * n.witness, s) / vec_norm(n.witness, s);
      CHECK(attained == doctest::Approx(n.lower).epsilon(1e-10));
    }
  }
}

TEST_CASE("op_norm on l^p agrees with a brute-force angle grid for positive matrices") {
  // Positive matrices attain their l^p norm on nonnegative vectors.
  ComplexMatrix m(2, 2);
  m << 1.0, 0.7, 0.2, 1.3;
  for (double p : {1.5, 3.0}) {
    double best = 0.0;
    for (int i = 0; i <= 200000; ++i) {
      const double th = 0.5 * M_PI * i / 200000.0;
      const double a = std::cos(th), b = std::sin(th);
      const double nx = std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
      const double y0 = m(0, 0).real() * a + m(0, 1).real() * b, y1 = m(1, 0).real() * a + m(1, 1).real() * b;
      best = std::max(best, std::pow(std::pow(y0, p) + std::pow(y1, p), 1.0 / p) / nx);
    }
    const OpNorm n = op_norm(m, SpaceModel::lp(p, 2));
    CHECK(n.lower == doctest::Approx(best).epsilon(1e-9));
    CHECK(n.upper >= best - 1e-12);
  }
}

TEST_CASE("op_norm on SupSeq is the maximal row sum") {
  ComplexMatrix m(2, 2);
  m << 1.0, Complex(0.0, -2.0), 0.5, 0.5;
  const OpNorm n = op_norm(m, SpaceModel::sup(2));
  CHECK(n.exact);
  CHECK(n.lower == doctest::Approx(3.0));
  CHECK(vec_norm(m * n.witness, SpaceModel::sup(2)) == doctest::Approx(3.0));
}

TEST_CASE("mat_power_seq") {
  const auto z = mat_power_seq(ComplexMatrix::Zero(2, 2), 3);
  REQUIRE(z.size() == 4);
  CHECK(z[0] == identity(2));
  CHECK(z[3].norm() == 0.0);
  for (const auto& p : mat_power_seq(identity(3), 5)) CHECK(p == identity(3));
  const auto h = mat_power_seq(diag({0.5}), 10);
  CHECK(h[10](0, 0).real() == std::ldexp(1.0, -10));

  try {
    mat_power_seq(diag({1e200}), 4);
    FAIL("expected overflow");
  } catch (const OverflowError& e) {
    CHECK(e.first_index() == 2);
  }
}
