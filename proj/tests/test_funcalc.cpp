#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "rittcalc/errors.hpp"
#include "rittcalc/funcalc.hpp"
#include "rittcalc/ritt.hpp"

using namespace rittcalc;
using namespace rittcalc::numlin;
using namespace rittcalc::funcalc;
using fixtures::diag;

namespace {

constexpr double kPi = M_PI;

ComplexMatrix triangular() {
  ComplexMatrix t(2, 2);
  t << 0.5, 0.3, 0.0, 0.2;
  return t;
}

HolomorphicFn z_minus_z2() { return HolomorphicFn::polynomial({0.0, 1.0, -1.0}); }

double rel(const ComplexMatrix& a, const ComplexMatrix& b) { return norm2(a - b) / std::max(norm2(b), 1e-300); }

}  // namespace

TEST_CASE("HolomorphicFn: Horner agrees with the closure form") {
  CounterRng rng(61);
  const std::vector<Complex> c = {Complex(0.3, -1.0), 2.0, Complex(0.0, 0.5), -1.5, 0.25};
  const HolomorphicFn p = HolomorphicFn::polynomial(c);
  const HolomorphicFn q = HolomorphicFn::closure([&](Complex z) {
    Complex s = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * std::pow(z, static_cast<double>(k));
    return s;
  });
  int tested = 0;
  while (tested < 100) {
    const Complex z(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    if (!stolz::contains(stolz::StolzParams(kPi / 4), z)) continue;
    CHECK(std::abs(p(z) - q(z)) <= 1e-13 * (1.0 + std::abs(q(z))));
    ++tested;
  }
}

TEST_CASE("HolomorphicFn: vanishing certificates of polynomials") {
  const auto c1 = z_minus_z2().certificate();
  REQUIRE(c1.has_value());
  CHECK(c1->s == 1.0);
  CHECK(c1->c == doctest::Approx(1.0));  // z - z^2 = (1 - z) z
  const auto c2 = HolomorphicFn::polynomial({1.0, -2.0, 1.0}).certificate();
  REQUIRE(c2.has_value());
  CHECK(c2->s == 2.0);
  CHECK_FALSE(HolomorphicFn::polynomial({1.0, 1.0}).certificate().has_value());
}

TEST_CASE("eval_poly") {
  CHECK((eval_poly(diag({0.5}), HolomorphicFn::polynomial({0.0, 0.0, 1.0})) - diag({0.25})).norm() == 0.0);
  CHECK(eval_poly(triangular(), HolomorphicFn::polynomial({1.0})) == identity(2));
  const ComplexMatrix t = triangular();
  CHECK((eval_poly(t, z_minus_z2()) - (t - t * t)).cwiseAbs().maxCoeff() <= 1e-16);
}

TEST_CASE("eval_contour: triangular example, two angles, homomorphism") {
  const ComplexMatrix t = triangular();
  const ComplexMatrix exact = eval_poly(t, z_minus_z2());
  const CalcReport a = eval_contour(t, z_minus_z2(), kPi / 4);
  CHECK(a.converged);
  CHECK(a.error_estimate >= 0.0);
  CHECK(rel(a.value, exact) <= 1e-8);
  const CalcReport b = eval_contour(t, z_minus_z2(), kPi / 3);
  CHECK(norm2(a.value - b.value) <= 1e-8);
  CHECK(norm2(a.value - b.value) <= a.error_estimate + b.error_estimate + 1e-13);

  const HolomorphicFn phi = z_minus_z2();
  const HolomorphicFn psi = HolomorphicFn::closure([](Complex z) { return std::exp(z) * (1.0 - z); },
                                                   H0Certificate{std::exp(1.0), 1.0}, "exp(z)(1-z)");
  const ComplexMatrix prod = eval_contour(t, phi * psi, kPi / 4).value;
  CHECK(norm2(prod - eval_contour(t, phi, kPi / 4).value * eval_contour(t, psi, kPi / 4).value) <= 1e-7);
}

TEST_CASE("eval_contour equals Horner on random Ritt matrices") {
  CounterRng rng(67);
  for (int trial = 0; trial < 6; ++trial) {
    const ComplexMatrix t = fixtures::random_ritt(5, rng);
    const double beta = default_beta(t, 1.4);
    std::vector<HolomorphicFn> phis;
    for (int d : {2, 7, 15}) phis.push_back(HolomorphicFn::polynomial(fixtures::vanishing_poly(d, rng)));
    const auto reports = eval_contour_many(t, phis, beta);
    for (std::size_t i = 0; i < phis.size(); ++i) {
      CHECK(reports[i].converged);
      CHECK(rel(reports[i].value, eval_poly(t, phis[i])) <= 1e-7);
    }
    // Transpose duality.
    const ComplexMatrix tt = eval_contour(t.transpose(), phis[1], beta).value;
    CHECK(norm2(tt - reports[1].value.transpose()) <= 1e-9 * (1.0 + norm2(tt)));
  }
}

TEST_CASE("eval_contour with eigenvalue 1 needs a certificate") {
  const ComplexMatrix t = diag({1.0, 0.5});
  const CalcReport r = eval_contour(t, z_minus_z2(), kPi / 4);
  CHECK(r.deflated);
  CHECK(norm2(r.value - diag({0.0, 0.25})) <= 1e-8);
  CHECK_THROWS_AS(eval_contour(t, HolomorphicFn::polynomial({1.0}), kPi / 4), InadmissibleError);
  const HolomorphicFn weak = HolomorphicFn::closure([](Complex z) { return std::pow(1.0 - z, 0.25); },
                                                    H0Certificate{1.0, 0.25});
  CHECK_THROWS_AS(eval_contour(t, weak, kPi / 4), InadmissibleError);
}

TEST_CASE("eval_contour rejects beta at or below the spectral type") {
  CHECK_THROWS_AS(eval_contour(diag({Complex(0.0, 0.5)}), z_minus_z2(), kPi / 6 - 0.01), DomainError);
  CHECK_THROWS_AS(eval_contour(diag({-1.0}), z_minus_z2(), kPi / 4), DomainError);
}

TEST_CASE("frac_power") {
  const FracPowerReport a = frac_power(diag({0.5, 0.75}), 0.5, kPi / 4);
  CHECK(norm2(a.calc.value - diag({std::sqrt(0.5), 0.5})) <= 1e-8);
  const ComplexMatrix t = triangular();
  CHECK(norm2(frac_power(t, 1.0, kPi / 4).calc.value - (identity(2) - t)) <= 1e-8);
  // Eigenvalue 1: the fixed vector is annihilated.
  CHECK(norm2(frac_power(diag({1.0, 0.75}), 0.5, kPi / 4).calc.value - diag({0.0, 0.5})) <= 1e-7);

  CounterRng rng(71);
  for (int trial = 0; trial < 5; ++trial) {
    const ComplexMatrix m = fixtures::random_ritt(4, rng);
    const double beta = default_beta(m, 1.4);
    const FracPowerReport r = frac_power(m, 0.5, beta);
    REQUIRE(r.oracle_diff.has_value());
    CHECK(*r.oracle_diff <= 1e-7 * (1.0 + norm2(*r.oracle)));
    const ComplexMatrix one = frac_power(m, 1.0, beta).calc.value;
    CHECK(norm2(r.calc.value * r.calc.value - one) <= 1e-6);
    const ComplexMatrix third = frac_power(m, 1.0 / 3.0, beta).calc.value;
    CHECK(norm2(third * frac_power(m, 2.0 / 3.0, beta).calc.value - one) <= 1e-6);
  }
}

TEST_CASE("scaled_calculus") {
  const HolomorphicFn id = HolomorphicFn::closure([](Complex z) { return z; }, std::nullopt, "z");
  CHECK(norm2(scaled_calculus(diag({0.5}), id, 0.9, kPi / 4).value - diag({0.45})) <= 1e-8);

  CounterRng rng(73);
  const ComplexMatrix t = fixtures::random_ritt(4, rng);
  const double beta = default_beta(t, 1.4);
  const HolomorphicFn phi = HolomorphicFn::closure([](Complex z) { return z * std::exp(z); }, std::nullopt, "z e^z");
  const auto study = scaled_study(t, phi, {0.9, 0.99, 0.999}, beta);
  CHECK(study[0].second > study[1].second);
  CHECK(study[1].second > study[2].second);
  // phi(rT) - phi(T) = -(1 - r) T phi'(T) + O((1 - r)^2): the first-order
  // term is removed before comparing at r = 0.9999.
  const ComplexMatrix limit = eval_contour(t, phi, beta).value;
  const HolomorphicFn dphi =
      HolomorphicFn::closure([](Complex z) { return z * (1.0 + z) * std::exp(z); }, std::nullopt, "z phi'");
  const ComplexMatrix slope = eval_contour(t, dphi, beta).value;
  const ComplexMatrix near = scaled_calculus(t, phi, 0.9999, beta).value;
  CHECK(norm2(near - limit + 1e-4 * slope) <= 1e-6);
  CHECK(norm2(near - limit) <= 1e-4 * norm2(slope) * 1.01 + 1e-6);
}

TEST_CASE("transfer_check") {
  const HolomorphicFn f = HolomorphicFn::closure([](Complex z) { return z / ((1.0 + z) * (1.0 + z)); },
                                                 H0Certificate{1.0, 1.0}, "z/(1+z)^2");
  const TransferReport a = transfer_check(diag({0.5}), f, kPi / 4);
  CHECK(std::abs(a.lhs(0, 0) - 0.5 / 2.25) <= 1e-6);
  CHECK(std::abs(a.rhs(0, 0) - 0.5 / 2.25) <= 1e-8);
  CHECK(a.diff <= 1e-6);
  CHECK(a.tail_estimate <= 1e-6);

  const HolomorphicFn g = HolomorphicFn::polynomial({0.0, 0.5, -0.25});  // z(2 - z)/4
  const TransferReport b = transfer_check(diag({0.5}), g, kPi / 4);
  CHECK(std::abs(b.rhs(0, 0) - 0.1875) <= 1e-10);
  CHECK(b.diff <= 1e-6);

  CounterRng rng(79);
  for (int trial = 0; trial < 3; ++trial) {
    const ComplexMatrix t = fixtures::random_ritt(4, rng);
    const auto alpha = ritt::spectral_type(t);
    const TransferReport r = transfer_check(t, f, 0.5 * (*alpha + kPi / 2));
    CHECK(r.diff <= 1e-6 * (1.0 + norm2(r.rhs)));
  }
}

TEST_CASE("hinf_norm") {
  CHECK(hinf_norm(HolomorphicFn::polynomial({0.0, 1.0}), kPi / 4) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(hinf_norm(HolomorphicFn::polynomial({1.0, -1.0}), kPi / 4) - (1.0 + std::sin(kPi / 4))) <= 1e-9);
  CHECK(hinf_norm(HolomorphicFn::polynomial({Complex(3.0, 4.0)}), kPi / 3) == doctest::Approx(5.0));
  CHECK(hinf_norm_disc(HolomorphicFn::polynomial({1.0, -1.0})) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("calculus_constant") {
  FamilySpec fam;
  fam.random_count = 40;
  const CalculusConstant a = calculus_constant(diag({0.5}), kPi / 4, SpaceModel::hilbert(1), fam);
  CHECK(a.value == doctest::Approx(1.0).epsilon(1e-12));

  CounterRng rng(83);
  const ComplexMatrix u = random_unitary(3, rng);
  const ComplexMatrix normal = u * diag({0.5, Complex(0.2, 0.3), 0.9}) * u.adjoint();
  CHECK(calculus_constant(normal, kPi / 3, SpaceModel::hilbert(3), fam).value <= 1.0 + 1e-10);

  CHECK(calculus_constant(fixtures::jordanish(), kPi / 4, SpaceModel::hilbert(2), fam).value > 1.0);
}

TEST_CASE("evenodd_split") {
  auto [a1, a2] = evenodd_split(HolomorphicFn::polynomial({0.0, 0.0, 0.0, 1.0}));
  CHECK(a1.coeffs() == std::vector<Complex>{0.0});
  CHECK(a2.coeffs() == std::vector<Complex>{0.0, 1.0});
  auto [b1, b2] = evenodd_split(HolomorphicFn::polynomial({1.0, 1.0, 1.0}));
  CHECK(b1.coeffs() == std::vector<Complex>{1.0, 1.0});
  CHECK(b2.coeffs() == std::vector<Complex>{1.0});

  CounterRng rng(89);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Complex> c;
    for (int k = 0; k <= 9; ++k) c.emplace_back(rng.normal(), rng.normal());
    const HolomorphicFn phi = HolomorphicFn::polynomial(c);
    auto [p1, p2] = evenodd_split(phi);
    for (std::size_t k = 0; k < c.size(); ++k) CHECK(c[k] == (k % 2 ? p2 : p1).coeffs()[k / 2]);
    const double h = hinf_norm_disc(phi, 1024);
    CHECK(hinf_norm_disc(p1, 1024) <= h + 1e-9);
    CHECK(hinf_norm_disc(p2, 1024) <= h + 1e-9);
  }
}

TEST_CASE("nevanlinna_diag") {
  const NevanlinnaReport a =
      nevanlinna_diag(diag({0.5}), HolomorphicFn::polynomial({1.0, -1.0}), SpaceModel::hilbert(1), 50, kPi / 4);
  CHECK(a.sup == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(nevanlinna_diag(diag({0.5}), HolomorphicFn::polynomial({0.0}), SpaceModel::hilbert(1), 50, kPi / 4).sup == 0.0);

  CounterRng rng(97);
  const ComplexMatrix t = fixtures::random_ritt(4, rng);
  const HolomorphicFn phi = z_minus_z2();
  const double x = nevanlinna_diag(t, phi, SpaceModel::hilbert(4), 200, 1.4).sup;
  const double y = nevanlinna_diag(t, phi, SpaceModel::hilbert(4), 400, 1.4).sup;
  CHECK(x == y);
}
