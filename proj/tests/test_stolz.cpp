#include <cmath>

#include "doctest.h"
#include "rittcalc/errors.hpp"
#include "rittcalc/stolz.hpp"

using namespace rittcalc;
using namespace rittcalc::stolz;

namespace {

constexpr double kPi = M_PI;

// Closed-form smallest angle: either the disc part (|z| = sin g) or the
// tangent cone at 1 (|arg(1 - z)| = g), whichever region actually holds z.
double analytic_min_angle(Complex z) {
  const double disc = std::asin(std::abs(z));
  const double cone = std::abs(std::arg(1.0 - z));
  if (cone < disc) {
    // The cone angle only counts if z sits in the triangle for that angle,
    // i.e. beyond the tangent point along the ray from 1.
    const double reach = std::cos(cone);  // distance from 1 to the tangent point
    if (std::abs(1.0 - z) <= reach + 1e-15) return cone;
  }
  return disc;
}

}  // namespace

TEST_CASE("contains: documented points") {
  CHECK(contains(StolzParams(kPi / 4), 0.0));
  CHECK_FALSE(contains(StolzParams(kPi / 4), 1.0));
  CHECK_FALSE(contains(StolzParams(kPi / 6), Complex(0.0, 0.5)));
  CHECK(contains(StolzParams(kPi / 6 + 1e-6), Complex(0.0, 0.5 * (1.0 - 1e-6))));
  CHECK_THROWS_AS(StolzParams(0.0), DomainError);
  CHECK_THROWS_AS(StolzParams(kPi / 2), DomainError);
}

TEST_CASE("contains: monotone in gamma and symmetric under conjugation") {
  CounterRng rng(1);
  for (int i = 0; i < 4000; ++i) {
    const Complex z(rng.uniform(-1.1, 1.1), rng.uniform(-1.1, 1.1));
    const double g1 = rng.uniform(0.01, 1.5), g2 = rng.uniform(g1, 1.56);
    if (contains(StolzParams(g1), z)) CHECK(contains(StolzParams(g2), z));
    CHECK(contains(StolzParams(g1), z) == contains(StolzParams(g1), std::conj(z)));
  }
}

TEST_CASE("min_angle: vertex, real segment, tangency") {
  CHECK(*min_angle(1.0) == 0.0);
  CHECK(*min_angle(0.5) == 0.0);
  CHECK(std::abs(*min_angle(Complex(0.0, 0.5)) - kPi / 6) <= 1e-10);
  CHECK_FALSE(min_angle(-1.0).has_value());
  CHECK_FALSE(min_angle(Complex(0.0, 1.0)).has_value());
}

TEST_CASE("min_angle matches the closed-form crossing point") {
  CounterRng rng(2);
  for (int i = 0; i < 2000; ++i) {
    const double r = rng.uniform(0.0, 0.999), th = rng.uniform(-kPi, kPi);
    const Complex z = std::polar(r, th);
    const auto a = min_angle(z);
    REQUIRE(a.has_value());
    CHECK(std::abs(*a - analytic_min_angle(z)) <= 1e-10);
    // Unique crossing: just below is outside the closure, just above is inside.
    if (*a > 1e-9) CHECK_FALSE(in_closure(*a - 1e-9, z));
    CHECK(in_closure(std::min(*a + 1e-9, kPi / 2 - 1e-12), z));
  }
}

TEST_CASE("boundary_contour geometry") {
  const double beta = kPi / 4;
  const Complex tp = tangent_point(beta);
  CHECK(std::abs(tp - std::sqrt(0.5) * std::polar(1.0, kPi / 4)) <= 1e-15);
  CHECK(std::abs(tp - (1.0 - std::cos(beta) * std::polar(1.0, -beta))) <= 1e-15);

  const StolzContour c = boundary_contour(beta);
  const Complex up = std::polar(1.0, kPi - beta);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const Complex z = c.nodes[i];
    const double on_arc = std::abs(std::abs(z) - std::sin(beta));
    const double on_upper = std::abs(std::imag((z - 1.0) * std::conj(up)));
    const double on_lower = std::abs(std::imag((z - 1.0) * up));
    CHECK(std::min({on_arc, on_upper, on_lower}) <= 1e-12);
    CHECK(std::abs(std::abs(c.tangents[i]) - 1.0) <= 1e-14);
    CHECK(c.weights[i] > 0.0);
  }
}

TEST_CASE("boundary_contour length matches an independent arclength integral") {
  for (double beta : {kPi / 6, kPi / 4, kPi / 3}) {
    // Polyline oracle with Richardson extrapolation in the segment count.
    auto polyline = [&](int n) {
      double s = 0.0;
      Complex prev = boundary_point(beta, 0.0);
      for (int i = 1; i <= n; ++i) {
        const Complex z = boundary_point(beta, 3.0 * i / n);
        s += std::abs(z - prev);
        prev = z;
      }
      return s;
    };
    const double l1 = polyline(300000), l2 = polyline(600000);
    const double oracle = (4.0 * l2 - l1) / 3.0;
    const StolzContour c = boundary_contour(beta);
    CHECK(std::abs(c.length() - oracle) <= 1e-8);
    CHECK(std::abs(c.length() - boundary_length(beta)) <= 1e-12);
  }
}

TEST_CASE("boundary_contour winds once around interior points") {
  const StolzContour c = boundary_contour(kPi / 4);
  CHECK(std::abs(winding_number(c, 0.0) - 1.0) <= 1e-10);
  CHECK(std::abs(winding_number(c, 0.9) - 1.0) <= 1e-8);
  CHECK(std::abs(winding_number(c, 2.0)) <= 1e-10);
}

TEST_CASE("sector_contour") {
  MeshSpec mesh;
  const SectorContour s = sector_contour(kPi / 2, 50.0, mesh);
  for (const Complex& z : s.nodes) CHECK(std::abs(z.real()) <= 1e-12 * std::max(1.0, std::abs(z)));
  CHECK(s.size() == static_cast<std::size_t>(2 * s.panels_per_ray * mesh.points_per_panel));
  CHECK(std::abs(s.length() - 100.0) <= 1e-10);
  CHECK_THROWS_AS(sector_contour(0.0), DomainError);
}

TEST_CASE("contour_moment") {
  CHECK(std::abs(contour_moment(kPi / 4, 1) - boundary_length(kPi / 4)) <= 1e-12);
  const double a = contour_moment(kPi / 4, 100), b = contour_moment(kPi / 4, 100, MeshSpec{}.refined());
  CHECK(std::abs(a - b) <= 1e-8);
  for (double beta : {kPi / 6, kPi / 4, kPi / 3}) {
    double sup = 0.0;
    for (int k = 1; k <= 500; ++k) sup = std::max(sup, contour_moment(beta, k));
    CHECK(std::isfinite(sup));
    // Mass concentrates at the vertex: each side tends to 1 / cos(beta).
    CHECK(contour_moment(beta, 500) == doctest::Approx(2.0 / std::cos(beta)).epsilon(0.02));
    // Flat tail: the moments have settled by k = 400.
    for (int k = 400; k <= 500; k += 20)
      CHECK(contour_moment(beta, k) == doctest::Approx(contour_moment(beta, 500)).epsilon(0.01));
  }
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
  const GaussRule& g = gauss_legendre(10);
  double s0 = 0.0, s18 = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    s0 += g.weights[i];
    s18 += g.weights[i] * std::pow(g.nodes[i], 18);
  }
  CHECK(s0 == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s18 == doctest::Approx(2.0 / 19.0).epsilon(1e-14));
}
