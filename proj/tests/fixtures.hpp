#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

#include "rittcalc/numlin.hpp"

namespace fixtures {

using rittcalc::Complex;
using rittcalc::ComplexMatrix;
using rittcalc::CounterRng;
using rittcalc::Index;

inline ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (Complex v : d) m(i, i) = v, ++i;
  return m;
}

// 0.5 I + [[0, 10], [0, 0]]: Ritt, far from a contraction.
inline ComplexMatrix jordanish() {
  ComplexMatrix t = 0.5 * rittcalc::numlin::identity(2);
  t(0, 1) = 10.0;
  return t;
}

// S diag(ev) S^-1 with a well-conditioned random S.
inline ComplexMatrix with_spectrum(const std::vector<Complex>& ev, CounterRng& rng) {
  const Index n = static_cast<Index>(ev.size());
  ComplexMatrix d = ComplexMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) d(i, i) = ev[static_cast<std::size_t>(i)];
  const ComplexMatrix s = rittcalc::numlin::random_gaussian(n, n, rng) + 2.0 * rittcalc::numlin::identity(n);
  return s * d * s.inverse();
}

// Eigenvalues inside B_{pi/6}: the disc of radius 0.45 plus real points near 1.
inline std::vector<Complex> ritt_eigenvalues(Index n, CounterRng& rng) {
  std::vector<Complex> ev;
  for (Index i = 0; i < n; ++i) {
    if (i % 2 == 0)
      ev.push_back(std::polar(0.45 * std::sqrt(rng.uniform()), rng.uniform(-M_PI, M_PI)));
    else
      ev.push_back(rng.uniform(0.5, 0.95));
  }
  return ev;
}

inline ComplexMatrix random_ritt(Index n, CounterRng& rng) { return with_spectrum(ritt_eigenvalues(n, rng), rng); }

// Random polynomial of the given degree with phi(1) = 0.
inline std::vector<Complex> vanishing_poly(int degree, CounterRng& rng) {
  std::vector<Complex> c;
  Complex sum = 0.0;
  for (int k = 0; k <= degree; ++k) {
    c.emplace_back(rng.normal(), rng.normal());
    sum += c.back();
  }
  c[0] -= sum;
  return c;
}

}  // namespace fixtures
