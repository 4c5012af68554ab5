#include "rittcalc/stolz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>

#include "rittcalc/errors.hpp"

namespace rittcalc::stolz {

namespace {

constexpr double kPi = M_PI;

double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

double segment_distance(Complex z, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0.0 ? std::real(std::conj(ab) * (z - a)) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

// Panels [a, b] of a graded straight piece, after subdivision, innermost first.
std::vector<std::pair<double, double>> graded_panels(double length, const MeshSpec& mesh) {
  const std::vector<double> br = graded_breaks(length, mesh);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i + 1 < br.size(); ++i) {
    const double a = br[i], b = br[i + 1];
    for (int s = 0; s < mesh.subdivisions; ++s)
      out.emplace_back(a + (b - a) * s / mesh.subdivisions, a + (b - a) * (s + 1) / mesh.subdivisions);
  }
  return out;
}

void push_rule(std::vector<double>& params, std::vector<double>& jac, double a, double b, int points) {
  const GaussRule& g = gauss_legendre(points);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    params.push_back(mid + half * g.nodes[i]);
    jac.push_back(half * g.weights[i]);
  }
}

template <class C>
std::string contour_csv(const C& c) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "node_re,node_im,weight,tangent_re,tangent_im\n";
  for (std::size_t i = 0; i < c.nodes.size(); ++i)
    os << c.nodes[i].real() << ',' << c.nodes[i].imag() << ',' << c.weights[i] << ',' << c.tangents[i].real() << ','
       << c.tangents[i].imag() << '\n';
  return os.str();
}

}  // namespace

StolzParams::StolzParams(double g) : gamma(g) {
  if (!(g > 0.0 && g < kPi / 2)) throw DomainError("Stolz angle must lie in (0, pi/2)");
}

MeshSpec MeshSpec::refined() const {
  MeshSpec m = *this;
  m.subdivisions *= 2;
  return m;
}

void MeshSpec::validate() const {
  if (arc_panels < 1 || segment_panels < 1 || points_per_panel < 1 || subdivisions < 1)
    throw DomainError("mesh panel counts must be >= 1");
  if (!(grading_ratio > 0.0 && grading_ratio < 1.0)) throw DomainError("grading ratio must lie in (0, 1)");
  if (!(min_panel > 0.0)) throw DomainError("minimum panel length must be positive");
}

double StolzContour::length() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double SectorContour::length() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double SectorContour::truncation_estimate(double c, double s, double resolvent_bound) const {
  if (!(s > 0.0)) return std::numeric_limits<double>::infinity();
  return c * resolvent_bound * std::pow(r_max, -s) / (kPi * s);
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw DomainError("Gauss-Legendre rule needs n >= 1");
  GaussRule r;
  r.nodes.resize(static_cast<std::size_t>(n));
  r.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    r.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

std::vector<double> graded_breaks(double length, const MeshSpec& mesh) {
  std::vector<double> desc{length};
  double b = length;
  for (int j = 1; j < mesh.segment_panels; ++j) {
    const double next = b * mesh.grading_ratio;
    if (next < mesh.min_panel) break;
    desc.push_back(next);
    b = next;
  }
  desc.push_back(0.0);
  return {desc.rbegin(), desc.rend()};
}

bool contains(const StolzParams& params, Complex z) {
  const double s = std::sin(params.gamma);
  if (std::abs(z) < s) return true;
  const Complex v0 = 1.0, v1 = tangent_point(params.gamma), v2 = std::conj(v1);
  return cross(v1 - v0, z - v0) > 0.0 && cross(v2 - v1, z - v1) > 0.0 && cross(v0 - v2, z - v2) > 0.0;
}

bool in_closure(double gamma, Complex z, double tol) {
  const double s = std::sin(gamma);
  if (std::abs(z) <= s + tol) return true;
  const Complex v0 = 1.0, v1 = tangent_point(gamma), v2 = std::conj(v1);
  if (cross(v1 - v0, z - v0) >= 0.0 && cross(v2 - v1, z - v1) >= 0.0 && cross(v0 - v2, z - v2) >= 0.0) return true;
  const double d = std::min({segment_distance(z, v0, v1), segment_distance(z, v1, v2), segment_distance(z, v2, v0)});
  return d <= tol;
}

std::optional<double> min_angle(Complex z) {
  if (z == Complex(1.0)) return 0.0;
  if (std::abs(z) >= 1.0) return std::nullopt;
  double lo = 0.0, hi = kPi / 2;
  if (in_closure(lo, z)) return 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (in_closure(mid, z))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

Complex tangent_point(double beta) { return std::sin(beta) * std::polar(1.0, kPi / 2 - beta); }

double boundary_length(double beta) { return 2.0 * std::cos(beta) + std::sin(beta) * (kPi + 2.0 * beta); }

Complex boundary_point(double beta, double u) {
  const double c = std::cos(beta);
  if (u <= 1.0) return 1.0 + u * c * std::polar(1.0, kPi - beta);
  if (u <= 2.0) return std::sin(beta) * std::polar(1.0, (kPi / 2 - beta) + (u - 1.0) * (kPi + 2.0 * beta));
  return 1.0 + (3.0 - u) * c * std::polar(1.0, -(kPi - beta));
}

StolzContour boundary_contour(double beta, const MeshSpec& mesh) {
  StolzParams check(beta);
  (void)check;
  mesh.validate();
  StolzContour out;
  out.beta = beta;
  out.mesh = mesh;
  const double len = std::cos(beta);
  const auto panels = graded_panels(len, mesh);
  const Complex up = std::polar(1.0, kPi - beta);
  const Complex down = std::polar(1.0, -(kPi - beta));

  std::vector<double> t, w;
  for (const auto& [a, b] : panels) push_rule(t, w, a, b, mesh.points_per_panel);
  for (std::size_t i = 0; i < t.size(); ++i) {
    out.nodes.push_back(1.0 + t[i] * up);
    out.tangents.push_back(up);
    out.weights.push_back(w[i]);
  }

  const double th0 = kPi / 2 - beta, th1 = 3 * kPi / 2 + beta, r = std::sin(beta);
  const int arc = mesh.arc_panels * mesh.subdivisions;
  std::vector<double> ta, wa;
  for (int k = 0; k < arc; ++k) push_rule(ta, wa, th0 + (th1 - th0) * k / arc, th0 + (th1 - th0) * (k + 1) / arc, mesh.points_per_panel);
  for (std::size_t i = 0; i < ta.size(); ++i) {
    const Complex e = std::polar(1.0, ta[i]);
    out.nodes.push_back(r * e);
    out.tangents.push_back(Complex(0.0, 1.0) * e);
    out.weights.push_back(r * wa[i]);
  }

  for (std::size_t i = t.size(); i-- > 0;) {
    out.nodes.push_back(1.0 + t[i] * down);
    out.tangents.push_back(-down);
    out.weights.push_back(w[i]);
  }
  return out;
}

SectorContour sector_contour(double nu, double r_max, const MeshSpec& mesh) {
  if (!(nu > 0.0 && nu < kPi)) throw DomainError("sector half-angle must lie in (0, pi)");
  if (!(r_max > 0.0)) throw DomainError("sector truncation radius must be positive");
  mesh.validate();
  SectorContour out;
  out.nu = nu;
  out.r_max = r_max;
  out.mesh = mesh;

  std::vector<std::pair<double, double>> panels = graded_panels(std::min(1.0, r_max), mesh);
  if (r_max > 1.0) {
    double a = 1.0;
    while (a < r_max) {
      const double b = std::min(r_max, a / mesh.grading_ratio);
      for (int s = 0; s < mesh.subdivisions; ++s)
        panels.emplace_back(a + (b - a) * s / mesh.subdivisions, a + (b - a) * (s + 1) / mesh.subdivisions);
      a = b;
    }
  }
  out.panels_per_ray = static_cast<int>(panels.size());
  std::vector<double> t, w;
  for (const auto& [a, b] : panels) push_rule(t, w, a, b, mesh.points_per_panel);

  const Complex e_up = std::polar(1.0, nu), e_dn = std::polar(1.0, -nu);
  for (std::size_t i = t.size(); i-- > 0;) {
    out.nodes.push_back(t[i] * e_up);
    out.tangents.push_back(-e_up);
    out.weights.push_back(w[i]);
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    out.nodes.push_back(t[i] * e_dn);
    out.tangents.push_back(e_dn);
    out.weights.push_back(w[i]);
  }
  return out;
}

Complex winding_number(const StolzContour& c, Complex z0) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c.weights[i] * c.tangents[i] / (c.nodes[i] - z0);
  return s / Complex(0.0, 2.0 * kPi);
}

double contour_moment(double beta, int k, const MeshSpec& mesh) {
  if (k < 1) throw DomainError("contour_moment needs k >= 1");
  const StolzContour c = boundary_contour(beta, mesh);
  double s = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) s += c.weights[i] * std::pow(std::abs(c.nodes[i]), k - 1);
  return k * s;
}

std::string to_csv(const StolzContour& c) { return contour_csv(c); }
std::string to_csv(const SectorContour& c) { return contour_csv(c); }

}  // namespace rittcalc::stolz
