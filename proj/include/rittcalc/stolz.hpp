#pragma once

// Stolz domains B_gamma (interior of the convex hull of 1 and the disc of
// radius sin(gamma)), quadrature on their boundaries, and sector boundaries.

#include <optional>
#include <string>
#include <vector>

#include "rittcalc/numlin.hpp"

namespace rittcalc::stolz {

struct StolzParams {
  double gamma;

  explicit StolzParams(double g);
};

// Composite Gauss-Legendre mesh. Straight pieces are split into geometrically
// graded panels toward their singular end (the vertex 1, or the sector apex 0).
struct MeshSpec {
  int arc_panels = 8;
  int segment_panels = 40;     // graded panels per straight piece
  double grading_ratio = 0.5;  // panel length ratio toward the singular end
  int points_per_panel = 10;
  double min_panel = 1e-12;    // innermost graded boundary is kept >= this
  int subdivisions = 1;        // every panel is split into this many equal parts

  // Same panel layout with every panel halved.
  MeshSpec refined() const;
  void validate() const;
};

struct StolzContour {
  std::vector<Complex> nodes;
  std::vector<Complex> tangents;  // unit, counterclockwise orientation
  std::vector<double> weights;    // Gauss weight times arclength element
  double beta = 0.0;
  MeshSpec mesh;

  std::size_t size() const { return nodes.size(); }
  double length() const;
};

struct SectorContour {
  std::vector<Complex> nodes;
  std::vector<Complex> tangents;
  std::vector<double> weights;
  double nu = 0.0;
  double r_max = 0.0;
  MeshSpec mesh;
  int panels_per_ray = 0;

  std::size_t size() const { return nodes.size(); }
  double length() const;

  // Bound on the neglected part of (1/2 pi i) int f(z) R(z, A) dz beyond r_max
  // when |f(z)| <= c |z|^-s there and ||z R(z, A)|| <= resolvent_bound.
  double truncation_estimate(double c, double s, double resolvent_bound) const;
};

// Open membership z in B_gamma.
bool contains(const StolzParams& params, Complex z);

// Membership in the closure of B_gamma dilated by tol.
bool in_closure(double gamma, Complex z, double tol = 1e-12);

// Smallest gamma with z in the closure of B_gamma; nullopt when z lies in no
// Stolz domain (|z| >= 1, z != 1). z = 1 gives 0.
std::optional<double> min_angle(Complex z);

// Upper tangent point sin(beta) e^{i(pi/2 - beta)} = 1 - cos(beta) e^{-i beta}.
Complex tangent_point(double beta);

// Exact perimeter 2 cos(beta) + sin(beta) (pi + 2 beta).
double boundary_length(double beta);

// Boundary parametrized by u in [0, 3]: [0,1] segment from 1 to the upper
// tangent point, [1,2] the arc, [2,3] segment from the lower tangent point
// back to 1. Counterclockwise.
Complex boundary_point(double beta, double u);

StolzContour boundary_contour(double beta, const MeshSpec& mesh = {});

// Rays r e^{+-i nu}, r in (0, r_max], oriented from infinity e^{i nu} through 0
// to infinity e^{-i nu} (positive orientation about the sector).
SectorContour sector_contour(double nu, double r_max = 50.0, const MeshSpec& mesh = {});

// (1 / 2 pi i) sum w tau / (lambda - z0).
Complex winding_number(const StolzContour& c, Complex z0);

// k * integral over the boundary of |lambda|^(k-1) |d lambda|.
double contour_moment(double beta, int k, const MeshSpec& mesh = {});

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_legendre(int n);

// Panel boundaries for [0, length] graded toward 0, innermost first:
// 0, L r^J, ..., L r, L.
std::vector<double> graded_breaks(double length, const MeshSpec& mesh);

// CSV rows: node_re,node_im,weight,tangent_re,tangent_im
std::string to_csv(const StolzContour& c);
std::string to_csv(const SectorContour& c);

}  // namespace rittcalc::stolz
