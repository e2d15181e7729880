#pragma once

// Rotationally symmetric surface metrics g = dr^2 + l(r)^2 dphi^2 and the
// conformal-flatness system for radial curvature functions H(r):
//   Hess H = H (H^2 - K) Id,   2K - 3H^2 = alpha.

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "bundlecurv/hermite.hpp"
#include "bundlecurv/profile.hpp"

namespace bundlecurv::surface {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  bool contains(double r) const noexcept { return r >= lo && r <= hi; }
  bool interior(double r) const noexcept { return r > lo && r < hi; }
};

/// Function of r with three derivatives.
using Evaluator = std::function<Jet(double)>;

class RadialFunction {
 public:
  RadialFunction(Interval domain, Evaluator f);

  /// H from a profile, restricted to a window of its grid.
  static RadialFunction from_profile(const profile::Profile& p,
                                     profile::Window window);
  static RadialFunction from_profile(const profile::Profile& p);

  Interval domain() const noexcept { return domain_; }
  /// Throws Domain outside the domain.
  Jet operator()(double r) const;

 private:
  Interval domain_;
  Evaluator f_;
};

class RotMetric {
 public:
  /// Analytic warp; the evaluator must return l and its first three
  /// derivatives. `edge_margin` of 0 means "two sample spacings".
  RotMetric(Interval r_interval, Evaluator warp, double edge_margin = 0.0);

  /// Grid-backed warp; edge margin is two grid cells.
  static RotMetric from_warp(const profile::WarpGrid& warp);

  Interval r_interval() const noexcept { return interval_; }
  double edge_margin() const noexcept { return edge_margin_; }

  /// l and its derivatives at r in the closed interval.
  Jet warp(double r) const;

 private:
  Interval interval_;
  Evaluator warp_;
  double edge_margin_;
};

/// K = -l''/l at an interior point.
double gaussian_curvature(const RotMetric& m, double r);

/// dK/dr at an interior point.
double gaussian_curvature_slope(const RotMetric& m, double r);

struct HessianPair {
  double xx = 0.0;  // Hess u(X, X) = u''
  double yy = 0.0;  // Hess u(Y, Y) = (l'/l) u'
};

/// Hessian of a radial function in the orthonormal frame X = d/dr,
/// Y = (1/l) d/dphi. The mixed entry vanishes identically.
HessianPair radial_hessian(const RotMetric& m, const RadialFunction& u, double r);

struct FlatnessReport {
  double alpha_estimate = 0.0;
  double hess_residual = 0.0;        // sup |Hess H - H(H^2-K) Id|
  double constraint_residual = 0.0;  // sup |2K - 3H^2 - alpha|
  double trace_residual = 0.0;       // sup |tr Hess H - 2H(H^2-K)|
  Interval window;
  std::vector<double> grid;
};

/// Interior window actually sampled: the metric interval intersected with
/// H's domain, shrunk by the edge margin at both ends.
Interval sample_window(const RotMetric& m, const RadialFunction& H, int samples);

FlatnessReport flatness_residual(const RotMetric& m, const RadialFunction& H,
                                 int samples);

/// The six frame components of the Cotton obstruction d^nabla S on the total
/// space over (m, H), in the adapted frame (T, A, B) with A the lift of
/// d/dr and B the lift of (1/l) d/dphi. Entry k is C(E_i, E_j, E_m) =
/// (nabla_{E_i} S)(E_j, E_m) - (nabla_{E_j} S)(E_i, E_m) for
///   0: (A, B, T)   1: (A, T, B)   2: (B, T, A)
///   3: (B, T, B)   4: (A, B, B)   5: (B, A, A)
std::array<double, 6> dnabla_s_components(const RotMetric& m, const RadialFunction& H,
                                          double r);

struct DnablaSReport {
  std::array<double, 6> sup_norms{};
  Interval window;
  std::vector<double> grid;
};

DnablaSReport dnabla_s_frame_residual(const RotMetric& m, const RadialFunction& H,
                                      int samples);

}  // namespace bundlecurv::surface
