#pragma once

// Curvature-function profiles: solutions of 2H'' + H^3 + alpha*H = 0 on a
// uniform grid starting at a critical point (H(0) = A, H'(0) = 0).

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "bundlecurv/hermite.hpp"

namespace bundlecurv::profile {

struct OdeParams {
  double alpha = 0.0;
  double initial_value = 0.0;  // A = H(0)
  double r_max = 1.0;          // grid covers [0, r_max]
  double step = 1e-3;

  /// Throws ErrorKind::Parameter unless r_max > 0, step > 0 and the grid has
  /// at least 8 cells.
  void validate() const;

  /// Number of grid cells; the actual spacing is r_max / cells() <= step.
  std::size_t cells() const;
};

struct Sample {
  double r = 0.0;
  double H = 0.0;
  double Hp = 0.0;
};

struct State {
  double H = 0.0;
  double Hp = 0.0;
};

struct IntegrateOptions {
  double conservation_tolerance = 1e-8;
  double overflow_guard = 1e8;
};

/// H'' = -(H^3 + alpha H) / 2.
double second_derivative(double alpha, double H) noexcept;
/// H''' = -(3H^2 + alpha) H' / 2.
double third_derivative(double alpha, double H, double Hp) noexcept;
/// Derivatives H, H', ..., H^(5) at a point, all but the first two taken
/// from the ODE.
std::array<double, 6> derivative_chain(double alpha, double H, double Hp) noexcept;
/// 4 H'^2 + H^4 + 2 alpha H^2, constant along solutions.
double conserved_quantity(double alpha, double H, double Hp) noexcept;

/// Classical RK4 from `start` over a signed span using `substeps` equal steps.
State propagate(double alpha, State start, double span, int substeps);

class Profile {
 public:
  /// Validates grid shape (uniform, from 0 to r_max, strictly increasing) and
  /// that the conservation residual does not exceed `tolerance`.
  Profile(OdeParams params, std::vector<Sample> grid, double tolerance);

  const OdeParams& params() const noexcept { return params_; }
  double alpha() const noexcept { return params_.alpha; }
  const std::vector<Sample>& grid() const noexcept { return grid_; }
  double conserved_constant() const noexcept { return conserved_; }
  double tolerance() const noexcept { return tolerance_; }
  double spacing() const noexcept { return interp_.spacing(); }
  double r_max() const noexcept { return grid_.back().r; }

  /// (H, H', H'') at arbitrary r in [0, r_max] by quintic Hermite
  /// interpolation of nodes (H, H', H'') with H'' taken from the ODE.
  Jet at(double r) const;

 private:
  OdeParams params_;
  std::vector<Sample> grid_;
  double conserved_ = 0.0;
  double tolerance_ = 0.0;
  QuinticHermiteGrid interp_;
};

Profile integrate(const OdeParams& params, const IntegrateOptions& options = {});

/// max over the grid of |4H'^2 + H^4 + 2 alpha H^2 - E|.
double conservation_residual(const Profile& p);

/// Per-sample residuals, same order as p.grid().
std::vector<double> pointwise_residual(const Profile& p);

/// Inclusive range of grid indices on which H' has one strict sign (end nodes
/// may carry H' == 0 exactly).
struct Window {
  std::size_t first = 0;
  std::size_t last = 0;
  int sign = 0;
};

std::vector<Window> sign_definite_windows(const Profile& p);

/// First window on which sign(c) * H' > 0.
std::optional<Window> first_window_for(const Profile& p, double c);

/// First zero of H' strictly after `after_r`, located by bisection on the
/// interpolant inside the bracketing grid cell. Throws Domain if none exists.
double first_derivative_zero(const Profile& p, double after_r);

/// Whole-grid window.
Window full_window(const Profile& p);

/// H itself on a window, interpolated with nodes (H, H', H'') and
/// (H'', H''', H'''') from the ODE.
HermiteTower curvature_tower(const Profile& p, Window window);

/// Warp l = c H' sampled on a window. Each node carries l and its
/// derivatives up to l'''' = c H^(5) (from the ODE), so the warp can be
/// evaluated off-grid with three derivatives.
struct WarpGrid {
  double c = 0.0;
  Window window;
  HermiteTower samples;

  /// Warp values at the grid nodes.
  std::vector<double> values() const;
  /// Same grid with every derivative level multiplied by k.
  WarpGrid scaled(double k) const;
};

WarpGrid warp_from_profile(const Profile& p, double c);
WarpGrid warp_from_profile(const Profile& p, double c, Window window);

/// Smooth evaluation of the profile's solution on [lo, hi]: every evaluation
/// integrates from one fixed anchor node with a fixed number of substeps, so
/// the result is an analytic function of r. Used where higher derivatives are
/// taken by finite differences.
class ProfileFlow {
 public:
  ProfileFlow(const Profile& p, double lo, double hi, double max_substep);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double alpha() const noexcept { return alpha_; }

  State state(double r) const;
  Jet operator()(double r) const;

 private:
  double alpha_;
  double lo_;
  double hi_;
  double anchor_r_;
  State anchor_;
  int substeps_;
};

}  // namespace bundlecurv::profile
