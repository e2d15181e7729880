#pragma once

// Circle bundles P -> M over rotational surfaces with the S^1-invariant metric
// pi*g + omega (x) omega, omega = dt + a(r) dphi, in the chart (r, phi, t).
// The adapted frame is (T, A, B): T = d/dt, A = d/dr, B = (d/dphi - a d/dt)/l,
// positively oriented with J A = B.

#include <array>
#include <functional>
#include <memory>

#include "bundlecurv/oracle.hpp"
#include "bundlecurv/profile.hpp"
#include "bundlecurv/surface.hpp"

namespace bundlecurv::bundle {

/// Metric assembled from a profile: base warp l = c H' on a sign-definite
/// window and connection form omega = dt + (c/2) H^2 dphi.
class CircleBundleMetric {
 public:
  CircleBundleMetric(std::shared_ptr<const profile::Profile> p, double c,
                     profile::WarpGrid warp);

  const profile::Profile& profile() const noexcept { return *profile_; }
  std::shared_ptr<const profile::Profile> profile_ptr() const noexcept { return profile_; }
  double c() const noexcept { return c_; }
  const profile::WarpGrid& warp() const noexcept { return warp_; }
  const surface::RotMetric& base() const noexcept { return base_; }
  const surface::RadialFunction& curvature() const noexcept { return H_; }
  surface::Interval window() const noexcept { return base_.r_interval(); }

  /// Chart components at r; phi and t do not enter.
  oracle::Mat3 components(double r) const;
  /// omega(d/dphi) = (c/2) H^2.
  double connection(double r) const;

 private:
  std::shared_ptr<const profile::Profile> profile_;
  double c_;
  profile::WarpGrid warp_;
  surface::RotMetric base_;
  surface::RadialFunction H_;
};

CircleBundleMetric build_example(std::shared_ptr<const profile::Profile> p, double c,
                                 profile::Window window);
/// Uses the first window on which c H' > 0.
CircleBundleMetric build_example(std::shared_ptr<const profile::Profile> p, double c);

/// sup over the window nodes of |c H H' / l - H|: the curvature function of
/// omega measured against the base area form, minus H.
double curvature_function_check(const CircleBundleMetric& m);

/// g(nabla_{E_e} E_v, E_k) for the frame E = (T, A, B).
struct FrameConnection {
  std::array<std::array<std::array<double, 3>, 3>, 3> coeff{};  // [v][e][k]

  /// Frame coefficients of nabla_{E_direction} E_field.
  std::array<double, 3> derivative(int field, int direction) const {
    return coeff[static_cast<std::size_t>(field)][static_cast<std::size_t>(direction)];
  }
};

/// nabla T = (H/2) J,
/// nabla A =  B (x) g(., H/2 T + J grad lambda) + T (x) g(., H/2 B),
/// nabla B = -A (x) g(., H/2 T + J grad lambda) - T (x) g(., H/2 A),
/// with lambda_grad the (A, B) components of grad lambda.
FrameConnection levi_civita_frame(double H, std::array<double, 2> lambda_grad);

struct FrameSchouten {
  double s_tt = 0.0;
  std::array<double, 2> s_tx{};  // S(T, A), S(T, B)
  double s_hor = 0.0;

  /// Symmetric 3x3 matrix in the (T, A, B) ordering.
  oracle::Mat3 matrix() const noexcept;
  double trace() const noexcept { return s_tt + 2.0 * s_hor; }
};

/// Schouten tensor of the total space for radial H:
/// S(T,T) = -K/2 + 5H^2/8, S(T,.) = -1/2 J grad H, S|hor = (K/2 - 3H^2/8) g.
FrameSchouten schouten_frame(double H, double K, double Hp) noexcept;

/// Sectional curvature of the horizontal distribution, alpha/2 + 3H^2/4.
double horizontal_sectional_curvature(double H, double alpha) noexcept;

/// Smooth coordinate realization of a rotational circle bundle for the
/// finite-difference oracle: g = dr^2 + l^2 dphi^2 + (dt + a dphi)^2.
struct RotationalBundleChart {
  oracle::ChartMetric metric;
  std::function<double(double)> warp;        // l(r)
  std::function<double(double)> connection;  // a(r)

  /// (T, A, B) as coordinate vectors in (r, phi, t).
  std::array<oracle::Vec3, 3> frame(double r) const;
  surface::Interval r_range() const noexcept {
    return {metric.box().lo[0], metric.box().hi[0]};
  }
};

RotationalBundleChart rotational_bundle_chart(std::function<double(double)> warp,
                                              std::function<double(double)> connection,
                                              surface::Interval r_range,
                                              double fd_step);

/// Chart of the example metric on its window shrunk by `edge_fraction` of
/// its length at each end. H and H' come from a ProfileFlow so the chart is
/// smooth in r.
RotationalBundleChart example_chart(const CircleBundleMetric& m, double fd_step,
                                    double edge_fraction = 0.15,
                                    double max_substep = 1e-3);

/// Local chart of the lens space L(|d|,1) over the round sphere of curvature
/// 4/d^2 with H = -2/d; constant sectional curvature 1/d^2.
RotationalBundleChart lens_chart(int degree, double fd_step);

/// Adds amplitude * r^3 to g_phiphi.
oracle::ChartMetric perturb_phiphi(const oracle::ChartMetric& m, double amplitude);

}  // namespace bundlecurv::bundle
