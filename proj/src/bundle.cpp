#include "bundlecurv/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "bundlecurv/error.hpp"

namespace bundlecurv::bundle {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

oracle::Mat3 rotational_components(double l, double a) {
  oracle::Mat3 g{};
  g[0][0] = 1.0;
  g[1][1] = l * l + a * a;
  g[1][2] = g[2][1] = a;
  g[2][2] = 1.0;
  return g;
}

oracle::Box chart_box(surface::Interval r_range) {
  return oracle::Box{{r_range.lo, 0.0, 0.0}, {r_range.hi, kTwoPi, kTwoPi}};
}

}  // namespace

CircleBundleMetric::CircleBundleMetric(std::shared_ptr<const profile::Profile> p,
                                       double c, profile::WarpGrid warp)
    : profile_(std::move(p)),
      c_(c),
      warp_(std::move(warp)),
      base_(surface::RotMetric::from_warp(warp_)),
      H_(surface::RadialFunction::from_profile(*profile_, warp_.window)) {
  if (c_ == 0.0 || !std::isfinite(c_)) {
    throw Error(ErrorKind::Parameter, "bundle constant c must be finite and nonzero");
  }
}

double CircleBundleMetric::connection(double r) const {
  const double H = H_(r).value;
  return 0.5 * c_ * H * H;
}

oracle::Mat3 CircleBundleMetric::components(double r) const {
  return rotational_components(base_.warp(r).value, connection(r));
}

CircleBundleMetric build_example(std::shared_ptr<const profile::Profile> p, double c,
                                 profile::Window window) {
  if (!p) throw Error(ErrorKind::Parameter, "missing profile");
  if (c == 0.0 || !std::isfinite(c)) {
    throw Error(ErrorKind::Parameter, "bundle constant c must be finite and nonzero");
  }
  auto warp = profile::warp_from_profile(*p, c, window);
  return CircleBundleMetric(std::move(p), c, std::move(warp));
}

CircleBundleMetric build_example(std::shared_ptr<const profile::Profile> p, double c) {
  if (!p) throw Error(ErrorKind::Parameter, "missing profile");
  if (c == 0.0 || !std::isfinite(c)) {
    throw Error(ErrorKind::Parameter, "bundle constant c must be finite and nonzero");
  }
  const auto window = profile::first_window_for(*p, c);
  if (!window) {
    throw Error(ErrorKind::DegenerateWarp,
                "profile has no window on which c*H' > 0 (H' vanishes or has the wrong sign)");
  }
  return build_example(std::move(p), c, *window);
}

double curvature_function_check(const CircleBundleMetric& m) {
  const auto& g = m.profile().grid();
  const auto& w = m.warp().window;
  const auto l = m.warp().values();
  double worst = 0.0;
  for (std::size_t i = w.first; i <= w.last; ++i) {
    const double li = l[i - w.first];
    if (li == 0.0) continue;  // end node at a critical point of H
    const double H_tilde = m.c() * g[i].H * g[i].Hp / li;
    worst = std::max(worst, std::abs(H_tilde - g[i].H));
  }
  return worst;
}

FrameConnection levi_civita_frame(double H, std::array<double, 2> lambda_grad) {
  const double h = 0.5 * H;
  const double la = lambda_grad[0];
  const double lb = lambda_grad[1];
  constexpr int T = 0, A = 1, B = 2;
  FrameConnection f;
  // nabla T
  f.coeff[T][A] = {0.0, 0.0, h};
  f.coeff[T][B] = {0.0, -h, 0.0};
  // nabla A
  f.coeff[A][T] = {0.0, 0.0, h};
  f.coeff[A][A] = {0.0, 0.0, -lb};
  f.coeff[A][B] = {h, 0.0, la};
  // nabla B
  f.coeff[B][T] = {0.0, -h, 0.0};
  f.coeff[B][A] = {-h, lb, 0.0};
  f.coeff[B][B] = {0.0, -la, 0.0};
  return f;
}

oracle::Mat3 FrameSchouten::matrix() const noexcept {
  oracle::Mat3 m{};
  m[0][0] = s_tt;
  m[0][1] = m[1][0] = s_tx[0];
  m[0][2] = m[2][0] = s_tx[1];
  m[1][1] = m[2][2] = s_hor;
  return m;
}

FrameSchouten schouten_frame(double H, double K, double Hp) noexcept {
  FrameSchouten s;
  s.s_tt = -0.5 * K + 0.625 * H * H;
  // J grad H = H' J A = H' B for radial H.
  s.s_tx = {0.0, -0.5 * Hp};
  s.s_hor = -0.375 * H * H + 0.5 * K;
  return s;
}

double horizontal_sectional_curvature(double H, double alpha) noexcept {
  return 0.5 * alpha + 0.75 * H * H;
}

std::array<oracle::Vec3, 3> RotationalBundleChart::frame(double r) const {
  const double l = warp(r);
  const double a = connection(r);
  return {oracle::Vec3{0.0, 0.0, 1.0}, oracle::Vec3{1.0, 0.0, 0.0},
          oracle::Vec3{0.0, 1.0 / l, -a / l}};
}

RotationalBundleChart rotational_bundle_chart(std::function<double(double)> warp,
                                              std::function<double(double)> connection,
                                              surface::Interval r_range,
                                              double fd_step) {
  if (!warp || !connection) {
    throw Error(ErrorKind::Parameter, "bundle chart needs warp and connection");
  }
  oracle::ChartMetric metric(
      [warp, connection](const oracle::Vec3& x) {
        return rotational_components(warp(x[0]), connection(x[0]));
      },
      chart_box(r_range), fd_step);
  return {std::move(metric), std::move(warp), std::move(connection)};
}

RotationalBundleChart example_chart(const CircleBundleMetric& m, double fd_step,
                                    double edge_fraction, double max_substep) {
  if (!(edge_fraction >= 0.0 && edge_fraction < 0.5)) {
    throw Error(ErrorKind::Parameter, "edge fraction must lie in [0, 0.5)");
  }
  const auto w = m.window();
  const surface::Interval range{w.lo + edge_fraction * w.length(),
                                w.hi - edge_fraction * w.length()};
  const profile::ProfileFlow flow(m.profile(), range.lo, range.hi, max_substep);
  const double warp_c = m.warp().c;
  const double c = m.c();

  auto warp = [flow, warp_c](double r) { return warp_c * flow.state(r).Hp; };
  auto conn = [flow, c](double r) {
    const double H = flow.state(r).H;
    return 0.5 * c * H * H;
  };
  oracle::ChartMetric metric(
      [flow, warp_c, c](const oracle::Vec3& x) {
        const auto s = flow.state(x[0]);
        return rotational_components(warp_c * s.Hp, 0.5 * c * s.H * s.H);
      },
      chart_box(range), fd_step);
  return {std::move(metric), std::move(warp), std::move(conn)};
}

RotationalBundleChart lens_chart(int degree, double fd_step) {
  if (degree == 0) {
    throw Error(ErrorKind::Parameter, "lens chart needs a nonzero degree");
  }
  const double rho = 0.5 * std::abs(degree);
  const double d = degree;
  auto warp = [rho](double r) { return rho * std::sin(r / rho); };
  auto conn = [rho, d](double r) { return 0.5 * d * std::cos(r / rho); };
  const double span = std::numbers::pi * rho;
  return rotational_bundle_chart(warp, conn, {0.15 * span, 0.85 * span}, fd_step);
}

oracle::ChartMetric perturb_phiphi(const oracle::ChartMetric& m, double amplitude) {
  return oracle::ChartMetric(
      [m, amplitude](const oracle::Vec3& x) {
        oracle::Mat3 g = m(x);
        g[1][1] += amplitude * x[0] * x[0] * x[0];
        return g;
      },
      m.box(), m.fd_step());
}

}  // namespace bundlecurv::bundle
