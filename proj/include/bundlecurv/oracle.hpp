#pragma once

// Finite-difference tensor calculus on a 3D coordinate chart. All
// derivatives are second-order central differences with one global step;
// mixed second derivatives use the 4-point cross stencil. Every evaluation
// needs a margin of 2*fd_step to the box boundary.

#include <array>
#include <functional>
#include <vector>

namespace bundlecurv::oracle {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;
/// gamma[k][i][j] = Gamma^k_{ij}
using Christoffel = std::array<Mat3, 3>;
/// Fully covariant R_{abcd}, with R(X,Y,X,Y) > 0 on the round sphere.
using Riemann = std::array<std::array<Mat3, 3>, 3>;
/// c[i][j][k] = nabla_i S_jk - nabla_j S_ik
using Cotton = std::array<Mat3, 3>;

struct Box {
  Vec3 lo{};
  Vec3 hi{};
};

class ChartMetric {
 public:
  using Components = std::function<Mat3(const Vec3&)>;

  /// `components` must be pure and safe to call concurrently.
  ChartMetric(Components components, Box box, double fd_step);

  Mat3 operator()(const Vec3& x) const { return components_(x); }
  const Box& box() const noexcept { return box_; }
  double fd_step() const noexcept { return fd_step_; }
  ChartMetric with_fd_step(double fd_step) const;
  ChartMetric with_box(Box box) const;

 private:
  Components components_;
  Box box_;
  double fd_step_;
};

/// Closed-form adjugate inverse; throws DegenerateMetric on a singular matrix.
Mat3 inverse(const Mat3& m);
double determinant(const Mat3& m) noexcept;
/// Eigenvalues of a symmetric matrix in ascending order.
Vec3 symmetric_eigenvalues(const Mat3& m) noexcept;

/// Throws Domain when x is closer than 2*fd_step to the box boundary and
/// DegenerateMetric when g(x) has an eigenvalue below 1e-12.
void check_point(const ChartMetric& m, const Vec3& x);

Christoffel christoffel(const ChartMetric& m, const Vec3& x);

struct Curvature {
  Riemann riemann{};
  Mat3 ricci{};
  double scalar = 0.0;
};

Curvature riemann_ricci_scalar(const ChartMetric& m, const Vec3& x);

/// Ric - (scal/4) g as a bilinear form.
Mat3 schouten_chart(const ChartMetric& m, const Vec3& x);

Cotton cotton_tensor(const ChartMetric& m, const Vec3& x);

struct CottonSample {
  Vec3 point{};
  double component_max = 0.0;
};

struct CottonReport {
  double sup_norm = 0.0;
  std::vector<CottonSample> samples;
  double fd_step = 0.0;
};

/// Sweeps a grid with `density[a]` points along axis a, spread over the box
/// minus the FD margin (a density of 1 samples the box midpoint).
CottonReport cotton_residual(const ChartMetric& m, std::array<int, 3> density);
CottonReport cotton_residual(const ChartMetric& m, int grid_density);

/// Contractions with vectors.
double bilinear(const Mat3& form, const Vec3& u, const Vec3& v) noexcept;
double trilinear(const Cotton& c, const Vec3& u, const Vec3& v, const Vec3& w) noexcept;
double quadrilinear(const Riemann& r, const Vec3& a, const Vec3& b, const Vec3& c,
                    const Vec3& d) noexcept;

/// Identity metric on a box.
ChartMetric euclidean(Box box, double fd_step);

}  // namespace bundlecurv::oracle
