#include "bundlecurv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "bundlecurv/error.hpp"
#include "bundlecurv/parallel.hpp"

namespace bundlecurv::oracle {
namespace {

constexpr double kEigenFloor = 1e-12;

std::string point_str(const Vec3& x) {
  std::ostringstream os;
  os.precision(8);
  os << "(" << x[0] << ", " << x[1] << ", " << x[2] << ")";
  return os.str();
}

Vec3 shifted(Vec3 x, int axis, double d) {
  x[static_cast<std::size_t>(axis)] += d;
  return x;
}

Mat3 axpy(const Mat3& a, double s, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = a[i][j] + s * b[i][j];
  return out;
}

// Metric with first and second coordinate derivatives at one point.
struct MetricJet {
  Mat3 g{};
  Mat3 ginv{};
  std::array<Mat3, 3> dg{};                  // dg[m][i][j] = d_m g_ij
  std::array<std::array<Mat3, 3>, 3> ddg{};  // ddg[m][n][i][j]
};

MetricJet metric_jet(const ChartMetric& m, const Vec3& x) {
  const double h = m.fd_step();
  MetricJet jet;
  jet.g = m(x);
  jet.ginv = inverse(jet.g);
  std::array<Mat3, 3> plus{}, minus{};
  for (int a = 0; a < 3; ++a) {
    plus[a] = m(shifted(x, a, h));
    minus[a] = m(shifted(x, a, -h));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        jet.dg[a][i][j] = (plus[a][i][j] - minus[a][i][j]) / (2.0 * h);
        jet.ddg[a][a][i][j] =
            (plus[a][i][j] - 2.0 * jet.g[i][j] + minus[a][i][j]) / (h * h);
      }
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const Mat3 pp = m(shifted(shifted(x, a, h), b, h));
      const Mat3 pm = m(shifted(shifted(x, a, h), b, -h));
      const Mat3 mp = m(shifted(shifted(x, a, -h), b, h));
      const Mat3 mm = m(shifted(shifted(x, a, -h), b, -h));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const double v = (pp[i][j] - pm[i][j] - mp[i][j] + mm[i][j]) / (4.0 * h * h);
          jet.ddg[a][b][i][j] = v;
          jet.ddg[b][a][i][j] = v;
        }
    }
  }
  return jet;
}

Christoffel christoffel_from(const MetricJet& j) {
  Christoffel first{};  // first[l][i][k] = Gamma_{l i k}
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        first[l][i][k] = 0.5 * (j.dg[i][l][k] + j.dg[k][l][i] - j.dg[l][i][k]);
  Christoffel out{};
  for (int a = 0; a < 3; ++a)
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (int l = 0; l < 3; ++l) s += j.ginv[a][l] * first[l][i][k];
        out[a][i][k] = s;
      }
  return out;
}

Curvature curvature_from(const MetricJet& j) {
  const Christoffel gamma = christoffel_from(j);

  // d_m Gamma^k_ij = (d_m g^kl) Gamma_lij + g^kl d_m Gamma_lij
  std::array<Christoffel, 3> dgamma{};
  for (int m = 0; m < 3; ++m) {
    Mat3 dginv{};
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) s -= j.ginv[k][a] * j.dg[m][a][b] * j.ginv[b][l];
        dginv[k][l] = s;
      }
    for (int k = 0; k < 3; ++k)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double s = 0.0;
          for (int l = 0; l < 3; ++l) {
            const double first =
                0.5 * (j.dg[a][l][b] + j.dg[b][l][a] - j.dg[l][a][b]);
            const double dfirst =
                0.5 * (j.ddg[m][a][l][b] + j.ddg[m][b][l][a] - j.ddg[m][l][a][b]);
            s += dginv[k][l] * first + j.ginv[k][l] * dfirst;
          }
          dgamma[m][k][a][b] = s;
        }
  }

  // R^r_{s mu nu} = d_mu G^r_{nu s} - d_nu G^r_{mu s}
  //               + G^r_{mu l} G^l_{nu s} - G^r_{nu l} G^l_{mu s}
  Riemann up{};
  for (int r = 0; r < 3; ++r)
    for (int s = 0; s < 3; ++s)
      for (int mu = 0; mu < 3; ++mu)
        for (int nu = 0; nu < 3; ++nu) {
          double v = dgamma[mu][r][nu][s] - dgamma[nu][r][mu][s];
          for (int l = 0; l < 3; ++l) {
            v += gamma[r][mu][l] * gamma[l][nu][s] - gamma[r][nu][l] * gamma[l][mu][s];
          }
          up[r][s][mu][nu] = v;
        }

  Curvature c;
  for (int a = 0; a < 3; ++a)
    for (int s = 0; s < 3; ++s)
      for (int mu = 0; mu < 3; ++mu)
        for (int nu = 0; nu < 3; ++nu) {
          double v = 0.0;
          for (int r = 0; r < 3; ++r) v += j.g[a][r] * up[r][s][mu][nu];
          c.riemann[a][s][mu][nu] = v;
        }
  for (int s = 0; s < 3; ++s)
    for (int nu = 0; nu < 3; ++nu) {
      double v = 0.0;
      for (int r = 0; r < 3; ++r) v += up[r][s][r][nu];
      c.ricci[s][nu] = v;
    }
  // Symmetrize away O(h^2) asymmetry from the stencils.
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      const double v = 0.5 * (c.ricci[a][b] + c.ricci[b][a]);
      c.ricci[a][b] = c.ricci[b][a] = v;
    }
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) c.scalar += j.ginv[a][b] * c.ricci[a][b];
  return c;
}

Mat3 schouten_from(const MetricJet& j) {
  const Curvature c = curvature_from(j);
  return axpy(c.ricci, -0.25 * c.scalar, j.g);
}

}  // namespace

ChartMetric::ChartMetric(Components components, Box box, double fd_step)
    : components_(std::move(components)), box_(box), fd_step_(fd_step) {
  if (!components_) throw Error(ErrorKind::Parameter, "chart metric has no components");
  if (!(fd_step_ > 0.0) || !std::isfinite(fd_step_)) {
    throw Error(ErrorKind::Parameter, "fd_step must be positive");
  }
  for (int a = 0; a < 3; ++a) {
    if (!(box_.hi[a] > box_.lo[a])) {
      throw Error(ErrorKind::Parameter, "chart box must have positive extent");
    }
  }
}

ChartMetric ChartMetric::with_fd_step(double fd_step) const {
  return ChartMetric(components_, box_, fd_step);
}

ChartMetric ChartMetric::with_box(Box box) const {
  return ChartMetric(components_, box, fd_step_);
}

double determinant(const Mat3& m) noexcept {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Mat3 inverse(const Mat3& m) {
  const double det = determinant(m);
  if (!std::isfinite(det) || std::abs(det) < 1e-300) {
    throw Error(ErrorKind::DegenerateMetric, "singular metric matrix");
  }
  Mat3 adj{};
  adj[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  adj[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
  adj[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  adj[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  adj[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  adj[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
  adj[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  adj[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
  adj[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  for (auto& row : adj)
    for (auto& v : row) v /= det;
  return adj;
}

Vec3 symmetric_eigenvalues(const Mat3& a) noexcept {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  Vec3 e{};
  if (p1 == 0.0) {
    e = {a[0][0], a[1][1], a[2][2]};
    std::sort(e.begin(), e.end());
    return e;
  }
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) +
                    (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Mat3 b = a;
  for (int i = 0; i < 3; ++i) b[i][i] -= q;
  for (auto& row : b)
    for (auto& v : row) v /= p;
  const double r = std::clamp(determinant(b) / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  return {lo, 3.0 * q - hi - lo, hi};
}

void check_point(const ChartMetric& m, const Vec3& x) {
  // Relative slack so grid points placed exactly at the margin pass.
  const double margin = 2.0 * m.fd_step() * (1.0 - 1e-9);
  for (int a = 0; a < 3; ++a) {
    if (!(x[a] - margin >= m.box().lo[a] && x[a] + margin <= m.box().hi[a])) {
      throw Error(ErrorKind::Domain,
                  "point " + point_str(x) + " violates the 2*fd_step box margin");
    }
  }
  const Mat3 g = m(x);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      if (std::abs(g[i][j] - g[j][i]) > 1e-12 * (1.0 + std::abs(g[i][j]))) {
        throw Error(ErrorKind::DegenerateMetric,
                    "metric not symmetric at " + point_str(x));
      }
    }
  if (!(symmetric_eigenvalues(g)[0] > kEigenFloor)) {
    throw Error(ErrorKind::DegenerateMetric,
                "metric not positive definite at " + point_str(x));
  }
}

Christoffel christoffel(const ChartMetric& m, const Vec3& x) {
  check_point(m, x);
  return christoffel_from(metric_jet(m, x));
}

Curvature riemann_ricci_scalar(const ChartMetric& m, const Vec3& x) {
  check_point(m, x);
  return curvature_from(metric_jet(m, x));
}

Mat3 schouten_chart(const ChartMetric& m, const Vec3& x) {
  check_point(m, x);
  return schouten_from(metric_jet(m, x));
}

Cotton cotton_tensor(const ChartMetric& m, const Vec3& x) {
  check_point(m, x);
  const double h = m.fd_step();
  const MetricJet centre = metric_jet(m, x);
  const Christoffel gamma = christoffel_from(centre);
  const Mat3 s = schouten_from(centre);

  std::array<Mat3, 3> ds{};  // ds[i][j][k] = d_i S_jk
  for (int i = 0; i < 3; ++i) {
    const Mat3 sp = schouten_from(metric_jet(m, shifted(x, i, h)));
    const Mat3 sm = schouten_from(metric_jet(m, shifted(x, i, -h)));
    ds[i] = axpy(sp, -1.0, sm);
    for (auto& row : ds[i])
      for (auto& v : row) v /= 2.0 * h;
  }
  std::array<Mat3, 3> cov{};  // cov[i][j][k] = nabla_i S_jk
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double v = ds[i][j][k];
        for (int l = 0; l < 3; ++l) {
          v -= gamma[l][i][j] * s[l][k] + gamma[l][i][k] * s[j][l];
        }
        cov[i][j][k] = v;
      }
  Cotton c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i][j][k] = cov[i][j][k] - cov[j][i][k];
  return c;
}

CottonReport cotton_residual(const ChartMetric& m, std::array<int, 3> density) {
  const double margin = 2.0 * m.fd_step();
  std::array<std::vector<double>, 3> axes;
  for (int a = 0; a < 3; ++a) {
    const int n = density[a];
    if (n < 1) throw Error(ErrorKind::Parameter, "grid density must be positive");
    const double lo = m.box().lo[a] + margin;
    const double hi = m.box().hi[a] - margin;
    if (!(hi >= lo)) {
      throw Error(ErrorKind::Parameter, "box too small for the FD margin");
    }
    if (n == 1) {
      axes[a].push_back(0.5 * (lo + hi));
    } else {
      for (int k = 0; k < n; ++k) axes[a].push_back(lo + (hi - lo) * k / (n - 1));
    }
  }
  std::vector<Vec3> points;
  for (double x0 : axes[0])
    for (double x1 : axes[1])
      for (double x2 : axes[2]) points.push_back({x0, x1, x2});

  CottonReport report;
  report.fd_step = m.fd_step();
  report.samples.resize(points.size());
  detail::parallel_for(points.size(), [&](std::size_t n) {
    const Cotton c = cotton_tensor(m, points[n]);
    double worst = 0.0;
    for (const auto& mat : c)
      for (const auto& row : mat)
        for (double v : row) worst = std::max(worst, std::abs(v));
    report.samples[n] = {points[n], worst};
  });
  for (const auto& s : report.samples) {
    report.sup_norm = std::max(report.sup_norm, s.component_max);
  }
  return report;
}

CottonReport cotton_residual(const ChartMetric& m, int grid_density) {
  return cotton_residual(m, {grid_density, grid_density, grid_density});
}

double bilinear(const Mat3& form, const Vec3& u, const Vec3& v) noexcept {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += form[i][j] * u[i] * v[j];
  return s;
}

double trilinear(const Cotton& c, const Vec3& u, const Vec3& v, const Vec3& w) noexcept {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) s += c[i][j][k] * u[i] * v[j] * w[k];
  return s;
}

double quadrilinear(const Riemann& r, const Vec3& a, const Vec3& b, const Vec3& c,
                    const Vec3& d) noexcept {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) s += r[i][j][k][l] * a[i] * b[j] * c[k] * d[l];
  return s;
}

ChartMetric euclidean(Box box, double fd_step) {
  return ChartMetric(
      [](const Vec3&) {
        Mat3 g{};
        g[0][0] = g[1][1] = g[2][2] = 1.0;
        return g;
      },
      box, fd_step);
}

}  // namespace bundlecurv::oracle
