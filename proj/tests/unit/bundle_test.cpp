#include "bundlecurv/bundle.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "bundlecurv/error.hpp"

namespace bundlecurv::bundle {
namespace {

constexpr double kPi = std::numbers::pi;

using oracle::Mat3;
using oracle::Vec3;

std::shared_ptr<const profile::Profile> lemniscatic(double r_max = 12.0, double step = 1e-3) {
  return std::make_shared<const profile::Profile>(profile::integrate({0.0, 1.0, r_max, step}));
}

// l = sin r, a = sin^2 r: H = a'/l = 2 cos r, K = 1. Not conformally flat.
struct Twisted {
  static double l(double r) { return std::sin(r); }
  static double lp(double r) { return std::cos(r); }
  static double a(double r) { return std::sin(r) * std::sin(r); }
  static double ap(double r) { return 2 * std::sin(r) * std::cos(r); }
  static double H(double r) { return 2 * std::cos(r); }
};

TEST(BuildExample, ChartComponentsAndDeterminant) {
  const auto m = build_example(lemniscatic(), 1.0);
  const auto& w = m.warp().window;
  const auto l = m.warp().values();
  for (std::size_t i = w.first; i <= w.last; i += 50) {
    const auto& s = m.profile().grid()[i];
    const Mat3 g = m.components(s.r);
    const double li = l[i - w.first];
    EXPECT_EQ(g[0][0], 1.0);
    EXPECT_EQ(g[2][2], 1.0);
    EXPECT_EQ(g[0][1], 0.0);
    EXPECT_EQ(g[0][2], 0.0);
    EXPECT_NEAR(g[1][2], 0.5 * s.H * s.H, 1e-15);
    EXPECT_EQ(g[1][2], g[2][1]);
    EXPECT_NEAR(g[1][1], li * li + 0.25 * std::pow(s.H, 4), 1e-15);
    EXPECT_NEAR(g[1][1] * g[2][2] - g[1][2] * g[2][1], li * li, 1e-14);
  }
  EXPECT_NEAR(m.window().lo, 5.244, 2e-3);
  EXPECT_NEAR(m.window().hi, 10.488, 2e-3);
}

TEST(BuildExample, Errors) {
  const auto constant =
      std::make_shared<const profile::Profile>(profile::integrate({-1.0, 1.0, 5.0, 1e-3}));
  try {
    build_example(constant, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateWarp);
  }
  try {
    build_example(lemniscatic(), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parameter);
  }
  // No window with H' > 0 before the first critical point.
  EXPECT_THROW(build_example(lemniscatic(4.0), 1.0), Error);
  EXPECT_NO_THROW(build_example(lemniscatic(4.0), -1.0));
}

TEST(CurvatureFunction, CancelsExactly) {
  for (double c : {1.0, 2.5}) {
    const auto m = build_example(lemniscatic(), c);
    EXPECT_LE(curvature_function_check(m), 1e-12);
  }
  EXPECT_LE(curvature_function_check(build_example(lemniscatic(4.0), -1.0)), 1e-12);
}

TEST(CurvatureFunction, TamperedWarpIsDetected) {
  const auto good = build_example(lemniscatic(), 1.0);
  const CircleBundleMetric tampered(good.profile_ptr(), 1.0, good.warp().scaled(2.0));
  double sup_h = 0.0;
  const auto& w = good.warp().window;
  for (std::size_t i = w.first; i <= w.last; ++i) {
    sup_h = std::max(sup_h, std::abs(good.profile().grid()[i].H));
  }
  EXPECT_NEAR(curvature_function_check(tampered), sup_h / 2.0, 1e-12);
}

TEST(LeviCivitaFrame, Examples) {
  const auto zero = levi_civita_frame(0.0, {0.0, 0.0});
  for (const auto& a : zero.coeff)
    for (const auto& b : a)
      for (double v : b) EXPECT_EQ(v, 0.0);

  const auto f = levi_civita_frame(2.0, {0.0, 0.0});
  EXPECT_EQ(f.derivative(0, 1), (std::array<double, 3>{0, 0, 1}));   // nabla_A T = B
  EXPECT_EQ(f.derivative(0, 2), (std::array<double, 3>{0, -1, 0}));  // nabla_B T = -A
  EXPECT_EQ(f.derivative(0, 0), (std::array<double, 3>{0, 0, 0}));

  // Rotational frame of the unit sphere at pi/4: l'/l = cot(pi/4) = 1.
  const double lambda = std::cos(kPi / 4) / std::sin(kPi / 4);
  EXPECT_NEAR(lambda, 1.0, 1e-15);
  const auto s = levi_civita_frame(0.0, {lambda, 0.0});
  EXPECT_NEAR(s.derivative(1, 2)[2], 1.0, 1e-15);   // nabla_B A = B
  EXPECT_NEAR(s.derivative(2, 2)[1], -1.0, 1e-15);  // nabla_B B = -A
}

TEST(LeviCivitaFrame, MetricSkew) {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 200; ++k) {
    const auto f = levi_civita_frame(u(rng), {u(rng), u(rng)});
    for (int e = 0; e < 3; ++e)
      for (int v = 0; v < 3; ++v)
        for (int w = 0; w < 3; ++w) {
          EXPECT_EQ(f.coeff[v][e][w], -f.coeff[w][e][v]);
        }
  }
}

// g(nabla_{E_e} E_v, E_k) from the oracle's Christoffel symbols.
double christoffel_frame(const RotationalBundleChart& chart, double r, int v, int e, int k,
                         const std::array<Vec3, 3>& dframe) {
  const Vec3 x{r, kPi, kPi};
  const auto gamma = oracle::christoffel(chart.metric, x);
  const auto E = chart.frame(r);
  Vec3 cov{};
  for (int c = 0; c < 3; ++c) {
    cov[c] = E[e][0] * dframe[v][c];  // only r-derivatives survive
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) cov[c] += gamma[c][i][j] * E[e][i] * E[v][j];
  }
  return oracle::bilinear(chart.metric(x), cov, E[k]);
}

TEST(LeviCivitaFrame, AgreesWithChristoffelSymbols) {
  const auto chart = rotational_bundle_chart(Twisted::l, Twisted::a, {0.3, 2.5}, 1e-3);
  for (double r : {0.6, 1.2, 2.2}) {
    const double l = Twisted::l(r), lp = Twisted::lp(r), a = Twisted::a(r), ap = Twisted::ap(r);
    // d/dr of (T, A, B) in coordinates.
    const std::array<Vec3, 3> dframe{Vec3{0, 0, 0}, Vec3{0, 0, 0},
                                     Vec3{0, -lp / (l * l), -(ap * l - a * lp) / (l * l)}};
    const auto f = levi_civita_frame(Twisted::H(r), {lp / l, 0.0});
    for (int v = 0; v < 3; ++v)
      for (int e = 0; e < 3; ++e)
        for (int k = 0; k < 3; ++k) {
          EXPECT_NEAR(f.coeff[v][e][k], christoffel_frame(chart, r, v, e, k, dframe), 1e-5)
              << "v=" << v << " e=" << e << " k=" << k << " r=" << r;
        }
  }
}

TEST(SchoutenFrame, Examples) {
  const auto z = schouten_frame(0, 0, 0);
  EXPECT_EQ(z.s_tt, 0.0);
  EXPECT_EQ(z.s_hor, 0.0);
  EXPECT_EQ(z.s_tx, (std::array<double, 2>{0.0, 0.0}));

  const auto lens = schouten_frame(-1, 1, 0);
  EXPECT_DOUBLE_EQ(lens.s_tt, 0.125);
  EXPECT_DOUBLE_EQ(lens.s_hor, 0.125);

  const auto p = schouten_frame(1, 0, 0);
  EXPECT_DOUBLE_EQ(p.s_tt, 0.625);
  EXPECT_DOUBLE_EQ(p.s_hor, -0.375);

  const auto t = schouten_frame(0.3, -0.2, 0.8);
  EXPECT_EQ(t.s_tx[0], 0.0);
  EXPECT_DOUBLE_EQ(t.s_tx[1], -0.4);
}

TEST(SchoutenFrame, TraceIdentityAndLinearity) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int k = 0; k < 500; ++k) {
    const double H = u(rng), K = u(rng), Hp = u(rng);
    const auto s = schouten_frame(H, K, Hp);
    EXPECT_NEAR(s.trace(), K / 2 - H * H / 8, 1e-12);
    const auto m = s.matrix();
    EXPECT_EQ(m[0][2], m[2][0]);
    EXPECT_EQ(m[0][2], -0.5 * Hp);
    const auto s2 = schouten_frame(H, K, 2 * Hp);
    EXPECT_EQ(s2.s_tx[1], 2 * s.s_tx[1]);
  }
  EXPECT_EQ(schouten_frame(1, 2, 0).s_tx[1], 0.0);
}

TEST(SchoutenFrame, MatchesOracleOnLensSpace) {
  const auto chart = lens_chart(2, 2e-3);
  const auto rr = chart.r_range();
  const auto want = schouten_frame(-1.0, 1.0, 0.0).matrix();
  for (double t : {0.25, 0.5, 0.75}) {
    const double r = rr.lo + t * (rr.hi - rr.lo);
    const auto S = oracle::schouten_chart(chart.metric, {r, 1.0, 1.0});
    const auto E = chart.frame(r);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        EXPECT_NEAR(oracle::bilinear(S, E[a], E[b]), want[a][b], 1e-5);
      }
  }
}

TEST(SchoutenFrame, MatchesOracleOnGeneralChart) {
  const auto chart = rotational_bundle_chart(Twisted::l, Twisted::a, {0.3, 2.5}, 2e-3);
  for (double r : {0.5, 1.0, 1.7, 2.3}) {
    const auto S = oracle::schouten_chart(chart.metric, {r, 1.0, 1.0});
    const auto E = chart.frame(r);
    const auto want = schouten_frame(Twisted::H(r), 1.0, -2 * std::sin(r)).matrix();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        EXPECT_NEAR(oracle::bilinear(S, E[a], E[b]), want[a][b], 1e-4);
      }
  }
}

TEST(SchoutenFrame, MatchesOracleOnExampleWithSecondOrder) {
  const auto m = build_example(lemniscatic(), 1.0);
  const auto dev = [&](double h) {
    const auto chart = example_chart(m, h);
    const auto rr = chart.r_range();
    double worst = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double r = rr.lo + (rr.hi - rr.lo) * (i + 0.5) / 6;
      const auto S = oracle::schouten_chart(chart.metric, {r, kPi, kPi});
      const auto E = chart.frame(r);
      const auto H = m.curvature()(r);
      const auto want =
          schouten_frame(H.value, surface::gaussian_curvature(m.base(), r), H.d1).matrix();
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          worst = std::max(worst, std::abs(oracle::bilinear(S, E[a], E[b]) - want[a][b]));
        }
    }
    return worst;
  };
  const double coarse = dev(5e-3);
  const double fine = dev(2.5e-3);
  EXPECT_LE(fine, 1e-4);
  EXPECT_GE(coarse / fine, 3.5);
}

TEST(CottonFrame, SixComponentsMatchOracle) {
  const auto chart = rotational_bundle_chart(Twisted::l, Twisted::a, {0.3, 2.5}, 2.5e-3);
  const surface::RotMetric base({0.3, 2.5}, [](double r) {
    return Jet{std::sin(r), std::cos(r), -std::sin(r), -std::cos(r)};
  });
  const surface::RadialFunction H({0.3, 2.5}, [](double r) {
    return Jet{2 * std::cos(r), -2 * std::sin(r), -2 * std::cos(r), 2 * std::sin(r)};
  });
  const int slots[6][3] = {{1, 2, 0}, {1, 0, 2}, {2, 0, 1}, {2, 0, 2}, {1, 2, 2}, {2, 1, 1}};
  for (double r : {0.7, 1.3, 2.0}) {
    const auto C = oracle::cotton_tensor(chart.metric, {r, kPi, kPi});
    const auto E = chart.frame(r);
    const auto comp = surface::dnabla_s_components(base, H, r);
    double size = 0.0;
    for (int k = 0; k < 6; ++k) {
      const double fd = oracle::trilinear(C, E[slots[k][0]], E[slots[k][1]], E[slots[k][2]]);
      EXPECT_NEAR(comp[k], fd, 1e-4) << "component " << k << " r=" << r;
      size = std::max(size, std::abs(comp[k]));
    }
    EXPECT_GT(size, 0.1);
  }
}

TEST(HorizontalSectionalCurvature, Examples) {
  EXPECT_EQ(horizontal_sectional_curvature(0.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(horizontal_sectional_curvature(1.0, -1.0), 0.25);
  EXPECT_DOUBLE_EQ(horizontal_sectional_curvature(1.0, -1.0), 1.0 - 0.75);
  EXPECT_DOUBLE_EQ(horizontal_sectional_curvature(0.5, 0.0), 0.1875);
}

TEST(HorizontalSectionalCurvature, MatchesBaseAndOracle) {
  const auto m = build_example(lemniscatic(), 1.0);
  // On the window H rises from -1 to 1; find H = 0.5 by bisection.
  double lo = m.window().lo + 0.1, hi = m.window().hi - 0.1;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (m.curvature()(mid).value < 0.5 ? lo : hi) = mid;
  }
  const double r = 0.5 * (lo + hi);
  const double K = surface::gaussian_curvature(m.base(), r);
  EXPECT_NEAR(K - 0.75 * 0.25, 0.1875, 1e-8);

  const auto chart = example_chart(m, 2e-3, 0.05);
  const auto E = chart.frame(r);
  const auto c = oracle::riemann_ricci_scalar(chart.metric, {r, kPi, kPi});
  EXPECT_NEAR(oracle::quadrilinear(c.riemann, E[1], E[2], E[1], E[2]), 0.1875, 1e-4);
}

TEST(Charts, PerturbationAddsCubic) {
  const auto chart = lens_chart(3, 1e-2);
  const auto p = perturb_phiphi(chart.metric, 0.1);
  const Vec3 x{2.0, 1.0, 1.0};
  const Mat3 g0 = chart.metric(x);
  const Mat3 g1 = p(x);
  EXPECT_NEAR(g1[1][1] - g0[1][1], 0.8, 1e-14);
  EXPECT_EQ(g1[1][2], g0[1][2]);
  EXPECT_THROW(lens_chart(0, 1e-2), Error);
  EXPECT_THROW(example_chart(build_example(lemniscatic(), 1.0), 1e-3, 0.5), Error);
}

TEST(Charts, ExampleChartMatchesGridMetric) {
  const auto m = build_example(lemniscatic(), 1.0);
  const auto chart = example_chart(m, 1e-3);
  for (double r : {6.2, 7.0, 8.5, 9.6}) {
    const Mat3 a = chart.metric({r, 0.5, 0.5});
    const Mat3 b = m.components(r);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) EXPECT_NEAR(a[i][j], b[i][j], 1e-10);
  }
}

}  // namespace
}  // namespace bundlecurv::bundle
