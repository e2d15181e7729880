#include "bundlecurv/profile.hpp"

#include <cmath>
#include <random>

#include <boost/math/special_functions/ellint_1.hpp>
#include <gtest/gtest.h>

#include "bundlecurv/error.hpp"

namespace bundlecurv::profile {
namespace {

// Independent integrator for the first-order system (H, H').
struct Ref {
  double H;
  double Hp;
};

Ref ref_rhs(double alpha, Ref s) { return {s.Hp, -0.5 * (s.H * s.H * s.H + alpha * s.H)}; }

Ref ref_flow(double alpha, Ref s, double span, long n) {
  const double h = span / static_cast<double>(n);
  for (long i = 0; i < n; ++i) {
    const Ref k1 = ref_rhs(alpha, s);
    const Ref k2 = ref_rhs(alpha, {s.H + 0.5 * h * k1.H, s.Hp + 0.5 * h * k1.Hp});
    const Ref k3 = ref_rhs(alpha, {s.H + 0.5 * h * k2.H, s.Hp + 0.5 * h * k2.Hp});
    const Ref k4 = ref_rhs(alpha, {s.H + h * k3.H, s.Hp + h * k3.Hp});
    s.H += h / 6.0 * (k1.H + 2 * k2.H + 2 * k3.H + k4.H);
    s.Hp += h / 6.0 * (k1.Hp + 2 * k2.Hp + 2 * k3.Hp + k4.Hp);
  }
  return s;
}

// Zero of H'(r) for r in [lo, hi], each evaluation a fresh n-step flow from 0.
double ref_zero(double alpha, double A, double lo, double hi, long n) {
  const auto f = [&](double r) { return ref_flow(alpha, {A, 0.0}, r, n).Hp; };
  double flo = f(lo);
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no bundlecurv::Error thrown";
  return ErrorKind::Parameter;
}

TEST(Integrate, EquilibriumIsExactlyConstant) {
  const Profile p = integrate({-1.0, 1.0, 5.0, 1e-3});
  for (const auto& s : p.grid()) {
    ASSERT_EQ(s.H, 1.0);
    ASSERT_EQ(s.Hp, 0.0);
  }
  EXPECT_EQ(conservation_residual(p), 0.0);
  EXPECT_EQ(p.conserved_constant(), -1.0);
}

TEST(Integrate, ZeroSolution) {
  const Profile p = integrate({0.0, 0.0, 1.0, 1e-2});
  EXPECT_EQ(p.grid().size(), 101u);
  for (const auto& s : p.grid()) {
    ASSERT_EQ(s.H, 0.0);
    ASSERT_EQ(s.Hp, 0.0);
  }
  EXPECT_EQ(conservation_residual(p), 0.0);
}

TEST(Integrate, GridShape) {
  const Profile p = integrate({0.0, 1.0, 4.0, 1e-3});
  const auto& g = p.grid();
  ASSERT_EQ(g.size(), 4001u);
  EXPECT_EQ(g.front().r, 0.0);
  EXPECT_EQ(g.back().r, 4.0);
  EXPECT_EQ(g.front().Hp, 0.0);
  EXPECT_EQ(g.front().H, 1.0);
  for (std::size_t i = 1; i < g.size(); ++i) ASSERT_GT(g[i].r, g[i - 1].r);
  EXPECT_EQ(p.conserved_constant(), 1.0);

  // A step that does not divide r_max is shrunk to the next uniform grid.
  const Profile q = integrate({0.0, 1.0, 1.0, 0.3 / 2.9}, {1e-3, 1e8});
  EXPECT_EQ(q.grid().back().r, 1.0);
  EXPECT_LE(q.spacing(), 0.3 / 2.9);
}

TEST(Integrate, OscillatoryProfileConservesEnergy) {
  const Profile p = integrate({0.0, 1.0, 4.0, 1e-3});
  for (const auto& s : p.grid()) {
    ASSERT_NEAR(4 * s.Hp * s.Hp + s.H * s.H * s.H * s.H, 1.0, 1e-8);
  }
  EXPECT_LE(conservation_residual(p), 1e-8);
}

TEST(Integrate, AgreesWithIndependentIntegration) {
  const Profile p = integrate({0.5, 1.5, 3.0, 1e-3});
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int k = 0; k < 20; ++k) {
    const double r = u(rng);
    const Ref want = ref_flow(0.5, {1.5, 0.0}, r, 20000);
    const Jet got = p.at(r);
    EXPECT_NEAR(got.value, want.H, 1e-10) << "r=" << r;
    EXPECT_NEAR(got.d1, want.Hp, 1e-9) << "r=" << r;
    EXPECT_NEAR(got.d2, second_derivative(0.5, want.H), 1e-8) << "r=" << r;
  }
}

TEST(FirstDerivativeZero, LemniscaticClosedFormAndRichardsonOracle) {
  // For alpha = 0, A = 1 the solution is cn(r / sqrt 2) with modulus 1/sqrt 2,
  // so H' first vanishes at 2 sqrt(2) K(1/sqrt 2).
  const double closed = 2.0 * std::sqrt(2.0) * boost::math::ellint_1(1.0 / std::sqrt(2.0));
  EXPECT_NEAR(closed, 5.24411510858424, 1e-13);

  const Profile p = integrate({0.0, 1.0, 6.0, 1e-3});
  const double z = first_derivative_zero(p, 0.0);

  const double coarse = ref_zero(0.0, 1.0, 5.0, 5.5, 6000 * 16 / 6 * 5);
  const double fine = ref_zero(0.0, 1.0, 5.0, 5.5, 6000 * 32 / 6 * 5);
  const double richardson = fine + (fine - coarse) / 15.0;

  EXPECT_NEAR(richardson, closed, 1e-11);
  EXPECT_NEAR(z, richardson, 1e-9);
  EXPECT_NEAR(z, closed, 1e-9);
}

TEST(FirstDerivativeZero, NoneOnShortGrid) {
  const Profile p = integrate({0.0, 1.0, 4.0, 1e-3});
  EXPECT_EQ(kind_of([&] { first_derivative_zero(p, 0.0); }), ErrorKind::Domain);
}

TEST(ConservationResidual, FourthOrderConvergence) {
  for (double alpha : {0.0, 1.0, -1.0}) {
    for (double A : {0.5, 1.0, 2.0}) {
      if (alpha == -1.0 && A == 1.0) continue;  // equilibrium: exactly zero
      const double coarse = conservation_residual(integrate({alpha, A, 4.0, 0.02}, {1e-3, 1e8}));
      const double fine = conservation_residual(integrate({alpha, A, 4.0, 0.01}, {1e-3, 1e8}));
      const double ratio = coarse / fine;
      EXPECT_GE(ratio, 12.0) << "alpha=" << alpha << " A=" << A;
      EXPECT_LE(ratio, 20.0) << "alpha=" << alpha << " A=" << A;
    }
  }
}

TEST(ConservationResidual, EquilibriaAreExact) {
  for (double a : {0.5, 1.0, 1.5, 2.0, 3.0}) {
    for (double A : {a, -a}) {
      const Profile p = integrate({-a * a, A, 2.0, 1e-2});
      EXPECT_EQ(conservation_residual(p), 0.0) << "A=" << A;
      EXPECT_EQ(p.grid().back().H, A);
    }
  }
}

TEST(ConservationResidual, PointwiseMatchesMax) {
  const Profile p = integrate({1.0, 2.0, 4.0, 1e-3});
  const auto res = pointwise_residual(p);
  ASSERT_EQ(res.size(), p.grid().size());
  EXPECT_EQ(*std::max_element(res.begin(), res.end()), conservation_residual(p));
  for (double v : res) EXPECT_GE(v, 0.0);
}

TEST(Integrate, TimeSymmetryAboutCriticalPoint) {
  const Profile p = integrate({0.0, 1.0, 8.0, 1e-3});
  const double z = first_derivative_zero(p, 0.0);
  const Jet at_z = p.at(z);
  for (double s : {0.1, 0.7, 1.9, 2.5}) {
    const State fwd = propagate(0.0, {at_z.value, 0.0}, s, 2000);
    const State bwd = propagate(0.0, {at_z.value, 0.0}, -s, 2000);
    EXPECT_NEAR(fwd.H, bwd.H, 1e-12);
    EXPECT_NEAR(fwd.Hp, -bwd.Hp, 1e-12);
    EXPECT_NEAR(p.at(z - s).value, bwd.H, 1e-9);
    EXPECT_NEAR(p.at(z + s).value, fwd.H, 1e-9);
  }
}

TEST(Integrate, ParameterErrors) {
  EXPECT_EQ(kind_of([] { integrate({0.0, 1.0, 4.0, 0.0}); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { integrate({0.0, 1.0, 4.0, -1e-3}); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { integrate({0.0, 1.0, 4.0, 0.6}); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { integrate({0.0, 1.0, 0.0, 1e-3}); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { integrate({NAN, 1.0, 4.0, 1e-3}); }), ErrorKind::Parameter);
  EXPECT_EQ(kind_of([] { integrate({0.0, INFINITY, 4.0, 1e-3}); }), ErrorKind::Parameter);
  // Exactly 8 cells is allowed.
  EXPECT_NO_THROW(integrate({0.0, 0.0, 4.0, 0.5}));
}

TEST(Integrate, DivergenceNamesOffendingR) {
  try {
    integrate({0.0, 1000.0, 10.0, 1.0});
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Divergence);
    EXPECT_NE(std::string(e.what()).find("r="), std::string::npos);
  }
}

TEST(Integrate, ToleranceIsEnforced) {
  EXPECT_EQ(kind_of([] { integrate({0.0, 2.0, 4.0, 0.05}); }), ErrorKind::Tolerance);
  EXPECT_NO_THROW(integrate({0.0, 2.0, 4.0, 0.05}, {1e-2, 1e8}));
}

TEST(Profile, RejectsMalformedGrids) {
  const OdeParams ode{0.0, 0.0, 1.0, 0.5};
  EXPECT_EQ(kind_of([&] { Profile(ode, {}, 1.0); }), ErrorKind::MalformedProfile);
  EXPECT_EQ(kind_of([&] { Profile(ode, {{0.1, 0, 0}, {1, 0, 0}}, 1.0); }),
            ErrorKind::MalformedProfile);
  EXPECT_EQ(kind_of([&] { Profile(ode, {{0, 0, 0}, {0.2, 0, 0}, {1, 0, 0}}, 1.0); }),
            ErrorKind::MalformedProfile);
  EXPECT_EQ(kind_of([&] { Profile(ode, {{0, 0, 0}, {0.5, 0, 0}, {0.5, 0, 0}}, 1.0); }),
            ErrorKind::MalformedProfile);
  EXPECT_EQ(kind_of([&] { Profile(ode, {{0, 0, 0}, {0.5, NAN, 0}, {1, 0, 0}}, 1.0); }),
            ErrorKind::MalformedProfile);
  EXPECT_EQ(kind_of([&] { Profile(ode, {{0, 0, 0}, {0.5, 0, 1}, {1, 0, 0}}, 1e-3); }),
            ErrorKind::Tolerance);
}

TEST(Windows, SignDefiniteRunsOfOscillation) {
  const Profile p = integrate({0.0, 1.0, 12.0, 1e-3});
  const auto ws = sign_definite_windows(p);
  ASSERT_EQ(ws.size(), 3u);
  EXPECT_EQ(ws[0].first, 0u);
  EXPECT_EQ(ws[0].sign, -1);
  EXPECT_EQ(ws[1].sign, 1);
  EXPECT_EQ(ws[2].sign, -1);
  EXPECT_NEAR(p.grid()[ws[1].first].r, 5.244, 2e-3);
  EXPECT_NEAR(p.grid()[ws[1].last].r, 10.488, 2e-3);
  EXPECT_EQ(ws[2].last, p.grid().size() - 1);

  const auto pos = first_window_for(p, 2.5);
  ASSERT_TRUE(pos);
  EXPECT_EQ(pos->first, ws[1].first);
  const auto neg = first_window_for(p, -1.0);
  ASSERT_TRUE(neg);
  EXPECT_EQ(neg->first, 0u);
  EXPECT_FALSE(first_window_for(p, 0.0));

  const Profile constant = integrate({-1.0, 1.0, 5.0, 1e-2});
  EXPECT_TRUE(sign_definite_windows(constant).empty());
}

TEST(Warp, NegativeSlopeWindowWithNegativeC) {
  const Profile p = integrate({0.0, 1.0, 4.0, 1e-3});
  const WarpGrid w = warp_from_profile(p, -1.0);
  const auto l = w.values();
  ASSERT_EQ(l.size(), p.grid().size());
  EXPECT_EQ(l.front(), 0.0);  // H'(0) = 0 at the closed end
  for (std::size_t i = 1; i < l.size(); ++i) {
    ASSERT_GT(l[i], 0.0);
    ASSERT_EQ(l[i], -p.grid()[i].Hp);
  }
}

TEST(Warp, LinearInC) {
  const Profile p = integrate({0.0, 1.0, 4.0, 1e-3});
  const auto l1 = warp_from_profile(p, -1.0).values();
  const auto l3 = warp_from_profile(p, -3.0).values();
  for (std::size_t i = 0; i < l1.size(); ++i) EXPECT_DOUBLE_EQ(l3[i], 3.0 * l1[i]);
  const WarpGrid doubled = warp_from_profile(p, -1.0).scaled(2.0);
  EXPECT_EQ(doubled.c, -2.0);
  const Jet a = doubled.samples(1.234);
  const Jet b = warp_from_profile(p, -2.0).samples(1.234);
  EXPECT_DOUBLE_EQ(a.value, b.value);
  EXPECT_DOUBLE_EQ(a.d3, b.d3);
}

TEST(Warp, Errors) {
  const Profile p = integrate({0.0, 1.0, 4.0, 1e-3});
  EXPECT_EQ(kind_of([&] { warp_from_profile(p, 0.0); }), ErrorKind::Parameter);
  try {
    warp_from_profile(p, 1.0);  // sign flip makes l < 0
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateWarp);
    EXPECT_NE(std::string(e.what()).find("0.001"), std::string::npos);
  }
  const Profile constant = integrate({-1.0, 1.0, 5.0, 1e-3});
  EXPECT_EQ(kind_of([&] { warp_from_profile(constant, 1.0); }), ErrorKind::DegenerateWarp);
  // A window straddling a sign change is rejected.
  const Profile q = integrate({0.0, 1.0, 8.0, 1e-3});
  EXPECT_EQ(kind_of([&] { warp_from_profile(q, -1.0); }), ErrorKind::DegenerateWarp);
}

TEST(Warp, OffGridDerivativesFollowTheOde) {
  const Profile p = integrate({0.0, 1.0, 12.0, 1e-3});
  const auto w = *first_window_for(p, 1.0);
  const WarpGrid warp = warp_from_profile(p, 1.0, w);
  for (double r : {6.0003, 7.77777, 9.1234}) {
    const Jet l = warp.samples(r);
    const Jet H = p.at(r);
    const auto d = derivative_chain(0.0, H.value, H.d1);
    EXPECT_NEAR(l.value, d[1], 1e-11);
    EXPECT_NEAR(l.d1, d[2], 1e-10);
    EXPECT_NEAR(l.d2, d[3], 1e-9);
    EXPECT_NEAR(l.d3, d[4], 1e-9);
  }
}

TEST(DerivativeChain, MatchesFiniteDifferencesOfTheFlow) {
  const double alpha = -0.7;
  const State s0{1.3, 0.4};
  const double h = 1e-3;
  const auto d = derivative_chain(alpha, s0.H, s0.Hp);
  const auto Hp_at = [&](double t) { return propagate(alpha, s0, t, 64).Hp; };
  // H''' and H'''' from central differences of H'.
  const double d3 = (Hp_at(h) - 2 * s0.Hp + Hp_at(-h)) / (h * h);
  EXPECT_NEAR(d[3], d3, 1e-5);
  const double d4 = (Hp_at(2 * h) - 2 * Hp_at(h) + 2 * Hp_at(-h) - Hp_at(-2 * h)) / (2 * h * h * h);
  EXPECT_NEAR(d[4], d4, 1e-4);
  EXPECT_EQ(d[0], s0.H);
  EXPECT_EQ(d[1], s0.Hp);
}

TEST(ProfileFlow, SmoothAndConsistentWithInterpolant) {
  const Profile p = integrate({0.0, 1.0, 12.0, 1e-3});
  const ProfileFlow flow(p, 6.0, 9.5, 1e-3);
  for (double r : {6.0, 6.5001, 8.0, 9.5}) {
    const Jet a = flow(r);
    const Jet b = p.at(r);
    EXPECT_NEAR(a.value, b.value, 1e-10);
    EXPECT_NEAR(a.d1, b.d1, 1e-10);
    EXPECT_NEAR(a.d2, b.d2, 1e-10);
  }
  EXPECT_THROW(flow(5.0), Error);
  EXPECT_THROW(ProfileFlow(p, 2.0, 1.0, 1e-3), Error);
}

}  // namespace
}  // namespace bundlecurv::profile
