#include "bundlecurv/surface.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "bundlecurv/error.hpp"

namespace bundlecurv::surface {
namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

void require_interior(const RotMetric& m, double r) {
  if (!m.r_interval().interior(r)) {
    throw Error(ErrorKind::Domain, "r=" + num(r) + " is not interior to [" +
                                       num(m.r_interval().lo) + ", " +
                                       num(m.r_interval().hi) + "]");
  }
}

double median(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

std::vector<double> sample_points(Interval w, int samples) {
  std::vector<double> out(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    out[static_cast<std::size_t>(i)] =
        i + 1 == samples ? w.hi : w.lo + w.length() * i / (samples - 1);
  }
  return out;
}

// Pointwise quantities shared by the flatness residuals and the frame
// components.
struct RadialState {
  double H, Hp, K, Kp, hxx, hyy;
};

RadialState radial_state(const RotMetric& m, const RadialFunction& H, double r) {
  const Jet l = m.warp(r);
  if (!(l.value > 0.0)) {
    throw Error(ErrorKind::DegenerateWarp, "warp is not positive at r=" + num(r));
  }
  const Jet h = H(r);
  RadialState s{};
  s.H = h.value;
  s.Hp = h.d1;
  s.K = -l.d2 / l.value;
  s.Kp = -(l.d3 * l.value - l.d2 * l.d1) / (l.value * l.value);
  s.hxx = h.d2;
  s.hyy = l.d1 / l.value * h.d1;
  return s;
}

}  // namespace

RadialFunction::RadialFunction(Interval domain, Evaluator f)
    : domain_(domain), f_(std::move(f)) {
  if (!(domain_.hi > domain_.lo)) {
    throw Error(ErrorKind::Parameter, "radial function domain must have positive length");
  }
  if (!f_) throw Error(ErrorKind::Parameter, "radial function evaluator is empty");
}

RadialFunction RadialFunction::from_profile(const profile::Profile& p,
                                            profile::Window window) {
  auto tower = profile::curvature_tower(p, window);
  const Interval dom{tower.lo(), tower.hi()};
  return RadialFunction(dom, [tower = std::move(tower)](double r) { return tower(r); });
}

RadialFunction RadialFunction::from_profile(const profile::Profile& p) {
  return from_profile(p, profile::full_window(p));
}

Jet RadialFunction::operator()(double r) const {
  if (!domain_.contains(r)) {
    throw Error(ErrorKind::Domain, "r=" + num(r) + " outside radial function domain");
  }
  return f_(r);
}

RotMetric::RotMetric(Interval r_interval, Evaluator warp, double edge_margin)
    : interval_(r_interval), warp_(std::move(warp)), edge_margin_(edge_margin) {
  if (!(interval_.hi > interval_.lo)) {
    throw Error(ErrorKind::Parameter, "metric interval must have positive length");
  }
  if (!warp_) throw Error(ErrorKind::Parameter, "warp evaluator is empty");
  if (!(edge_margin_ >= 0.0)) {
    throw Error(ErrorKind::Parameter, "edge margin must be non-negative");
  }
}

RotMetric RotMetric::from_warp(const profile::WarpGrid& warp) {
  const Interval iv{warp.samples.lo(), warp.samples.hi()};
  return RotMetric(iv, [tower = warp.samples](double r) { return tower(r); },
                   2.0 * warp.samples.spacing());
}

Jet RotMetric::warp(double r) const {
  if (!interval_.contains(r)) {
    throw Error(ErrorKind::Domain, "r=" + num(r) + " outside metric interval");
  }
  return warp_(r);
}

double gaussian_curvature(const RotMetric& m, double r) {
  require_interior(m, r);
  const Jet l = m.warp(r);
  return -l.d2 / l.value;
}

double gaussian_curvature_slope(const RotMetric& m, double r) {
  require_interior(m, r);
  const Jet l = m.warp(r);
  return -(l.d3 * l.value - l.d2 * l.d1) / (l.value * l.value);
}

HessianPair radial_hessian(const RotMetric& m, const RadialFunction& u, double r) {
  require_interior(m, r);
  const Jet l = m.warp(r);
  const Jet f = u(r);
  return {f.d2, l.d1 / l.value * f.d1};
}

Interval sample_window(const RotMetric& m, const RadialFunction& H, int samples) {
  if (samples < 8) {
    throw Error(ErrorKind::Parameter, "at least 8 samples required");
  }
  Interval w{std::max(m.r_interval().lo, H.domain().lo),
             std::min(m.r_interval().hi, H.domain().hi)};
  const double margin =
      m.edge_margin() > 0.0 ? m.edge_margin() : 2.0 * w.length() / samples;
  w.lo += margin;
  w.hi -= margin;
  if (!(w.hi > w.lo)) {
    throw Error(ErrorKind::DegenerateMetric, "sample window is empty");
  }
  return w;
}

FlatnessReport flatness_residual(const RotMetric& m, const RadialFunction& H,
                                 int samples) {
  FlatnessReport report;
  report.window = sample_window(m, H, samples);
  report.grid = sample_points(report.window, samples);

  std::vector<RadialState> states;
  std::vector<double> alphas;
  states.reserve(report.grid.size());
  alphas.reserve(report.grid.size());
  for (double r : report.grid) {
    states.push_back(radial_state(m, H, r));
    const auto& s = states.back();
    alphas.push_back(2.0 * s.K - 3.0 * s.H * s.H);
  }
  report.alpha_estimate = median(alphas);
  for (const auto& s : states) {
    const double f = s.H * (s.H * s.H - s.K);
    report.hess_residual =
        std::max({report.hess_residual, std::abs(s.hxx - f), std::abs(s.hyy - f)});
    report.constraint_residual =
        std::max(report.constraint_residual,
                 std::abs(2.0 * s.K - 3.0 * s.H * s.H - report.alpha_estimate));
    report.trace_residual =
        std::max(report.trace_residual, std::abs(s.hxx + s.hyy - 2.0 * f));
  }
  return report;
}

std::array<double, 6> dnabla_s_components(const RotMetric& m, const RadialFunction& H,
                                          double r) {
  require_interior(m, r);
  const RadialState s = radial_state(m, H, r);
  const double f = s.H * (s.H * s.H - s.K);
  // For radial data the B-derivatives and the mixed Hessian vanish, which
  // zeroes entries 3 and 5.
  return {
      -0.5 * ((s.hxx - f) + (s.hyy - f)),
      -0.5 * (s.hxx - f),
      0.5 * (s.hyy - f),
      0.0,
      0.5 * s.Kp - 1.5 * s.H * s.Hp,
      0.0,
  };
}

DnablaSReport dnabla_s_frame_residual(const RotMetric& m, const RadialFunction& H,
                                      int samples) {
  DnablaSReport report;
  report.window = sample_window(m, H, samples);
  report.grid = sample_points(report.window, samples);
  for (double r : report.grid) {
    const auto c = dnabla_s_components(m, H, r);
    for (std::size_t k = 0; k < c.size(); ++k) {
      report.sup_norms[k] = std::max(report.sup_norms[k], std::abs(c[k]));
    }
  }
  return report;
}

}  // namespace bundlecurv::surface
