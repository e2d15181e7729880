#include "bundlecurv/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "bundlecurv/error.hpp"

namespace bundlecurv::profile {
namespace {

std::string num(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

State rhs(double alpha, State s) noexcept {
  return {s.Hp, second_derivative(alpha, s.H)};
}

State rk4_step(double alpha, State s, double h) noexcept {
  const State k1 = rhs(alpha, s);
  const State k2 = rhs(alpha, {s.H + 0.5 * h * k1.H, s.Hp + 0.5 * h * k1.Hp});
  const State k3 = rhs(alpha, {s.H + 0.5 * h * k2.H, s.Hp + 0.5 * h * k2.Hp});
  const State k4 = rhs(alpha, {s.H + h * k3.H, s.Hp + h * k3.Hp});
  return {s.H + h / 6.0 * (k1.H + 2.0 * k2.H + 2.0 * k3.H + k4.H),
          s.Hp + h / 6.0 * (k1.Hp + 2.0 * k2.Hp + 2.0 * k3.Hp + k4.Hp)};
}

Jet node_jet(double alpha, const Sample& s) noexcept {
  return {s.H, s.Hp, second_derivative(alpha, s.H)};
}

}  // namespace

void OdeParams::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(initial_value)) {
    throw Error(ErrorKind::Parameter, "alpha and A must be finite");
  }
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw Error(ErrorKind::Parameter, "r_max must be positive, got " + num(r_max));
  }
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw Error(ErrorKind::Parameter, "step must be positive, got " + num(step));
  }
  if (step > r_max / 8.0) {
    throw Error(ErrorKind::Parameter,
                "step " + num(step) + " leaves fewer than 8 cells on [0, " +
                    num(r_max) + "]");
  }
}

std::size_t OdeParams::cells() const {
  const double ratio = r_max / step;
  const double rounded = std::round(ratio);
  if (std::abs(rounded - ratio) <= 1e-9 * ratio) {
    return static_cast<std::size_t>(rounded);
  }
  return static_cast<std::size_t>(std::ceil(ratio));
}

double second_derivative(double alpha, double H) noexcept {
  return -0.5 * (H * H * H + alpha * H);
}

double third_derivative(double alpha, double H, double Hp) noexcept {
  return -0.5 * (3.0 * H * H + alpha) * Hp;
}

std::array<double, 6> derivative_chain(double alpha, double H, double Hp) noexcept {
  const double h2 = second_derivative(alpha, H);
  const double h3 = third_derivative(alpha, H, Hp);
  const double q = 3.0 * H * H + alpha;
  const double h4 = -0.5 * (6.0 * H * Hp * Hp + q * h2);
  const double h5 = -0.5 * (6.0 * Hp * Hp * Hp + 18.0 * H * Hp * h2 + q * h3);
  return {H, Hp, h2, h3, h4, h5};
}

double conserved_quantity(double alpha, double H, double Hp) noexcept {
  const double H2 = H * H;
  return 4.0 * Hp * Hp + H2 * H2 + 2.0 * alpha * H2;
}

State propagate(double alpha, State start, double span, int substeps) {
  if (substeps < 1) {
    throw Error(ErrorKind::Parameter, "propagate needs at least one substep");
  }
  const double h = span / substeps;
  State s = start;
  for (int i = 0; i < substeps; ++i) s = rk4_step(alpha, s, h);
  return s;
}

Profile::Profile(OdeParams params, std::vector<Sample> grid, double tolerance)
    : params_(params), grid_(std::move(grid)), tolerance_(tolerance) {
  if (grid_.size() < 2) {
    throw Error(ErrorKind::MalformedProfile, "profile grid has fewer than 2 samples");
  }
  if (grid_.front().r != 0.0) {
    throw Error(ErrorKind::MalformedProfile, "profile grid must start at r=0");
  }
  const double R = grid_.back().r;
  const double h = R / static_cast<double>(grid_.size() - 1);
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const auto& s = grid_[i];
    if (!std::isfinite(s.r) || !std::isfinite(s.H) || !std::isfinite(s.Hp)) {
      throw Error(ErrorKind::MalformedProfile, "non-finite profile sample");
    }
    if (i > 0 && !(s.r > grid_[i - 1].r)) {
      throw Error(ErrorKind::MalformedProfile,
                  "profile grid not strictly increasing at r=" + num(s.r));
    }
    if (std::abs(s.r - static_cast<double>(i) * h) > 1e-9 * std::max(1.0, R)) {
      throw Error(ErrorKind::MalformedProfile,
                  "profile grid is not uniform at r=" + num(s.r));
    }
  }
  params_.r_max = R;
  const double A = grid_.front().H;
  conserved_ = 2.0 * params_.alpha * A * A + A * A * A * A;

  std::vector<Jet> nodes;
  nodes.reserve(grid_.size());
  for (const auto& s : grid_) nodes.push_back(node_jet(params_.alpha, s));
  interp_ = QuinticHermiteGrid(0.0, h, std::move(nodes));

  const double residual = conservation_residual(*this);
  if (!(residual <= tolerance_)) {
    throw Error(ErrorKind::Tolerance, "conservation residual " + num(residual) +
                                          " exceeds tolerance " + num(tolerance_));
  }
}

Jet Profile::at(double r) const { return interp_(r); }

Profile integrate(const OdeParams& params, const IntegrateOptions& options) {
  params.validate();
  const std::size_t n = params.cells();
  const double h = params.r_max / static_cast<double>(n);

  std::vector<Sample> grid;
  grid.reserve(n + 1);
  State s{params.initial_value, 0.0};
  grid.push_back({0.0, s.H, s.Hp});
  for (std::size_t i = 1; i <= n; ++i) {
    s = rk4_step(params.alpha, s, h);
    const double r = i == n ? params.r_max : static_cast<double>(i) * h;
    if (!std::isfinite(s.H) || !std::isfinite(s.Hp) ||
        std::abs(s.H) > options.overflow_guard ||
        std::abs(s.Hp) > options.overflow_guard) {
      throw Error(ErrorKind::Divergence,
                  "solution exceeds overflow guard " + num(options.overflow_guard) +
                      " at r=" + num(r));
    }
    grid.push_back({r, s.H, s.Hp});
  }
  OdeParams stored = params;
  stored.step = h;
  return Profile(stored, std::move(grid), options.conservation_tolerance);
}

std::vector<double> pointwise_residual(const Profile& p) {
  if (p.grid().empty()) {
    throw Error(ErrorKind::MalformedProfile, "empty profile grid");
  }
  std::vector<double> out;
  out.reserve(p.grid().size());
  for (const auto& s : p.grid()) {
    out.push_back(std::abs(conserved_quantity(p.alpha(), s.H, s.Hp) -
                           p.conserved_constant()));
  }
  return out;
}

double conservation_residual(const Profile& p) {
  const auto res = pointwise_residual(p);
  return *std::max_element(res.begin(), res.end());
}

std::vector<Window> sign_definite_windows(const Profile& p) {
  const auto& g = p.grid();
  std::vector<Window> out;
  std::size_t i = 0;
  while (i < g.size()) {
    if (g[i].Hp == 0.0) {
      ++i;
      continue;
    }
    const int sign = g[i].Hp > 0.0 ? 1 : -1;
    std::size_t j = i;
    while (j + 1 < g.size() && g[j + 1].Hp * sign > 0.0) ++j;
    Window w{i, j, sign};
    if (w.first > 0 && g[w.first - 1].Hp == 0.0) --w.first;
    if (w.last + 1 < g.size() && g[w.last + 1].Hp == 0.0) ++w.last;
    if (w.last > w.first) out.push_back(w);
    i = j + 1;
  }
  return out;
}

std::optional<Window> first_window_for(const Profile& p, double c) {
  if (c == 0.0) return std::nullopt;
  const int want = c > 0.0 ? 1 : -1;
  for (const auto& w : sign_definite_windows(p)) {
    if (w.sign == want) return w;
  }
  return std::nullopt;
}

double first_derivative_zero(const Profile& p, double after_r) {
  const auto& g = p.grid();
  for (std::size_t k = 0; k + 1 < g.size(); ++k) {
    if (g[k + 1].r <= after_r) continue;
    double lo = std::max(g[k].r, after_r);
    double hi = g[k + 1].r;
    double f_lo = p.at(lo).d1;
    const double f_hi = p.at(hi).d1;
    if (f_lo == 0.0) {
      if (lo > after_r) return lo;
      if (f_hi == 0.0) return hi;
      continue;
    }
    if (f_hi == 0.0) return hi;
    if (f_lo * f_hi > 0.0) continue;
    for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f_mid = p.at(mid).d1;
      if (f_mid == 0.0) return mid;
      if ((f_mid > 0.0) == (f_lo > 0.0)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  throw Error(ErrorKind::Domain,
              "H' has no zero after r=" + num(after_r) + " on the profile grid");
}

Window full_window(const Profile& p) {
  return Window{0, p.grid().size() - 1, 0};
}

namespace {

void check_window(const Profile& p, const Window& w) {
  if (w.last >= p.grid().size() || w.last <= w.first) {
    throw Error(ErrorKind::Parameter, "window out of range");
  }
}

// Builds a tower from derivative chains starting at derivative `offset`
// (0 for H, 1 for H'), scaled by k.
HermiteTower tower_from_chains(const Profile& p, Window w, int offset, double k) {
  std::vector<Jet> lower, upper;
  lower.reserve(w.last - w.first + 1);
  upper.reserve(w.last - w.first + 1);
  for (std::size_t i = w.first; i <= w.last; ++i) {
    const auto& s = p.grid()[i];
    const auto d = derivative_chain(p.alpha(), s.H, s.Hp);
    const auto o = static_cast<std::size_t>(offset);
    lower.push_back({k * d[o], k * d[o + 1], k * d[o + 2], 0.0});
    upper.push_back({k * d[o + 2], k * d[o + 3], k * d[o + 4], 0.0});
  }
  return HermiteTower(p.grid()[w.first].r, p.spacing(), std::move(lower),
                      std::move(upper));
}

}  // namespace

HermiteTower curvature_tower(const Profile& p, Window window) {
  check_window(p, window);
  return tower_from_chains(p, window, 0, 1.0);
}

WarpGrid warp_from_profile(const Profile& p, double c) {
  return warp_from_profile(p, c, full_window(p));
}

WarpGrid warp_from_profile(const Profile& p, double c, Window window) {
  if (c == 0.0 || !std::isfinite(c)) {
    throw Error(ErrorKind::Parameter, "warp constant c must be finite and nonzero");
  }
  check_window(p, window);
  const auto& g = p.grid();
  std::vector<double> bad;
  for (std::size_t i = window.first; i <= window.last; ++i) {
    const double l = c * g[i].Hp;
    const bool end = i == window.first || i == window.last;
    if (end ? l < 0.0 : l <= 0.0) bad.push_back(g[i].r);
  }
  if (!bad.empty()) {
    std::string msg = "warp l = c*H' is not positive on the window interior at r =";
    const std::size_t shown = std::min<std::size_t>(bad.size(), 8);
    for (std::size_t k = 0; k < shown; ++k) msg += " " + num(bad[k]);
    if (bad.size() > shown) {
      msg += " ... (" + std::to_string(bad.size()) + " points)";
    }
    throw Error(ErrorKind::DegenerateWarp, msg);
  }
  window.sign = c > 0.0 ? 1 : -1;
  return WarpGrid{c, window, tower_from_chains(p, window, 1, c)};
}

std::vector<double> WarpGrid::values() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& n : samples.lower().nodes()) out.push_back(n.value);
  return out;
}

WarpGrid WarpGrid::scaled(double k) const {
  const auto scale = [k](const std::vector<Jet>& in) {
    std::vector<Jet> out(in);
    for (auto& j : out) {
      j.value *= k;
      j.d1 *= k;
      j.d2 *= k;
    }
    return out;
  };
  WarpGrid out = *this;
  out.c = c * k;
  out.samples = HermiteTower(samples.lo(), samples.spacing(),
                             scale(samples.lower().nodes()),
                             scale(samples.upper().nodes()));
  return out;
}

ProfileFlow::ProfileFlow(const Profile& p, double lo, double hi, double max_substep)
    : alpha_(p.alpha()), lo_(lo), hi_(hi) {
  if (!(hi > lo) || !(max_substep > 0.0)) {
    throw Error(ErrorKind::Parameter, "profile flow needs lo < hi and a positive substep");
  }
  const auto& g = p.grid();
  const double mid = 0.5 * (lo + hi);
  const auto idx = static_cast<std::size_t>(std::clamp(
      std::round(mid / p.spacing()), 0.0, static_cast<double>(g.size() - 1)));
  anchor_r_ = g[idx].r;
  anchor_ = {g[idx].H, g[idx].Hp};
  const double reach = std::max(std::abs(lo - anchor_r_), std::abs(hi - anchor_r_));
  substeps_ = std::max(1, static_cast<int>(std::ceil(reach / max_substep)));
}

State ProfileFlow::state(double r) const {
  const double slack = 1e-9 * (hi_ - lo_);
  if (!(r >= lo_ - slack && r <= hi_ + slack)) {
    throw Error(ErrorKind::Domain, "r=" + num(r) + " outside profile flow range");
  }
  return propagate(alpha_, anchor_, r - anchor_r_, substeps_);
}

Jet ProfileFlow::operator()(double r) const {
  const State s = state(r);
  return {s.H, s.Hp, second_derivative(alpha_, s.H)};
}

}  // namespace bundlecurv::profile
