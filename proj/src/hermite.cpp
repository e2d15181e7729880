#include "bundlecurv/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bundlecurv/error.hpp"

namespace bundlecurv {

QuinticHermiteGrid::QuinticHermiteGrid(double first_r, double spacing,
                                       std::vector<Jet> nodes)
    : first_r_(first_r), spacing_(spacing), nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) {
    throw Error(ErrorKind::MalformedProfile,
                "hermite grid needs at least two nodes");
  }
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_)) {
    throw Error(ErrorKind::Parameter, "hermite grid spacing must be positive");
  }
}

Jet QuinticHermiteGrid::operator()(double r) const {
  const double last = hi();
  // Allow a few ulps of slack so that node positions computed elsewhere as
  // first + i*h are accepted at the ends.
  const double slack = 1e-12 * std::max(1.0, std::abs(last));
  if (!(r >= first_r_ - slack && r <= last + slack)) {
    throw Error(ErrorKind::Domain, "r=" + std::to_string(r) +
                                       " outside interpolation range [" +
                                       std::to_string(first_r_) + ", " +
                                       std::to_string(last) + "]");
  }
  const double x = (r - first_r_) / spacing_;
  const auto cells = static_cast<std::ptrdiff_t>(nodes_.size()) - 1;
  const auto cell = std::clamp<std::ptrdiff_t>(
      static_cast<std::ptrdiff_t>(std::floor(x)), 0, cells - 1);
  const double t = x - static_cast<double>(cell);
  const double h = spacing_;
  const Jet& a = nodes_[static_cast<std::size_t>(cell)];
  const Jet& b = nodes_[static_cast<std::size_t>(cell) + 1];

  const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;

  // Basis functions and their t-derivatives.
  const double h0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double h1 = t - 6 * t3 + 8 * t4 - 3 * t5;
  const double h2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double h3 = 10 * t3 - 15 * t4 + 6 * t5;
  const double h4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double h5 = 0.5 * t3 - t4 + 0.5 * t5;

  const double d_h0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double d_h1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double d_h2 = t - 4.5 * t2 + 6 * t3 - 2.5 * t4;
  const double d_h3 = 30 * t2 - 60 * t3 + 30 * t4;
  const double d_h4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double d_h5 = 1.5 * t2 - 4 * t3 + 2.5 * t4;

  const double dd_h0 = -60 * t + 180 * t2 - 120 * t3;
  const double dd_h1 = -36 * t + 96 * t2 - 60 * t3;
  const double dd_h2 = 1 - 9 * t + 18 * t2 - 10 * t3;
  const double dd_h3 = 60 * t - 180 * t2 + 120 * t3;
  const double dd_h4 = -24 * t + 84 * t2 - 60 * t3;
  const double dd_h5 = 3 * t - 12 * t2 + 10 * t3;

  const double ddd_h0 = -60 + 360 * t - 360 * t2;
  const double ddd_h1 = -36 + 192 * t - 180 * t2;
  const double ddd_h2 = -9 + 36 * t - 30 * t2;
  const double ddd_h3 = 60 - 360 * t + 360 * t2;
  const double ddd_h4 = -24 + 168 * t - 180 * t2;
  const double ddd_h5 = 3 - 24 * t + 30 * t2;

  const double hh = h * h;
  const double c0 = a.value, c1 = h * a.d1, c2 = hh * a.d2;
  const double c3 = b.value, c4 = h * b.d1, c5 = hh * b.d2;

  Jet out;
  out.value = c0 * h0 + c1 * h1 + c2 * h2 + c3 * h3 + c4 * h4 + c5 * h5;
  out.d1 = (c0 * d_h0 + c1 * d_h1 + c2 * d_h2 + c3 * d_h3 + c4 * d_h4 +
            c5 * d_h5) /
           h;
  out.d2 = (c0 * dd_h0 + c1 * dd_h1 + c2 * dd_h2 + c3 * dd_h3 + c4 * dd_h4 +
            c5 * dd_h5) /
           hh;
  out.d3 = (c0 * ddd_h0 + c1 * ddd_h1 + c2 * ddd_h2 + c3 * ddd_h3 +
            c4 * ddd_h4 + c5 * ddd_h5) /
           (hh * h);
  return out;
}

HermiteTower::HermiteTower(double first_r, double spacing,
                           std::vector<Jet> lower, std::vector<Jet> upper)
    : lower_(first_r, spacing, std::move(lower)),
      upper_(first_r, spacing, std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw Error(ErrorKind::MalformedProfile, "hermite tower levels differ in size");
  }
}

Jet HermiteTower::operator()(double r) const {
  Jet out = lower_(r);
  out.d3 = upper_(r).d1;
  return out;
}

}  // namespace bundlecurv
