#pragma once

#include <cstddef>
#include <vector>

namespace bundlecurv {

/// Value of a scalar function of one variable with its first three
/// derivatives.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Piecewise quintic Hermite interpolant on a uniform grid. Each node carries
/// (f, f', f''), so the interpolant is C² and its derivatives are exact
/// derivatives of the interpolating polynomial. Node `d3` is ignored.
class QuinticHermiteGrid {
 public:
  QuinticHermiteGrid() = default;
  QuinticHermiteGrid(double first_r, double spacing, std::vector<Jet> nodes);

  double lo() const noexcept { return first_r_; }
  double hi() const noexcept { return node_r(nodes_.size() - 1); }
  double spacing() const noexcept { return spacing_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<Jet>& nodes() const noexcept { return nodes_; }
  double node_r(std::size_t i) const noexcept {
    return first_r_ + static_cast<double>(i) * spacing_;
  }

  /// Evaluates at r in [lo, hi]; throws ErrorKind::Domain otherwise.
  Jet operator()(double r) const;

 private:
  double first_r_ = 0.0;
  double spacing_ = 1.0;
  std::vector<Jet> nodes_;
};

/// Pair of quintic interpolants on the same grid: one for f from (f, f', f'')
/// and one for f'' from (f'', f''', f''''). The third derivative is read off
/// the second level, which keeps it free of the 1/h^3 cancellation a single
/// quintic suffers from.
class HermiteTower {
 public:
  HermiteTower() = default;
  /// `lower` carries (f, f', f''); `upper` carries (f'', f''', f'''').
  HermiteTower(double first_r, double spacing, std::vector<Jet> lower,
               std::vector<Jet> upper);

  double lo() const noexcept { return lower_.lo(); }
  double hi() const noexcept { return lower_.hi(); }
  double spacing() const noexcept { return lower_.spacing(); }
  std::size_t size() const noexcept { return lower_.size(); }
  double node_r(std::size_t i) const noexcept { return lower_.node_r(i); }
  const QuinticHermiteGrid& lower() const noexcept { return lower_; }
  const QuinticHermiteGrid& upper() const noexcept { return upper_; }

  Jet operator()(double r) const;

 private:
  QuinticHermiteGrid lower_;
  QuinticHermiteGrid upper_;
};

}  // namespace bundlecurv
