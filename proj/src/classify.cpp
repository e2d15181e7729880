#include "bundlecurv/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "bundlecurv/error.hpp"
#include "bundlecurv/parallel.hpp"

namespace bundlecurv::classify {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Variables of the elimination: A = H(0), B = H(R), alpha, u = 4 pi / c.
enum Var : std::size_t { kA = 0, kB = 1, kAlpha = 2, kU = 3 };
const std::array<std::string, poly::kVars> kNames{"A", "B", "alpha", "u"};

double grid_value(const Range& r, int i, int n) {
  return n == 1 ? 0.5 * (r.lo + r.hi) : r.lo + (r.hi - r.lo) * i / (n - 1);
}

void validate_box(const ParameterBox& box) {
  for (const Range* r : {&box.A, &box.B, &box.alpha, &box.c}) {
    if (!std::isfinite(r->lo) || !std::isfinite(r->hi) || r->lo > r->hi) {
      throw Error(ErrorKind::Parameter, "box ranges must be finite with lo <= hi");
    }
  }
  if (box.c.lo <= 0.0 && box.c.hi >= 0.0) {
    throw Error(ErrorKind::Parameter, "box touches c = 0");
  }
  if (!(box.min_gap > 0.0)) {
    throw Error(ErrorKind::Parameter, "box touches the diagonal A = B (min_gap must be > 0)");
  }
  // Largest |A - B| available in the box.
  const double widest = std::max(std::abs(box.A.hi - box.B.lo), std::abs(box.B.hi - box.A.lo));
  if (widest < box.min_gap) {
    throw Error(ErrorKind::Parameter, "box lies within min_gap of the diagonal A = B");
  }
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::ProductS2xS1: return "product_S2xS1";
    case SpaceKind::Lens: return "lens";
    case SpaceKind::FlatBundle: return "flat_bundle";
  }
  return "unknown";
}

std::string ClassificationRecord::space_label() const {
  if (space_kind == SpaceKind::Lens) {
    return "lens(" + std::to_string(lens_order) + ",1)";
  }
  return to_string(space_kind);
}

ClassificationRecord catalog(int genus, int degree) {
  if (genus < 0) throw Error(ErrorKind::Parameter, "genus must be non-negative");
  ClassificationRecord rec;
  rec.genus = genus;
  rec.degree = degree;
  if (genus == 0) {
    if (degree == 0) {
      // Flat connection over the simply connected sphere: trivial bundle with
      // the product metric. The base radius is free; K = 1 fixes it.
      rec.H = 0;
      rec.K = 1;
      rec.space_kind = SpaceKind::ProductS2xS1;
    } else {
      // H^2 = K with integral of H equal to -2 pi d and of K to 4 pi.
      rec.H = Rational(-2, degree);
      rec.K = rec.H * rec.H;
      rec.space_kind = SpaceKind::Lens;
      rec.lens_order = std::abs(degree);
      rec.space_curvature = Rational(1, static_cast<long long>(degree) * degree);
    }
    return rec;
  }
  if (degree != 0) {
    throw Error(ErrorKind::NoSuchBundle,
                "no conformally flat circle metric of degree " + std::to_string(degree) +
                    " over a genus " + std::to_string(genus) + " surface");
  }
  rec.H = 0;
  rec.K = genus == 1 ? 0 : -1;
  rec.space_kind = SpaceKind::FlatBundle;
  if (genus == 1) rec.space_curvature = Rational(0);
  rec.moduli_dim = 2 * genus;
  return rec;
}

std::array<double, 3> constraint_residuals(double A, double B, double alpha, double c) {
  const double u = 4.0 * kPi / c;
  return {B * B + 2.0 * alpha + A * A, u + A * A * A + alpha * A, u + B * B * B + alpha * B};
}

std::vector<EliminationStep> elimination_trace(const ParameterBox& box, int checks,
                                               std::uint64_t seed) {
  validate_box(box);
  using poly::Polynomial;
  const auto A = Polynomial::variable(kA);
  const auto B = Polynomial::variable(kB);
  const auto alpha = Polynomial::variable(kAlpha);
  const auto u = Polynomial::variable(kU);

  const Polynomial ab_eqn = B * B + 2 * alpha + A * A;
  const Polynomial l_eqn_a = u + A.pow(3) + alpha * A;
  const Polynomial l_eqn_b = u + B.pow(3) + alpha * B;
  const Polynomial quotient = A * A + A * B + B * B + alpha;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  std::vector<poly::Point> points;
  points.reserve(static_cast<std::size_t>(checks));
  for (int i = 0; i < checks; ++i) {
    const double a = box.A.lo + (box.A.hi - box.A.lo) * pick(rng);
    const double b = box.B.lo + (box.B.hi - box.B.lo) * pick(rng);
    const double al = box.alpha.lo + (box.alpha.hi - box.alpha.lo) * pick(rng);
    const double c = box.c.lo + (box.c.hi - box.c.lo) * pick(rng);
    points.push_back({a, b, al, 4.0 * kPi / c});
  }

  // Exact comparison after expansion over Q; the numeric check evaluates
  // the unexpanded sides directly in floating point.
  using Direct = std::function<double(double, double, double, double)>;
  const auto step = [&](const Polynomial& lhs, const Polynomial& rhs, const Direct& lhs_direct,
                        const Direct& rhs_direct, std::string consequence) {
    EliminationStep s;
    s.claim = lhs.str(kNames) + "  ==  " + rhs.str(kNames);
    s.consequence = std::move(consequence);
    s.exact = (lhs - rhs).is_zero();
    for (const auto& x : points) {
      s.numeric_error = std::max(s.numeric_error, std::abs(lhs_direct(x[0], x[1], x[2], x[3]) -
                                                           rhs_direct(x[0], x[1], x[2], x[3])));
    }
    return s;
  };
  const auto ab = [](double a, double b, double al, double) { return b * b + 2 * al + a * a; };
  const auto la = [](double a, double, double al, double v) { return v + a * a * a + al * a; };
  const auto lb = [](double, double b, double al, double v) { return v + b * b * b + al * b; };
  const auto q = [](double a, double b, double al, double) { return a * a + a * b + b * b + al; };

  std::vector<EliminationStep> trace;
  // Difference of the two boundary relations factors through A - B.
  trace.push_back(step(
      l_eqn_a - l_eqn_b, (A - B) * quotient,
      [&](double a, double b, double al, double v) { return la(a, b, al, v) - lb(a, b, al, v); },
      [&](double a, double b, double al, double v) { return (a - b) * q(a, b, al, v); },
      "A != B, hence alpha = -(A^2 + A*B + B^2)"));
  // Substituting that alpha into the endpoint relation leaves a square.
  trace.push_back(step(
      ab_eqn - 2 * quotient, -((A + B).pow(2)),
      [&](double a, double b, double al, double v) { return ab(a, b, al, v) - 2 * q(a, b, al, v); },
      [](double a, double b, double, double) { return -(a + b) * (a + b); },
      "(A + B)^2 = 0, hence B = -A and alpha = -A^2"));
  // Back into the boundary relation at A: only u survives.
  trace.push_back(step(
      l_eqn_a - A * quotient + A * B * (A + B), u,
      [&](double a, double b, double al, double v) {
        return la(a, b, al, v) - a * q(a, b, al, v) + a * b * (a + b);
      },
      [](double, double, double, double v) { return v; }, "u = 4*pi/c = 0"));
  // Same conclusion by direct substitution of B = -A, alpha = -A^2.
  trace.push_back(step(
      l_eqn_a.substitute(kB, -A).substitute(kAlpha, -(A * A)), u,
      [&](double a, double, double, double v) { return la(a, -a, -a * a, v); },
      [](double, double, double, double v) { return v; },
      "4*pi/c = 0 is unsatisfiable for finite c"));
  return trace;
}

NonexistenceCertificate nonexistence_certificate(const ParameterBox& box, int grid_n) {
  validate_box(box);
  if (grid_n < 50) throw Error(ErrorKind::Parameter, "grid_n must be at least 50");

  NonexistenceCertificate cert;
  cert.equations = {"ab:  B^2 + 2*alpha + A^2 = 0",
                    "l_A: 4*pi/c + A^3 + alpha*A = 0",
                    "l_B: 4*pi/c + B^3 + alpha*B = 0",
                    "u := 4*pi/c"};
  cert.elimination_trace = elimination_trace(box);
  cert.final_constraint = "4*pi/c = 0";
  cert.trace_complete = std::all_of(
      cert.elimination_trace.begin(), cert.elimination_trace.end(),
      [](const EliminationStep& s) { return s.exact && s.numeric_error <= 1e-12; });
  cert.grid_box = box;
  cert.grid_n = grid_n;

  struct Best {
    double residual = std::numeric_limits<double>::infinity();
    std::array<double, 4> at{};
    std::uint64_t count = 0;
  };
  const auto n = static_cast<std::size_t>(grid_n);
  std::vector<Best> per_row(n);
  detail::parallel_for(n, [&](std::size_t i) {
    Best best;
    const double A = grid_value(box.A, static_cast<int>(i), grid_n);
    for (int j = 0; j < grid_n; ++j) {
      const double B = grid_value(box.B, j, grid_n);
      if (std::abs(A - B) < box.min_gap) continue;
      for (int k = 0; k < grid_n; ++k) {
        const double alpha = grid_value(box.alpha, k, grid_n);
        for (int m = 0; m < grid_n; ++m) {
          const double c = grid_value(box.c, m, grid_n);
          const auto r = constraint_residuals(A, B, alpha, c);
          const double norm = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
          ++best.count;
          if (norm < best.residual) best = {norm, {A, B, alpha, c}, best.count};
        }
      }
    }
    per_row[i] = best;
  });

  Best best;
  for (const auto& row : per_row) {
    cert.points_scanned += row.count;
    if (row.residual < best.residual) best = row;
  }
  if (cert.points_scanned == 0) {
    throw Error(ErrorKind::Parameter, "no grid point satisfies |A - B| >= min_gap");
  }
  cert.grid_min_residual = best.residual;
  cert.argmin = best.at;
  const auto [A, B, alpha, c] = best.at;
  (void)alpha;
  cert.degree_at_min = -c * (B * B - A * A) / (4.0 * kPi);
  cert.conclusion = cert.trace_complete && cert.grid_min_residual > 0.0;
  return cert;
}

std::vector<std::complex<double>> HolonomyCharacter::values() const {
  std::vector<std::complex<double>> out;
  out.reserve(coefficients.size());
  for (double x : coefficients) out.push_back(std::polar(1.0, x));
  return out;
}

HolonomyCharacter flat_holonomy(int genus, std::vector<double> coefficients) {
  if (genus < 1) throw Error(ErrorKind::Parameter, "flat holonomy needs genus >= 1");
  if (coefficients.size() != static_cast<std::size_t>(2 * genus)) {
    throw Error(ErrorKind::Parameter, "expected " + std::to_string(2 * genus) +
                                          " coefficients, got " +
                                          std::to_string(coefficients.size()));
  }
  for (double x : coefficients) {
    if (!std::isfinite(x)) {
      throw Error(ErrorKind::Parameter, "holonomy coefficient " + fmt(x) + " is not finite");
    }
  }
  return HolonomyCharacter{genus, std::move(coefficients)};
}

HolonomyCharacter lattice_reduce(const HolonomyCharacter& ch) {
  HolonomyCharacter out = ch;
  for (double& x : out.coefficients) {
    double r = x - kTwoPi * std::floor(x / kTwoPi);
    if (r >= kTwoPi || r < 0.0) r = 0.0;
    x = r;
  }
  return out;
}

double lattice_distance(const HolonomyCharacter& a, const HolonomyCharacter& b) {
  if (a.coefficients.size() != b.coefficients.size()) {
    throw Error(ErrorKind::Parameter, "characters of different genus");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
    double d = std::fmod(std::abs(a.coefficients[i] - b.coefficients[i]), kTwoPi);
    d = std::min(d, kTwoPi - d);
    worst = std::max(worst, d);
  }
  return worst;
}

}  // namespace bundlecurv::classify
