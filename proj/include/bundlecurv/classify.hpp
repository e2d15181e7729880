#pragma once

// Conformally flat circle bundles over compact oriented surfaces: the
// constant-curvature catalog, the algebraic certificate excluding
// non-constant curvature functions over S^2, and flat-connection holonomy
// for genus >= 1.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bundlecurv/polynomial.hpp"

namespace bundlecurv::classify {

using poly::Rational;

enum class SpaceKind { ProductS2xS1, Lens, FlatBundle };

std::string to_string(SpaceKind kind);

struct ClassificationRecord {
  int genus = 0;
  int degree = 0;
  Rational H{0};
  Rational K{0};
  SpaceKind space_kind = SpaceKind::ProductS2xS1;
  int lens_order = 0;  // |d| for lens records, 0 otherwise
  std::optional<Rational> space_curvature;
  int moduli_dim = 0;

  /// "product_S2xS1", "lens(2,1)", "flat_bundle".
  std::string space_label() const;
};

/// Throws Parameter for negative genus and NoSuchBundle for genus >= 1 with
/// nonzero degree.
ClassificationRecord catalog(int genus, int degree);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Parameter box for the grid scan. Points with |A - B| < min_gap are
/// skipped, which keeps the scan off the constant-H diagonal.
struct ParameterBox {
  Range A{-5.0, 5.0};
  Range B{-5.0, 5.0};
  Range alpha{-25.0, 25.0};
  Range c{0.1, 10.0};
  double min_gap = 0.1;
};

struct EliminationStep {
  std::string claim;        // identity, as text
  std::string consequence;  // constraint derived from it
  bool exact = false;       // identity holds after exact expansion over Q
  double numeric_error = 0.0;  // max |lhs - rhs| over random points
};

struct NonexistenceCertificate {
  std::vector<std::string> equations;
  std::vector<EliminationStep> elimination_trace;
  std::string final_constraint;
  bool trace_complete = false;
  ParameterBox grid_box;
  int grid_n = 0;
  std::uint64_t points_scanned = 0;
  double grid_min_residual = 0.0;
  std::array<double, 4> argmin{};  // (A, B, alpha, c)
  /// Degree implied by the integral of H at the minimiser, for information.
  double degree_at_min = 0.0;
  bool conclusion = false;
};

/// Residuals (B^2 + 2 alpha + A^2, 4pi/c + A^3 + alpha A, 4pi/c + B^3 + alpha B).
std::array<double, 3> constraint_residuals(double A, double B, double alpha, double c);

/// Exact elimination with each identity re-checked at `checks` random points
/// drawn from `box` (seeded, deterministic).
std::vector<EliminationStep> elimination_trace(const ParameterBox& box, int checks = 100,
                                               std::uint64_t seed = 20240611);

/// Minimum Euclidean norm of the residual vector over a grid_n^4 grid.
NonexistenceCertificate nonexistence_certificate(const ParameterBox& box, int grid_n);

struct HolonomyCharacter {
  int genus = 1;
  std::vector<double> coefficients;  // radians, one per homology basis loop

  /// exp(i * coefficient) for each loop.
  std::vector<std::complex<double>> values() const;
};

HolonomyCharacter flat_holonomy(int genus, std::vector<double> coefficients);

/// Representative with every coefficient in [0, 2 pi).
HolonomyCharacter lattice_reduce(const HolonomyCharacter& ch);

/// Largest circular distance between corresponding coefficients.
double lattice_distance(const HolonomyCharacter& a, const HolonomyCharacter& b);

}  // namespace bundlecurv::classify
