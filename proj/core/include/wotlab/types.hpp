// Copyright 2026 the wotlab authors
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace wotlab {

/// A point of the ambient space R^d.
using Point = Eigen::VectorXd;

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_finite(double v) { return std::isfinite(v); }

/// Central numerical tolerances. All solver modules read from one record so
/// that acceptance thresholds are pinned in a single place.
struct Tolerances {
  double feasibility = 1e-8;   // constraint residuals accepted as feasible
  double gap = 1e-6;           // certified optimality gap for iterative solvers
  double lp_pivot = 1e-9;      // simplex pivot / reduced-cost threshold
  double margin = 1e-9;        // order-violation margin separating verdicts
  double mean_tol = 1e-9;      // martingale / submartingale mean tolerance
  double coupling = 1e-10;     // marginal residual allowed on couplings
  double dedup = 1e-14;        // atom pruning threshold on measures
};

/// Error for malformed inputs (schema violations, dimension mismatches).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Error for numerical failures (tolerance unattainable, iteration caps).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Point point1(double x) {
  Point p(1);
  p << x;
  return p;
}

inline Point point2(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

}  // namespace wotlab
