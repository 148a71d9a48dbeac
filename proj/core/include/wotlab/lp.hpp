// Copyright 2026 the wotlab authors
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <vector>

#include "wotlab/types.hpp"

namespace wotlab {

enum class RowSense { LessEqual, Equal, GreaterEqual };

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

/// Dense linear program
///   min (or max) objective . x
///   s.t. constraints x {<=,=,>=} rhs,  lower <= x <= upper.
struct LinearProgram {
  bool maximize = false;
  Vector objective;
  Matrix constraints;  // m x n
  Vector rhs;
  std::vector<RowSense> senses;
  Vector lower;  // entries may be -inf
  Vector upper;  // entries may be +inf

  static LinearProgram minimize(int num_vars);
  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }
  /// Appends one constraint row.
  void add_row(const Vector& coeffs, RowSense sense, double b);
  /// Appends a sparse row given (index, coefficient) pairs.
  void add_row(const std::vector<std::pair<int, double>>& entries, RowSense sense, double b);
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  Vector primal;         // original variable space
  Vector duals;          // one multiplier per original row
  Vector reduced_costs;  // original variable space (shifted vars: sign of the internal column)
  double objective = 0.0;
  /// Infeasibility certificate over the original rows: y with y.b > 0 and
  /// y.A <= 0 once senses and active bounds are folded in. Empty unless
  /// status == Infeasible. farkas_verified reports the internal recheck.
  Vector farkas;
  bool farkas_verified = false;
  double farkas_residual = 0.0;
  int iterations = 0;
  double feasibility_residual = 0.0;
  double duality_residual = 0.0;  // |primal obj - dual obj| at optimality
};

LpSolution solve_lp(const LinearProgram& lp, const Tolerances& tol = {});

/// Independent feasibility recheck of a candidate point against the program.
double lp_feasibility_residual(const LinearProgram& lp, const Vector& x);

}  // namespace wotlab
