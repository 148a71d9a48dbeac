// Copyright 2026 the wotlab authors
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#include "wotlab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wotlab {

LinearProgram LinearProgram::minimize(int num_vars) {
  LinearProgram lp;
  lp.objective = Vector::Zero(num_vars);
  lp.constraints = Matrix::Zero(0, num_vars);
  lp.rhs = Vector::Zero(0);
  lp.lower = Vector::Zero(num_vars);
  lp.upper = Vector::Constant(num_vars, kInf);
  return lp;
}

void LinearProgram::add_row(const Vector& coeffs, RowSense sense, double b) {
  if (coeffs.size() != objective.size()) throw InvalidArgument("lp: row size mismatch");
  constraints.conservativeResize(constraints.rows() + 1, objective.size());
  constraints.row(constraints.rows() - 1) = coeffs.transpose();
  rhs.conservativeResize(rhs.size() + 1);
  rhs[rhs.size() - 1] = b;
  senses.push_back(sense);
}

void LinearProgram::add_row(const std::vector<std::pair<int, double>>& entries, RowSense sense,
                            double b) {
  Vector row = Vector::Zero(objective.size());
  for (const auto& [j, v] : entries) row[j] += v;
  add_row(row, sense, b);
}

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// How an original variable maps into standard-form columns.
struct VarMap {
  enum Kind { Shifted, Flipped, Split } kind = Shifted;
  int col = -1;       // primary column
  int col_neg = -1;   // second column for Split
  double offset = 0;  // x = offset + x_hat (Shifted), x = offset - x_hat (Flipped)
};

struct StdForm {
  RowMajor A;  // m x n_total (structural + slacks + artificials)
  Vector b;    // >= 0 after row sign normalization
  Vector c;    // phase-2 costs on structural+slack columns, 0 on artificials
  double c0 = 0.0;
  int n_struct = 0;  // structural + slack columns
  int m = 0;
  std::vector<VarMap> vars;
  std::vector<double> row_flip;  // +-1 per std row
  int n_orig_rows = 0;           // std rows 0..n_orig_rows-1 mirror lp rows
};

StdForm build_standard_form(const LinearProgram& lp) {
  const int n = lp.num_vars();
  const int m0 = lp.num_rows();
  StdForm sf;
  sf.n_orig_rows = m0;
  sf.vars.resize(n);

  int cols = 0;
  int extra_rows = 0;
  for (int j = 0; j < n; ++j) {
    double lo = lp.lower[j], hi = lp.upper[j];
    if (lo > hi) throw InvalidArgument("lp: empty bound interval");
    VarMap& vm = sf.vars[j];
    if (std::isfinite(lo)) {
      vm.kind = VarMap::Shifted;
      vm.offset = lo;
      vm.col = cols++;
      if (std::isfinite(hi)) ++extra_rows;  // x_hat <= hi - lo
    } else if (std::isfinite(hi)) {
      vm.kind = VarMap::Flipped;
      vm.offset = hi;
      vm.col = cols++;
    } else {
      vm.kind = VarMap::Split;
      vm.col = cols++;
      vm.col_neg = cols++;
    }
  }
  int n_slack = 0;
  for (RowSense s : lp.senses)
    if (s != RowSense::Equal) ++n_slack;
  n_slack += extra_rows;

  const int m = m0 + extra_rows;
  const int n_struct = cols + n_slack;
  const int n_total = n_struct + m;
  sf.A = RowMajor::Zero(m, n_total);
  sf.b = Vector::Zero(m);
  sf.c = Vector::Zero(n_total);
  sf.n_struct = n_struct;
  sf.m = m;
  sf.row_flip.assign(m, 1.0);

  Vector sign = Vector::Ones(n);
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = sf.vars[j];
    double coeff_sign = (vm.kind == VarMap::Flipped) ? -1.0 : 1.0;
    sf.c[vm.col] = coeff_sign * lp.objective[j] * (lp.maximize ? -1.0 : 1.0);
    if (vm.kind == VarMap::Split)
      sf.c[vm.col_neg] = -lp.objective[j] * (lp.maximize ? -1.0 : 1.0);
    sf.c0 += lp.objective[j] * (lp.maximize ? -1.0 : 1.0) * vm.offset;
    sign[j] = coeff_sign;
  }

  int slack_at = cols;
  for (int i = 0; i < m0; ++i) {
    double b = lp.rhs[i];
    for (int j = 0; j < n; ++j) {
      double a = lp.constraints(i, j);
      if (a == 0.0) continue;
      const VarMap& vm = sf.vars[j];
      b -= a * vm.offset;
      sf.A(i, vm.col) = a * sign[j];
      if (vm.kind == VarMap::Split) sf.A(i, vm.col_neg) = -a;
    }
    if (lp.senses[i] == RowSense::LessEqual)
      sf.A(i, slack_at++) = 1.0;
    else if (lp.senses[i] == RowSense::GreaterEqual)
      sf.A(i, slack_at++) = -1.0;
    sf.b[i] = b;
  }
  int r = m0;
  for (int j = 0; j < n; ++j) {
    const VarMap& vm = sf.vars[j];
    if (vm.kind == VarMap::Shifted && std::isfinite(lp.upper[j])) {
      sf.A(r, vm.col) = 1.0;
      sf.A(r, slack_at++) = 1.0;
      sf.b[r] = lp.upper[j] - lp.lower[j];
      ++r;
    }
  }
  for (int i = 0; i < m; ++i) {
    if (sf.b[i] < 0.0) {
      sf.A.row(i) = -sf.A.row(i);
      sf.b[i] = -sf.b[i];
      sf.row_flip[i] = -1.0;
    }
    sf.A(i, n_struct + i) = 1.0;  // artificial
  }
  return sf;
}

// Dense tableau simplex on min c.x, A x = b, x >= 0, initial basis given.
// Entering rule: most negative reduced cost with smallest-index ties; falls
// back to Bland's rule after a stall so cycling cannot occur. Leaving rule:
// minimum ratio with smallest basis-index ties.
class Tableau {
 public:
  Tableau(const StdForm& sf, const Tolerances& tol)
      : sf_(sf), tol_(tol), T_(sf.A), rhs_(sf.b), basis_(sf.m) {
    for (int i = 0; i < sf.m; ++i) basis_[i] = sf.n_struct + i;
  }

  // Runs the simplex for the given cost vector. allow_artificials controls
  // whether artificial columns may enter the basis.
  LpStatus run(const Vector& cost, bool allow_artificials, int* iters) {
    const int n_enter = allow_artificials ? static_cast<int>(T_.cols()) : sf_.n_struct;
    int stall = 0;
    bool bland = false;
    double last_obj = std::numeric_limits<double>::infinity();
    const int max_iter = 2000 + 60 * (sf_.m + sf_.n_struct);
    Vector red = Vector::Zero(T_.cols());
    int since_rebuild = 0;
    for (int it = 0; it < max_iter; ++it) {
      if (iters) ++(*iters);
      if (since_rebuild == 0) {
        red = reduced_costs(cost);
      }
      if (++since_rebuild >= 48) since_rebuild = 0;

      int enter = -1;
      if (!bland) {
        double best = -tol_.lp_pivot;
        for (int j = 0; j < n_enter; ++j) {
          if (red[j] < best) {
            best = red[j];
            enter = j;
          }
        }
      } else {
        for (int j = 0; j < n_enter; ++j) {
          if (red[j] < -tol_.lp_pivot) {
            enter = j;
            break;
          }
        }
      }
      if (enter < 0) {
        // Verify optimality against freshly computed reduced costs.
        Vector fresh = reduced_costs(cost);
        int wrong = -1;
        for (int j = 0; j < n_enter; ++j) {
          if (fresh[j] < -10 * tol_.lp_pivot) {
            wrong = j;
            break;
          }
        }
        if (wrong < 0) return LpStatus::Optimal;
        red = fresh;
        since_rebuild = 1;
        continue;
      }

      int leave = -1;
      double best_ratio = kInf;
      for (int i = 0; i < sf_.m; ++i) {
        double a = T_(i, enter);
        if (a > tol_.lp_pivot) {
          double ratio = rhs_[i] / a;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (leave < 0 || basis_[i] < basis_[leave]))) {
            best_ratio = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      pivot(leave, enter);
      red_update(red, cost, leave, enter);

      double obj = objective(cost);
      if (obj < last_obj - 1e-12) {
        stall = 0;
        last_obj = obj;
      } else if (++stall > 4 * (sf_.m + 4)) {
        bland = true;
      }
    }
    return LpStatus::IterationLimit;
  }

  // After phase 1, pivot surviving artificials out of the basis when a
  // structural column is available; redundant rows keep their artificial.
  void drive_out_artificials() {
    for (int i = 0; i < sf_.m; ++i) {
      if (basis_[i] < sf_.n_struct) continue;
      int enter = -1;
      for (int j = 0; j < sf_.n_struct; ++j) {
        if (std::abs(T_(i, j)) > 1e2 * tol_.lp_pivot) {
          enter = j;
          break;
        }
      }
      if (enter >= 0) pivot(i, enter);
    }
  }

  double objective(const Vector& cost) const {
    double v = 0;
    for (int i = 0; i < sf_.m; ++i) v += cost[basis_[i]] * rhs_[i];
    return v;
  }

  // Row multipliers y = c_B B^{-1}, read off the artificial columns.
  Vector multipliers(const Vector& cost) const {
    Vector y = Vector::Zero(sf_.m);
    for (int r = 0; r < sf_.m; ++r) {
      double cb = cost[basis_[r]];
      if (cb == 0.0) continue;
      for (int i = 0; i < sf_.m; ++i) y[i] += cb * T_(r, sf_.n_struct + i);
    }
    return y;
  }

  Vector reduced_costs(const Vector& cost) const {
    Vector y = multipliers(cost);
    Vector red = cost - T_.transpose().leftCols(0).eval().transpose() * Vector();  // placeholder
    red = cost;
    red.noalias() -= sf_.A.transpose() * y;
    return red;
  }

  const std::vector<int>& basis() const { return basis_; }
  const Vector& basic_values() const { return rhs_; }

  // Recomputes basic values and multipliers from a fresh factorization of the
  // basis matrix to shed accumulated pivot drift.
  void refactorize(const Vector& cost, Vector* x_basic, Vector* y) const {
    Matrix B(sf_.m, sf_.m);
    Vector cb(sf_.m);
    for (int i = 0; i < sf_.m; ++i) {
      B.col(i) = sf_.A.col(basis_[i]);
      cb[i] = cost[basis_[i]];
    }
    Eigen::PartialPivLU<Matrix> lu(B);
    if (x_basic) *x_basic = lu.solve(sf_.b);
    if (y) *y = lu.transpose().solve(cb);
  }

 private:
  void pivot(int row, int col) {
    double p = T_(row, col);
    T_.row(row) /= p;
    rhs_[row] /= p;
    for (int i = 0; i < sf_.m; ++i) {
      if (i == row) continue;
      double f = T_(i, col);
      if (f == 0.0) continue;
      T_.row(i) -= f * T_.row(row);
      rhs_[i] -= f * rhs_[row];
      T_(i, col) = 0.0;
    }
    basis_[row] = col;
  }

  void red_update(Vector& red, const Vector& cost, int row, int col) {
    double f = red[col];
    if (f == 0.0) return;
    red -= f * T_.row(row).transpose();
    red[col] = 0.0;
    (void)cost;
  }

  const StdForm& sf_;
  const Tolerances& tol_;
  RowMajor T_;
  Vector rhs_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const Tolerances& tol) {
  if (lp.constraints.rows() != lp.rhs.size() ||
      lp.senses.size() != static_cast<size_t>(lp.rhs.size()))
    throw InvalidArgument("lp: inconsistent row data");
  StdForm sf = build_standard_form(lp);
  Tableau tab(sf, tol);
  LpSolution sol;

  // Phase 1: minimize the artificial mass.
  Vector c1 = Vector::Zero(sf.A.cols());
  c1.tail(sf.m).setOnes();
  LpStatus s1 = tab.run(c1, true, &sol.iterations);
  if (s1 == LpStatus::IterationLimit) {
    sol.status = LpStatus::IterationLimit;
    return sol;
  }
  Vector xb1, y1;
  tab.refactorize(c1, &xb1, &y1);
  double infeas = 0.0;
  for (int i = 0; i < sf.m; ++i)
    if (tab.basis()[i] >= sf.n_struct) infeas += std::max(xb1[i], 0.0);
  double scale = 1.0 + sf.b.lpNorm<Eigen::Infinity>();
  if (infeas > tol.feasibility * scale) {
    sol.status = LpStatus::Infeasible;
    // Farkas certificate: y.b > 0 and y.A <= 0 over structural columns.
    Vector yA = sf.A.leftCols(sf.n_struct).transpose() * y1;
    sol.farkas_residual = std::max(0.0, yA.maxCoeff());
    sol.farkas_verified =
        sol.farkas_residual <= 1e-9 * (1.0 + y1.lpNorm<Eigen::Infinity>()) && y1.dot(sf.b) > 0.0;
    sol.farkas = Vector::Zero(sf.n_orig_rows);
    for (int i = 0; i < sf.n_orig_rows; ++i) sol.farkas[i] = sf.row_flip[i] * y1[i];
    return sol;
  }
  tab.drive_out_artificials();

  // Phase 2.
  LpStatus s2 = tab.run(sf.c, false, &sol.iterations);
  if (s2 == LpStatus::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }
  if (s2 == LpStatus::IterationLimit) {
    sol.status = LpStatus::IterationLimit;
    return sol;
  }

  Vector xb, y;
  tab.refactorize(sf.c, &xb, &y);
  Vector x_std = Vector::Zero(sf.A.cols());
  for (int i = 0; i < sf.m; ++i) x_std[tab.basis()[i]] = xb[i];

  const int n = lp.num_vars();
  sol.primal = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    const auto& vm = sf.vars[j];
    switch (vm.kind) {
      case VarMap::Shifted:
        sol.primal[j] = vm.offset + x_std[vm.col];
        break;
      case VarMap::Flipped:
        sol.primal[j] = vm.offset - x_std[vm.col];
        break;
      case VarMap::Split:
        sol.primal[j] = x_std[vm.col] - x_std[vm.col_neg];
        break;
    }
  }
  double obj_std = sf.c.dot(x_std) + sf.c0;
  sol.objective = lp.maximize ? -obj_std : obj_std;

  double flip = lp.maximize ? -1.0 : 1.0;
  sol.duals = Vector::Zero(lp.num_rows());
  for (int i = 0; i < sf.n_orig_rows; ++i) sol.duals[i] = flip * sf.row_flip[i] * y[i];
  Vector red_std = sf.c - sf.A.leftCols(sf.A.cols()).transpose() * y;
  sol.reduced_costs = Vector::Zero(n);
  for (int j = 0; j < n; ++j) sol.reduced_costs[j] = flip * red_std[sf.vars[j].col];

  sol.feasibility_residual = lp_feasibility_residual(lp, sol.primal);
  // Dual objective in std space equals y.b + c0; compare with the primal.
  double dual_obj = y.dot(sf.b) + sf.c0;
  sol.duality_residual = std::abs(obj_std - dual_obj);
  sol.status = LpStatus::Optimal;
  if (sol.feasibility_residual > tol.feasibility * scale ||
      sol.duality_residual > 1e-7 * (1.0 + std::abs(obj_std)))
    sol.status = LpStatus::IterationLimit;  // numerical-failure signal
  return sol;
}

double lp_feasibility_residual(const LinearProgram& lp, const Vector& x) {
  double r = 0.0;
  for (int j = 0; j < lp.num_vars(); ++j) {
    r = std::max(r, lp.lower[j] - x[j]);
    r = std::max(r, x[j] - lp.upper[j]);
  }
  Vector ax = lp.constraints * x;
  for (int i = 0; i < lp.num_rows(); ++i) {
    double diff = ax[i] - lp.rhs[i];
    switch (lp.senses[i]) {
      case RowSense::LessEqual:
        r = std::max(r, diff);
        break;
      case RowSense::GreaterEqual:
        r = std::max(r, -diff);
        break;
      case RowSense::Equal:
        r = std::max(r, std::abs(diff));
        break;
    }
  }
  return r;
}

}  // namespace wotlab
