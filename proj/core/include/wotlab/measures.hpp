// Copyright 2026 the wotlab authors
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "wotlab/types.hpp"

namespace wotlab {

/// Weighted finite point cloud in R^d. Weights sum to one; atoms below the
/// dedup threshold are pruned and coincident points are merged at
/// construction, so supports stay canonical for LP indexing.
class DiscreteMeasure {
 public:
  /// Throws InvalidArgument on negative weights, size mismatch, or a weight
  /// sum off by more than 1e-12 (after pruning, weights are renormalized by
  /// the pruned mass so the sum stays exact).
  DiscreteMeasure(std::vector<Point> points, Vector weights, double moment_order = 2.0);

  static DiscreteMeasure dirac(Point x, double moment_order = 2.0);

  int size() const { return static_cast<int>(points_.size()); }
  int dim() const { return points_.empty() ? 0 : static_cast<int>(points_[0].size()); }
  const std::vector<Point>& points() const { return points_; }
  const Point& point(int i) const { return points_[i]; }
  const Vector& weights() const { return weights_; }
  double weight(int i) const { return weights_[i]; }
  double moment_order() const { return p_; }

  Point mean() const;
  double p_moment(double p) const;

  /// Integral of f over the measure, f given by values aligned with points().
  double integrate(const Vector& values) const { return weights_.dot(values); }

  bool same_support(const DiscreteMeasure& other, double tol = 0.0) const;

 private:
  std::vector<Point> points_;
  Vector weights_;
  double p_;
};

/// Joint matrix on supp(mu) x supp(nu). Row sums reproduce mu's weights and
/// column sums nu's weights within the coupling tolerance.
class Coupling {
 public:
  Coupling(DiscreteMeasure mu, DiscreteMeasure nu, Matrix matrix,
           double tol = Tolerances{}.coupling);

  const DiscreteMeasure& first() const { return mu_; }
  const DiscreteMeasure& second() const { return nu_; }
  const Matrix& matrix() const { return matrix_; }

  static Coupling product(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

 private:
  DiscreteMeasure mu_, nu_;
  Matrix matrix_;
};

/// Disintegration rows: one conditional measure per source atom. Rows for
/// zero-mass source atoms are flagged empty (nullopt).
class Kernel {
 public:
  Kernel(std::vector<Point> source, std::vector<std::optional<DiscreteMeasure>> rows);

  int size() const { return static_cast<int>(source_.size()); }
  const std::vector<Point>& source_support() const { return source_; }
  const std::optional<DiscreteMeasure>& row(int i) const { return rows_[i]; }
  const std::vector<std::optional<DiscreteMeasure>>& rows() const { return rows_; }

 private:
  std::vector<Point> source_;
  std::vector<std::optional<DiscreteMeasure>> rows_;
};

/// Splits a coupling into its first marginal and the conditional kernel.
std::pair<DiscreteMeasure, Kernel> disintegrate(const Coupling& c);

/// Measure-kernel composition: matrix[x][z] = mu_x * k.rows[x](z). The
/// kernel's source support must match mu's points exactly.
Coupling compose(const DiscreteMeasure& mu, const Kernel& k);

Point mean(const DiscreteMeasure& rho);
double p_moment(const DiscreteMeasure& rho, double p);

}  // namespace wotlab
