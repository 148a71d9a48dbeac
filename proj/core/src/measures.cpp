// Copyright 2026 the wotlab authors
// Licensed under the Apache License, Version 2.0 (see LICENSE).

#include "wotlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wotlab {

namespace {

// Lexicographic key used to merge coincident atoms deterministically.
struct PointLess {
  bool operator()(const Point& a, const Point& b) const {
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return false;
  }
};

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Point> points, Vector weights, double moment_order)
    : p_(moment_order) {
  if (points.size() != static_cast<size_t>(weights.size()))
    throw InvalidArgument("measure: points/weights size mismatch");
  if (points.empty()) throw InvalidArgument("measure: empty support");
  if (p_ < 1.0) throw InvalidArgument("measure: moment order must be >= 1");
  const int d = static_cast<int>(points[0].size());
  if (d < 1) throw InvalidArgument("measure: dimension must be >= 1");
  double total = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d) throw InvalidArgument("measure: inconsistent dimensions");
    if (!points[i].allFinite()) throw InvalidArgument("measure: non-finite coordinate");
    if (weights[i] < -1e-15) throw InvalidArgument("measure: negative weight");
    total += std::max(weights[i], 0.0);
  }
  if (std::abs(total - 1.0) > 1e-12) throw InvalidArgument("measure: weights do not sum to 1");

  // Merge coincident points, drop atoms below the dedup threshold, keep the
  // first-seen ordering of surviving atoms.
  std::map<Point, double, PointLess> merged;
  std::vector<Point> order;
  const Tolerances tol;
  for (size_t i = 0; i < points.size(); ++i) {
    double w = std::max(weights[i], 0.0);
    auto [it, inserted] = merged.try_emplace(points[i], 0.0);
    if (inserted) order.push_back(points[i]);
    it->second += w;
  }
  double kept = 0.0;
  for (const Point& pt : order) {
    if (merged[pt] >= tol.dedup) kept += merged[pt];
  }
  if (kept <= 0.0) throw InvalidArgument("measure: all atoms pruned");
  points_.reserve(order.size());
  std::vector<double> w;
  w.reserve(order.size());
  for (const Point& pt : order) {
    double m = merged[pt];
    if (m < tol.dedup) continue;
    points_.push_back(pt);
    w.push_back(m / kept);
  }
  weights_ = Eigen::Map<Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
}

DiscreteMeasure DiscreteMeasure::dirac(Point x, double moment_order) {
  Vector w(1);
  w << 1.0;
  return DiscreteMeasure({std::move(x)}, w, moment_order);
}

Point DiscreteMeasure::mean() const {
  Point m = Point::Zero(dim());
  for (int i = 0; i < size(); ++i) m += weights_[i] * points_[i];
  return m;
}

double DiscreteMeasure::p_moment(double p) const {
  if (p < 1.0) throw InvalidArgument("p_moment: p must be >= 1");
  double s = 0.0;
  for (int i = 0; i < size(); ++i) s += weights_[i] * std::pow(points_[i].norm(), p);
  return s;
}

bool DiscreteMeasure::same_support(const DiscreteMeasure& other, double tol) const {
  if (size() != other.size()) return false;
  for (int i = 0; i < size(); ++i) {
    if (points_[i].size() != other.points_[i].size()) return false;
    if ((points_[i] - other.points_[i]).lpNorm<Eigen::Infinity>() > tol) return false;
  }
  return true;
}

Coupling::Coupling(DiscreteMeasure mu, DiscreteMeasure nu, Matrix matrix, double tol)
    : mu_(std::move(mu)), nu_(std::move(nu)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != mu_.size() || matrix_.cols() != nu_.size())
    throw InvalidArgument("coupling: matrix shape does not match supports");
  if ((matrix_.array() < -tol).any()) throw InvalidArgument("coupling: negative entry");
  matrix_ = matrix_.cwiseMax(0.0);
  Vector row_sums = matrix_.rowwise().sum();
  Vector col_sums = matrix_.colwise().sum().transpose();
  if ((row_sums - mu_.weights()).lpNorm<Eigen::Infinity>() > tol)
    throw InvalidArgument("coupling: row sums do not match first marginal");
  if ((col_sums - nu_.weights()).lpNorm<Eigen::Infinity>() > tol)
    throw InvalidArgument("coupling: column sums do not match second marginal");
}

Coupling Coupling::product(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  Matrix m = mu.weights() * nu.weights().transpose();
  return Coupling(mu, nu, std::move(m));
}

Kernel::Kernel(std::vector<Point> source, std::vector<std::optional<DiscreteMeasure>> rows)
    : source_(std::move(source)), rows_(std::move(rows)) {
  if (source_.size() != rows_.size()) throw InvalidArgument("kernel: source/rows size mismatch");
}

std::pair<DiscreteMeasure, Kernel> disintegrate(const Coupling& c) {
  const DiscreteMeasure& mu = c.first();
  const DiscreteMeasure& nu = c.second();
  std::vector<std::optional<DiscreteMeasure>> rows;
  rows.reserve(mu.size());
  for (int i = 0; i < mu.size(); ++i) {
    double mass = c.matrix().row(i).sum();
    if (mass < Tolerances{}.dedup) {
      rows.emplace_back(std::nullopt);
      continue;
    }
    Vector w = c.matrix().row(i).transpose() / mass;
    rows.emplace_back(DiscreteMeasure(nu.points(), w, nu.moment_order()));
  }
  return {mu, Kernel(mu.points(), std::move(rows))};
}

Coupling compose(const DiscreteMeasure& mu, const Kernel& k) {
  if (k.size() != mu.size()) throw InvalidArgument("compose: kernel/measure size mismatch");
  for (int i = 0; i < mu.size(); ++i) {
    if ((k.source_support()[i] - mu.point(i)).lpNorm<Eigen::Infinity>() != 0.0)
      throw InvalidArgument("compose: kernel source support does not match measure");
  }
  // Canonical second support: lexicographically sorted union of row supports.
  std::map<Point, int, PointLess> index;
  std::vector<Point> support;
  for (int i = 0; i < mu.size(); ++i) {
    if (!k.row(i)) continue;
    for (const Point& z : k.row(i)->points()) {
      if (index.emplace(z, 0).second) support.push_back(z);
    }
  }
  if (support.empty()) throw InvalidArgument("compose: all kernel rows empty");
  std::sort(support.begin(), support.end(), [](const Point& a, const Point& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return true;
      if (a[i] > b[i]) return false;
    }
    return false;
  });
  for (size_t j = 0; j < support.size(); ++j) index[support[j]] = static_cast<int>(j);

  Matrix m = Matrix::Zero(mu.size(), static_cast<Eigen::Index>(support.size()));
  for (int i = 0; i < mu.size(); ++i) {
    if (!k.row(i)) {
      if (mu.weight(i) > Tolerances{}.dedup)
        throw InvalidArgument("compose: empty row for positive-mass atom");
      continue;
    }
    const DiscreteMeasure& row = *k.row(i);
    for (int j = 0; j < row.size(); ++j)
      m(i, index.at(row.point(j))) += mu.weight(i) * row.weight(j);
  }
  Vector col = m.colwise().sum().transpose();
  DiscreteMeasure second(support, col, mu.moment_order());
  // Re-assemble columns against the pruned/merged support of `second`.
  if (second.size() != static_cast<int>(support.size())) {
    Matrix packed = Matrix::Zero(mu.size(), second.size());
    for (size_t j = 0; j < support.size(); ++j) {
      for (int q = 0; q < second.size(); ++q) {
        if ((second.point(q) - support[j]).lpNorm<Eigen::Infinity>() == 0.0) {
          packed.col(q) += m.col(static_cast<Eigen::Index>(j));
          break;
        }
      }
    }
    m = std::move(packed);
  }
  return Coupling(mu, second, std::move(m));
}

Point mean(const DiscreteMeasure& rho) { return rho.mean(); }

double p_moment(const DiscreteMeasure& rho, double p) { return rho.p_moment(p); }

}  // namespace wotlab
