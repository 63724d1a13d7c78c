#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "vowel/errors.hpp"
#include "vowel/rng.hpp"

namespace vowel {

struct KmeansResult {
  Eigen::MatrixXd centers;      // k x d, in creation order
  std::vector<int> assignment;  // nearest-center index per input row
  int iterations = 0;
};

namespace detail {

// Lexicographic row order. All internal passes run over this canonical view
// so the outcome is independent of the caller's point order.
inline std::vector<int> canonical_order(const Eigen::MatrixXd& pts) {
  std::vector<int> order(static_cast<std::size_t>(pts.rows()));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    for (Eigen::Index j = 0; j < pts.cols(); ++j) {
      if (pts(a, j) < pts(b, j)) return true;
      if (pts(a, j) > pts(b, j)) return false;
    }
    return false;
  });
  return order;
}

inline int nearest_center(const Eigen::MatrixXd& centers, int k, const Eigen::RowVectorXd& p) {
  int best = 0;
  double best_d2 = (p - centers.row(0)).squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double d2 = (p - centers.row(j)).squaredNorm();
    if (d2 < best_d2) {  // ties keep the lowest center index
      best_d2 = d2;
      best = j;
    }
  }
  return best;
}

}  // namespace detail

/// k-means++ seeding followed by Lloyd iterations. Deterministic for a given
/// Rng state and independent of input row order. An empty cluster is repaired
/// by moving the point farthest from its current center; a second failure is
/// an error.
inline KmeansResult kmeans(const Eigen::MatrixXd& points, int k, Rng& rng,
                           int max_iterations = 50) {
  const int n = static_cast<int>(points.rows());
  const int d = static_cast<int>(points.cols());
  if (k < 1) throw config_error("kmeans: k must be >= 1");
  if (n < k) throw data_error("kmeans: fewer points than clusters");

  const auto order = detail::canonical_order(points);
  Eigen::MatrixXd pts(n, d);
  for (int i = 0; i < n; ++i) pts.row(i) = points.row(order[i]);

  // seeding: first center uniform, then proportional to squared distance
  Eigen::MatrixXd centers(k, d);
  std::vector<char> chosen(n, 0);
  {
    const int first = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n)));
    centers.row(0) = pts.row(first);
    chosen[first] = 1;
  }
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  for (int j = 1; j < k; ++j) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dist = (pts.row(i) - centers.row(j - 1)).squaredNorm();
      if (dist < d2[i]) d2[i] = dist;
      total += d2[i];
    }
    int pick = -1;
    if (total > 0.0) {
      const double u = rng.uniform() * total;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = n - 1;
    }
    if (pick < 0 || chosen[pick]) {
      // duplicate-heavy data: fall back to the first unchosen point
      pick = -1;
      for (int i = 0; i < n; ++i) {
        if (!chosen[i]) {
          pick = i;
          break;
        }
      }
      if (pick < 0) throw numeric_error("kmeans: cannot seed distinct centers");
    }
    centers.row(j) = pts.row(pick);
    chosen[pick] = 1;
  }

  // Lloyd
  std::vector<int> assign(n, -1);
  int iterations = 0;
  for (int it = 0; it < max_iterations; ++it) {
    ++iterations;
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      const int a = detail::nearest_center(centers, k, pts.row(i));
      if (a != assign[i]) {
        assign[i] = a;
        changed = true;
      }
    }

    std::vector<int> sizes(k, 0);
    for (int i = 0; i < n; ++i) ++sizes[assign[i]];
    for (int repairs = 0; true; ++repairs) {
      int empty = -1;
      for (int j = 0; j < k; ++j)
        if (sizes[j] == 0) {
          empty = j;
          break;
        }
      if (empty < 0) break;
      if (repairs >= 2) throw numeric_error("kmeans: empty cluster persisted after reassignment");
      int worst = -1;
      double worst_d2 = -1.0;
      for (int i = 0; i < n; ++i) {
        if (sizes[assign[i]] <= 1) continue;  // don't strand another cluster
        const double dist = (pts.row(i) - centers.row(assign[i])).squaredNorm();
        if (dist > worst_d2) {
          worst_d2 = dist;
          worst = i;
        }
      }
      if (worst < 0) throw numeric_error("kmeans: empty cluster persisted after reassignment");
      --sizes[assign[worst]];
      assign[worst] = empty;
      ++sizes[empty];
      changed = true;
    }

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
    for (int i = 0; i < n; ++i) sums.row(assign[i]) += pts.row(i);
    for (int j = 0; j < k; ++j) centers.row(j) = sums.row(j) / static_cast<double>(sizes[j]);

    if (!changed) break;
  }

  KmeansResult result;
  result.centers = std::move(centers);
  result.assignment.resize(n);
  for (int i = 0; i < n; ++i) result.assignment[order[i]] = assign[i];
  result.iterations = iterations;
  return result;
}

}  // namespace vowel
