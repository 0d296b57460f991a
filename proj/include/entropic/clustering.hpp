// Copyright 2026 The Entropic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ENTROPIC_CLUSTERING_HPP
#define ENTROPIC_CLUSTERING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <ranges>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "entropic/controller.hpp"

namespace entropic {

/// Cluster centers with visit counts. Centers are stored row-major in one
/// flat buffer; all share the dimension fixed by the first insertion.
class ClusterSet {
 public:
  ClusterSet() = default;

  std::size_t size() const noexcept { return counts_.size(); }
  bool empty() const noexcept { return counts_.empty(); }
  std::size_t dim() const noexcept { return dim_; }
  std::uint64_t total() const noexcept { return total_; }

  std::span<const double> center(std::size_t i) const { return {centers_.data() + i * dim_, dim_}; }
  std::uint64_t count(std::size_t i) const { return counts_[i]; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  // Build parameters, kept for reporting only.
  double epsilon = 0.0;
  std::size_t k = 0;

  void add_cluster(std::span<const double> c, std::uint64_t n = 1) {
    if (n == 0) throw std::invalid_argument("cluster count must be >= 1");
    if (empty() && dim_ == 0) dim_ = c.size();
    if (c.size() != dim_) throw std::invalid_argument("cluster dimension mismatch");
    centers_.insert(centers_.end(), c.begin(), c.end());
    counts_.push_back(n);
    total_ += n;
  }

  void increment(std::size_t i, std::uint64_t n = 1) {
    counts_.at(i) += n;
    total_ += n;
  }

  void check_dim(std::span<const double> x) const {
    if (dim_ != 0 && x.size() != dim_)
      throw std::invalid_argument("dimension mismatch: expected " + std::to_string(dim_) + ", got " + std::to_string(x.size()));
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> centers_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct NearestCluster {
  std::size_t index = 0;
  double distance = 0.0;
};

/// Lowest index attaining the minimal Euclidean distance to `x`.
inline NearestCluster nearest_cluster(const ClusterSet& clusters, std::span<const double> x) {
  if (clusters.empty()) throw std::invalid_argument("nearest_cluster: empty cluster set");
  clusters.check_dim(x);
  const std::size_t dim = clusters.dim();
  std::size_t best = 0;
  double best_sq = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const double* c = clusters.center(i).data();
    double s = 0.0;
    std::size_t j = 0;
    // Partial sums only grow, so abandoning once past the best is exact.
    for (; j < dim; ++j) {
      const double d = x[j] - c[j];
      s += d * d;
      if (s > best_sq) break;
    }
    if (j == dim && s < best_sq) {
      best_sq = s;
      best = i;
    }
  }
  return {best, std::sqrt(best_sq)};
}

/// One step of online epsilon-means: `x` joins its nearest center if that is
/// within `epsilon`, otherwise it founds a new cluster centered on itself.
/// Centers never move. Returns the index of the cluster credited.
inline std::size_t epsilon_means_update(ClusterSet& clusters, std::span<const double> x, double epsilon) {
  if (clusters.empty()) {
    clusters.check_dim(x);
    clusters.add_cluster(x);
    clusters.epsilon = epsilon;
    return 0;
  }
  const auto nearest = nearest_cluster(clusters, x);
  if (nearest.distance > epsilon) {
    clusters.add_cluster(x);
    return clusters.size() - 1;
  }
  clusters.increment(nearest.index);
  return nearest.index;
}

template <class Rows>
void epsilon_means(ClusterSet& clusters, const Rows& rows, double epsilon) {
  for (const auto& row : rows) epsilon_means_update(clusters, std::span<const double>(std::ranges::data(row), std::ranges::size(row)), epsilon);
}

inline constexpr int kKmeansMaxIterations = 200;

struct NoKmeansObserver {
  void operator()(int /*iteration*/, double /*wcss*/) const {}
};

/// Lloyd's algorithm. Centers start at k distinct random training points;
/// assignment and centroid steps alternate until no assignment changes or
/// kKmeansMaxIterations is reached. An empty cluster is re-seeded at the point
/// farthest from its assigned center. `observer(iteration, wcss)` sees the
/// within-cluster sum of squares after every centroid step.
template <class Rows, class Observer = NoKmeansObserver>
ClusterSet kmeans(const Rows& rows, std::size_t k, Rng& rng, Observer&& observer = {}) {
  std::vector<std::span<const double>> points;
  for (const auto& row : rows) points.emplace_back(std::ranges::data(row), std::ranges::size(row));
  const std::size_t n = points.size();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > n) throw std::invalid_argument("kmeans: k exceeds the number of points");
  const std::size_t dim = points.front().size();
  for (const auto& p : points)
    if (p.size() != dim) throw std::invalid_argument("kmeans: points differ in dimension");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(order[i], order[pick(rng)]);
  }
  std::vector<double> centers(k * dim);
  for (std::size_t c = 0; c < k; ++c) std::copy(points[order[c]].begin(), points[order[c]].end(), centers.begin() + c * dim);
  auto center = [&](std::size_t c) { return std::span<const double>(centers.data() + c * dim, dim); };

  constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> assignment(n, kUnassigned);
  std::vector<std::size_t> sizes(k);
  std::vector<double> sums(k * dim);

  for (int iteration = 0; iteration < kKmeansMaxIterations; ++iteration) {
    bool changed = false;
    for (std::size_t t = 0; t < n; ++t) {
      std::size_t best = 0;
      double best_sq = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_distance(points[t], center(c));
        if (d < best_sq) {
          best_sq = d;
          best = c;
        }
      }
      if (assignment[t] != best) {
        assignment[t] = best;
        changed = true;
      }
    }
    if (!changed) break;

    std::fill(sizes.begin(), sizes.end(), 0);
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      ++sizes[assignment[t]];
      for (std::size_t j = 0; j < dim; ++j) sums[assignment[t] * dim + j] += points[t][j];
    }
    std::vector<bool> reseeded(n, false);
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] > 0) {
        for (std::size_t j = 0; j < dim; ++j) centers[c * dim + j] = sums[c * dim + j] / static_cast<double>(sizes[c]);
      }
    }
    double wcss = 0.0;
    for (std::size_t t = 0; t < n; ++t) wcss += squared_distance(points[t], center(assignment[t]));
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t far = kUnassigned;
      double far_sq = -1.0;
      for (std::size_t t = 0; t < n; ++t) {
        if (reseeded[t]) continue;
        const double d = squared_distance(points[t], center(assignment[t]));
        if (d > far_sq) {
          far_sq = d;
          far = t;
        }
      }
      if (far == kUnassigned) break;
      reseeded[far] = true;
      std::copy(points[far].begin(), points[far].end(), centers.begin() + c * dim);
    }
    observer(iteration, wcss);
  }

  std::fill(sizes.begin(), sizes.end(), 0);
  for (std::size_t t = 0; t < n; ++t) ++sizes[assignment[t]];
  ClusterSet result;
  result.k = k;
  // A cluster can only stay empty when points are duplicated; it is dropped
  // so every reported count is at least one.
  for (std::size_t c = 0; c < k; ++c)
    if (sizes[c] > 0) result.add_cluster(center(c), sizes[c]);
  return result;
}

/// CSV dump with header `n,c0..c{d-1}`, one row per cluster.
inline void write_clusters_csv(std::ostream& out, const ClusterSet& clusters, std::size_t dim_hint = 10) {
  const std::size_t dim = clusters.empty() ? dim_hint : clusters.dim();
  out << 'n';
  for (std::size_t j = 0; j < dim; ++j) out << ",c" << j;
  out << '\n';
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    out << clusters.count(i);
    for (double v : clusters.center(i)) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace entropic

#endif  // ENTROPIC_CLUSTERING_HPP
