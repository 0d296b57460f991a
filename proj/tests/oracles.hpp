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

// Slow, obviously-correct reference computations used only by the tests.
// None of these share code with the library paths they check.

#ifndef ENTROPIC_TESTS_ORACLES_HPP
#define ENTROPIC_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "entropic/arena.hpp"

namespace entropic::oracle {

/// Marches along the ray in fixed increments until it leaves free space.
inline double sampled_raycast(const Arena& arena, Vec2 origin, double angle, double max_range, double step = 1e-4) {
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  for (long i = 1;; ++i) {
    const double t = static_cast<double>(i) * step;
    if (t >= max_range) return max_range;
    if (!arena.is_free({origin.x + t * dx, origin.y + t * dy})) return t;
  }
}

/// Cells reachable from the start cell through 4-connected free cells.
inline std::size_t flood_fill_reachable(const Arena& arena) {
  const auto start = *arena.cell_of(arena.start_pose().position());
  std::vector<char> seen(arena.cell_count(), 0);
  std::vector<CellIndex> stack{start};
  seen[arena.linear(start.col, start.row)] = 1;
  std::size_t n = 0;
  while (!stack.empty()) {
    const auto c = stack.back();
    stack.pop_back();
    ++n;
    const int dc[] = {1, -1, 0, 0};
    const int dr[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int col = c.col + dc[k];
      const int row = c.row + dr[k];
      if (!arena.is_free_cell(col, row) || seen[arena.linear(col, row)]) continue;
      seen[arena.linear(col, row)] = 1;
      stack.push_back({col, row});
    }
  }
  return n;
}

struct NaiveCluster {
  std::vector<double> center;
  long count = 0;
};

inline double euclid(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Single pass over the stream: full distance to every center, first
/// minimum wins, found a new cluster when the minimum exceeds epsilon.
inline std::vector<NaiveCluster> epsilon_means(const std::vector<std::vector<double>>& points, double epsilon,
                                               std::vector<NaiveCluster> clusters = {}) {
  for (const auto& x : points) {
    long best = -1;
    double best_d = 0;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      const double d = euclid(x, clusters[i].center);
      if (best < 0 || d < best_d) {
        best = static_cast<long>(i);
        best_d = d;
      }
    }
    if (best < 0 || best_d > epsilon) {
      clusters.push_back({x, 1});
    } else {
      clusters[best].count += 1;
    }
  }
  return clusters;
}

/// Shannon entropy of a count vector, written out term by term.
inline double entropy_of_counts(const std::vector<double>& counts) {
  double total = 0;
  for (double n : counts) total += n;
  double h = 0;
  for (double n : counts) {
    if (n <= 0) continue;
    const double p = n / total;
    h += -p * std::log(p);
  }
  return h;
}

/// Sorts every distance and averages the first k.
inline double knn_mean_distance(Vec2 p, const std::vector<Vec2>& archive, std::size_t k) {
  std::vector<double> d;
  for (const auto& q : archive) d.push_back(std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y)));
  std::sort(d.begin(), d.end());
  const std::size_t n = std::min(k, d.size());
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += d[i];
  return s / static_cast<double>(n);
}

}  // namespace entropic::oracle

#endif  // ENTROPIC_TESTS_ORACLES_HPP
