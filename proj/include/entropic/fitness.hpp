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

#ifndef ENTROPIC_FITNESS_HPP
#define ENTROPIC_FITNESS_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "entropic/arena.hpp"
#include "entropic/clustering.hpp"
#include "entropic/robot_sim.hpp"

namespace entropic {

enum class FitnessType { Curiosity, Discovery, Novelty, Displacement };

inline std::string_view to_string(FitnessType type) {
  switch (type) {
    case FitnessType::Curiosity: return "curiosity";
    case FitnessType::Discovery: return "discovery";
    case FitnessType::Novelty: return "novelty";
    case FitnessType::Displacement: return "displacement";
  }
  return "unknown";
}

inline FitnessType parse_fitness_type(std::string_view name) {
  for (auto t : {FitnessType::Curiosity, FitnessType::Discovery, FitnessType::Novelty, FitnessType::Displacement})
    if (to_string(t) == name) return t;
  throw std::invalid_argument("unknown fitness kind '" + std::string(name) + "'");
}

inline double default_epsilon(FitnessType type) { return type == FitnessType::Discovery ? 0.4 : 0.2; }

/// Which clustering builds the sensori-motor states for Curiosity.
enum class StateClustering { EpsilonMeans, KMeans };

/// Whether the Discovery archive absorbs every evaluated stream or only
/// those of accepted offspring.
enum class ArchiveCommit { All, AcceptedOnly };

struct FitnessKind {
  FitnessType type = FitnessType::Curiosity;
  double epsilon = 0.2;
  std::size_t novelty_k = 15;
  StateClustering clustering = StateClustering::EpsilonMeans;
  std::size_t kmeans_k = 20;
  ArchiveCommit discovery_commit = ArchiveCommit::All;
  bool reset_archive_on_restart = false;

  static FitnessKind of(FitnessType type) {
    FitnessKind kind;
    kind.type = type;
    kind.epsilon = default_epsilon(type);
    return kind;
  }

  void validate() const {
    if (!(epsilon > 0)) throw std::invalid_argument("epsilon must be > 0");
    if (novelty_k < 1) throw std::invalid_argument("novelty_k must be >= 1");
    if (kmeans_k < 1) throw std::invalid_argument("kmeans_k must be >= 1");
  }
};

/// Shannon entropy (natural log) of the normalised cluster counts.
inline double entropy(const ClusterSet& clusters) {
  if (clusters.empty()) throw std::invalid_argument("entropy: empty cluster set");
  const double total = static_cast<double>(clusters.total());
  double h = 0.0;
  for (auto n : clusters.counts()) {
    if (n == 0) continue;
    const double p = static_cast<double>(n) / total;
    h -= p * std::log(p);
  }
  return h > 0.0 ? h : 0.0;
}

struct ClusteredFitness {
  double fitness = 0.0;
  ClusterSet clusters;
};

/// Entropy of a fresh epsilon-means clustering of the stream, in time order.
inline ClusteredFitness curiosity_fitness(const SensoriMotorStream& stream, double epsilon) {
  if (stream.empty()) throw std::invalid_argument("curiosity_fitness: empty stream");
  ClusteredFitness out;
  epsilon_means(out.clusters, stream, epsilon);
  out.fitness = entropy(out.clusters);
  return out;
}

/// Curiosity variant where the states come from k-means instead.
inline ClusteredFitness curiosity_fitness_kmeans(const SensoriMotorStream& stream, std::size_t k, Rng& rng) {
  if (stream.empty()) throw std::invalid_argument("curiosity_fitness: empty stream");
  ClusteredFitness out;
  out.clusters = kmeans(stream, std::min(k, stream.size()), rng);
  out.fitness = entropy(out.clusters);
  return out;
}

/// The inherited cluster set carried along a lineage. Counts only grow.
struct DiscoveryArchive {
  ClusterSet clusters;
};

/// Seeds epsilon-means with the inherited states and counts, folds in the
/// stream and scores the cumulative set. The input archive is untouched;
/// committing the updated one is the caller's decision.
inline std::pair<double, DiscoveryArchive> discovery_fitness(const DiscoveryArchive& archive, const SensoriMotorStream& stream,
                                                             double epsilon) {
  if (stream.empty()) throw std::invalid_argument("discovery_fitness: empty stream");
  DiscoveryArchive updated = archive;
  epsilon_means(updated.clusters, stream, epsilon);
  return {entropy(updated.clusters), std::move(updated)};
}

struct NoveltyArchive {
  std::vector<Vec2> end_points;
};

/// Mean distance from `end_point` to its k nearest archived end points (all
/// of them when fewer than k). An empty archive yields `empty_novelty`.
inline double novelty_fitness(Vec2 end_point, const NoveltyArchive& archive, std::size_t k, double empty_novelty) {
  if (k < 1) throw std::invalid_argument("novelty_fitness: k must be >= 1");
  if (archive.end_points.empty()) return empty_novelty;
  std::vector<double> d;
  d.reserve(archive.end_points.size());
  for (const auto& p : archive.end_points) d.push_back(distance(end_point, p));
  const std::size_t n = std::min(k, d.size());
  std::nth_element(d.begin(), d.begin() + (n - 1), d.end());
  // Sum the n smallest in ascending order so ties in the data do not make the
  // result depend on nth_element's partition.
  std::sort(d.begin(), d.begin() + n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += d[i];
  return sum / static_cast<double>(n);
}

/// Obstacle-avoidance score V (1 - sqrt(dv)) (1 - i), averaged
/// over the episode. Motor columns of the stream are mapped back to [-1, 1].
inline double displacement_fitness(const SensoriMotorStream& stream) {
  if (stream.empty()) throw std::invalid_argument("displacement_fitness: empty stream");
  double sum = 0.0;
  for (const auto& x : stream) {
    const double left = 2.0 * x[kSensorCount] - 1.0;
    const double right = 2.0 * x[kSensorCount + 1] - 1.0;
    const double speed = std::abs(left + right) / 2.0;
    const double diff = std::min(1.0, std::abs(left - right) / 2.0);
    const double proximity = *std::max_element(x.begin(), x.begin() + kSensorCount);
    sum += speed * (1.0 - std::sqrt(diff)) * (1.0 - proximity);
  }
  return sum / static_cast<double>(stream.size());
}

}  // namespace entropic

#endif  // ENTROPIC_FITNESS_HPP
