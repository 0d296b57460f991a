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

#ifndef ENTROPIC_EVOLUTION_HPP
#define ENTROPIC_EVOLUTION_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "entropic/arena.hpp"
#include "entropic/clustering.hpp"
#include "entropic/controller.hpp"
#include "entropic/fitness.hpp"
#include "entropic/robot_sim.hpp"

namespace entropic {

enum class StepSizeRule {
  PerEvaluation,  // sigma *= a on success, a^(-1/4) on failure
  Window,         // compare the success rate of each window to 1/5
};

struct EsParams {
  double initial_sigma = kInitialSigma;
  double success_factor = 1.5;
  double sigma_min = 1e-6;
  double sigma_max = 10.0;
  int restart_after = 30;
  StepSizeRule rule = StepSizeRule::PerEvaluation;
  int window = 10;
  double window_factor = 0.85;
};

template <class Individual>
struct EsState {
  Individual champion{};
  double champion_fitness = 0.0;
  double sigma = kInitialSigma;
  std::size_t evals_done = 0;
  std::size_t evals_since_improvement = 0;
  std::vector<bool> success_window;
};

/// 1/5th success rule. With the per-evaluation rule one success and four
/// failures leave sigma unchanged, so the step-size is stationary exactly at a
/// 20% success rate.
template <class Individual>
void one_fifth_update(EsState<Individual>& state, bool accepted, const EsParams& params = {}) {
  if (params.rule == StepSizeRule::PerEvaluation) {
    state.sigma *= accepted ? params.success_factor : std::pow(params.success_factor, -0.25);
  } else {
    state.success_window.push_back(accepted);
    if (static_cast<int>(state.success_window.size()) >= params.window) {
      const auto successes = std::count(state.success_window.begin(), state.success_window.end(), true);
      const double rate = static_cast<double>(successes) / static_cast<double>(state.success_window.size());
      if (rate > 0.2) state.sigma /= params.window_factor;
      if (rate < 0.2) state.sigma *= params.window_factor;
      state.success_window.clear();
    }
  }
  state.sigma = std::clamp(state.sigma, params.sigma_min, params.sigma_max);
}

struct EsEvent {
  std::size_t eval_index = 0;  // 1-based
  double fitness = 0.0;
  bool accepted = false;  // became (or stayed) the champion
  bool improved = false;  // strictly beat the champion
  bool restart = false;   // fresh random individual drawn by a restart
  double sigma = 0.0;     // step-size after this evaluation
};

// clang-format off
template <class P>
concept EsProblem = requires(P p, const typename P::individual_type& ind, Rng& rng, double sigma, const EsEvent& ev) {
  { p.sample(rng) } -> std::same_as<typename P::individual_type>;
  { p.mutate(ind, sigma, rng) } -> std::same_as<typename P::individual_type>;
  { p.evaluate(ind) } -> std::convertible_to<double>;
  p.on_evaluated(ev, ind);
  p.on_restart();
};
// clang-format on

/// (1+1)-ES with restarts. Every evaluation, including the initial draw and
/// the draw after each restart, consumes one unit of `budget`. Offspring
/// replace the champion when at least as fit; only a strict improvement resets
/// the restart counter.
template <EsProblem Problem>
EsState<typename Problem::individual_type> run_one_plus_one(Problem& problem, std::size_t budget, const EsParams& params,
                                                            Rng& rng) {
  if (budget < 1) throw std::invalid_argument("ES budget must be >= 1");
  EsState<typename Problem::individual_type> state;

  auto fresh_start = [&](bool restart) {
    if (restart) problem.on_restart();
    state.champion = problem.sample(rng);
    state.sigma = params.initial_sigma;
    state.evals_since_improvement = 0;
    state.success_window.clear();
    state.champion_fitness = problem.evaluate(state.champion);
    ++state.evals_done;
    const EsEvent ev{state.evals_done, state.champion_fitness, true, false, restart, state.sigma};
    problem.on_evaluated(ev, state.champion);
  };

  fresh_start(false);
  while (state.evals_done < budget) {
    if (static_cast<int>(state.evals_since_improvement) >= params.restart_after) {
      fresh_start(true);
      continue;
    }
    auto child = problem.mutate(state.champion, state.sigma, rng);
    const double f = problem.evaluate(child);
    ++state.evals_done;
    const bool accepted = f >= state.champion_fitness;
    const bool improved = f > state.champion_fitness;
    one_fifth_update(state, accepted, params);
    state.evals_since_improvement = improved ? 0 : state.evals_since_improvement + 1;
    const EsEvent ev{state.evals_done, f, accepted, improved, false, state.sigma};
    problem.on_evaluated(ev, child);
    if (accepted) {
      state.champion = std::move(child);
      state.champion_fitness = f;
    }
  }
  return state;
}

/// Cells visited by one episode as (linear cell index, count), ascending.
using SparseVisits = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

inline SparseVisits sparse_visits(const PatrolGrid& grid) {
  SparseVisits out;
  const auto& counts = grid.counts();
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] > 0) out.emplace_back(static_cast<std::uint32_t>(i), counts[i]);
  return out;
}

inline void add_visits(PatrolGrid& grid, const SparseVisits& visits) {
  for (const auto& [cell, n] : visits) grid.add(cell, n);
}

struct RunRecord {
  std::size_t eval_index = 0;
  double fitness = 0.0;
  bool accepted = false;
  bool restart = false;
  double sigma = 0.0;
  Vec2 end_point;
  double max_distance = 0.0;
  Genotype genotype;
  SparseVisits visits;
};

struct RunLog {
  FitnessType fitness = FitnessType::Curiosity;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<RunRecord> records;
  ClusterSet clusters;  // discovery archive, or the final champion's states
  std::size_t episodes = 0;

  std::size_t restarts() const {
    return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const RunRecord& r) { return r.restart; }));
  }
};

struct EvolutionConfig {
  EpisodeConfig episode;
  EsParams es;
  InitSpread init_spread = InitSpread::Variance;
};

/// Robot controller evolution: one episode per evaluation, scored with the
/// configured fitness. Keeps the Discovery and Novelty archives of the lineage.
class RobotProblem {
 public:
  using individual_type = Genotype;

  RobotProblem(const Arena& arena, const FitnessKind& kind, const EvolutionConfig& cfg, std::uint64_t seed)
      : arena_(arena), kind_(kind), cfg_(cfg), kmeans_rng_(seed ^ 0x9e3779b97f4a7c15ULL) {
    kind_.validate();
    cfg_.episode.validate();
    log_.fitness = kind.type;
    log_.seed = seed;
  }

  Genotype sample(Rng& rng) const {
    Genotype g = random_genotype(rng, cfg_.init_spread);
    g.sigma = cfg_.es.initial_sigma;
    return g;
  }

  Genotype mutate(const Genotype& parent, double sigma, Rng& rng) const {
    Genotype p = parent;
    p.sigma = sigma;
    return entropic::mutate(p, rng);
  }

  double evaluate(const Genotype& g) {
    episode_ = run_episode(arena_, g, cfg_.episode);
    ++log_.episodes;
    double f = 0.0;
    switch (kind_.type) {
      case FitnessType::Curiosity:
        if (kind_.clustering == StateClustering::KMeans) {
          f = curiosity_fitness_kmeans(episode_.stream, kind_.kmeans_k, kmeans_rng_).fitness;
        } else {
          f = curiosity_fitness(episode_.stream, kind_.epsilon).fitness;
        }
        break;
      case FitnessType::Discovery: {
        auto [fd, updated] = discovery_fitness(discovery_, episode_.stream, kind_.epsilon);
        f = fd;
        pending_discovery_ = std::move(updated);
        break;
      }
      case FitnessType::Novelty:
        f = novelty_fitness(episode_.end_point, novelty_, kind_.novelty_k, arena_.diagonal());
        break;
      case FitnessType::Displacement:
        f = displacement_fitness(episode_.stream);
        break;
    }
    return f;
  }

  void on_evaluated(const EsEvent& ev, const Genotype& g) {
    if (kind_.type == FitnessType::Discovery && (ev.accepted || kind_.discovery_commit == ArchiveCommit::All))
      discovery_ = std::move(pending_discovery_);
    if (kind_.type == FitnessType::Novelty) novelty_.end_points.push_back(episode_.end_point);
    if (ev.accepted) champion_stream_ = episode_.stream;

    RunRecord rec;
    rec.eval_index = ev.eval_index;
    rec.fitness = ev.fitness;
    rec.accepted = ev.accepted;
    rec.restart = ev.restart;
    rec.sigma = ev.sigma;
    rec.end_point = episode_.end_point;
    rec.max_distance = episode_.max_distance_from_start;
    rec.genotype = g;
    rec.visits = sparse_visits(episode_.patrol);
    log_.records.push_back(std::move(rec));
  }

  void on_restart() {
    if (!kind_.reset_archive_on_restart) return;
    discovery_ = {};
    novelty_ = {};
  }

  const DiscoveryArchive& discovery_archive() const noexcept { return discovery_; }
  const NoveltyArchive& novelty_archive() const noexcept { return novelty_; }

  RunLog finish() && {
    if (kind_.type == FitnessType::Discovery) {
      log_.clusters = discovery_.clusters;
    } else if (!champion_stream_.empty()) {
      log_.clusters = curiosity_fitness(champion_stream_, kind_.epsilon).clusters;
    }
    return std::move(log_);
  }

 private:
  const Arena& arena_;
  FitnessKind kind_;
  EvolutionConfig cfg_;
  Rng kmeans_rng_;
  EpisodeResult episode_;
  DiscoveryArchive discovery_;
  DiscoveryArchive pending_discovery_;
  NoveltyArchive novelty_;
  SensoriMotorStream champion_stream_;
  RunLog log_;
};

/// One evolutionary run of `budget` evaluations on `arena`, seeded by `seed`.
inline RunLog es_run(const Arena& arena, const FitnessKind& kind, std::size_t budget, const EvolutionConfig& cfg,
                     std::uint64_t seed, std::uint64_t config_hash = 0) {
  RobotProblem problem(arena, kind, cfg, seed);
  Rng rng(seed);
  run_one_plus_one(problem, budget, cfg.es, rng);
  RunLog log = std::move(problem).finish();
  log.config_hash = config_hash;
  return log;
}

struct RecordRef {
  std::size_t run = 0;
  std::size_t index = 0;
};

/// The n fittest records pooled over `logs`; ties go to the earlier
/// evaluation, then the earlier run.
inline std::vector<RecordRef> select_best(std::span<const RunLog> logs, std::size_t n) {
  std::vector<RecordRef> all;
  for (std::size_t r = 0; r < logs.size(); ++r)
    for (std::size_t i = 0; i < logs[r].records.size(); ++i) all.push_back({r, i});
  if (n > all.size()) throw std::invalid_argument("select_best: n exceeds the number of records");
  auto better = [&](const RecordRef& a, const RecordRef& b) {
    const auto& ra = logs[a.run].records[a.index];
    const auto& rb = logs[b.run].records[b.index];
    if (ra.fitness != rb.fitness) return ra.fitness > rb.fitness;
    if (ra.eval_index != rb.eval_index) return ra.eval_index < rb.eval_index;
    return a.run < b.run;
  };
  std::stable_sort(all.begin(), all.end(), better);
  all.resize(n);
  return all;
}

inline std::vector<RunRecord> select_best(const RunLog& log, std::size_t n) {
  std::vector<RunRecord> out;
  for (const auto& ref : select_best(std::span<const RunLog>(&log, 1), n)) out.push_back(log.records[ref.index]);
  return out;
}

/// `eval,fitness,accepted,sigma,end_x,end_y,restart` with a leading
/// `# seed=... config_hash=... fitness=...` comment line.
inline void write_runlog_csv(std::ostream& out, const RunLog& log) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(log.config_hash));
  out << "# seed=" << log.seed << " config_hash=" << hash << " fitness=" << to_string(log.fitness) << '\n';
  out << "eval,fitness,accepted,sigma,end_x,end_y,restart\n";
  for (const auto& r : log.records) {
    out << r.eval_index << ',' << format_double(r.fitness) << ',' << (r.accepted ? 1 : 0) << ',' << format_double(r.sigma) << ','
        << format_double(r.end_point.x) << ',' << format_double(r.end_point.y) << ',' << (r.restart ? 1 : 0) << '\n';
  }
}

/// Sidecar with one `eval,<genotype line>` row per accepted champion.
inline void write_champions_csv(std::ostream& out, const RunLog& log) {
  for (const auto& r : log.records)
    if (r.accepted) out << r.eval_index << ',' << to_csv_line(r.genotype) << '\n';
}

/// `eval,visits` where visits is `cell:count;cell:count...` over linear cell indices.
inline void write_visits_csv(std::ostream& out, const RunLog& log) {
  out << "eval,visits\n";
  for (const auto& r : log.records) {
    out << r.eval_index << ',';
    for (std::size_t i = 0; i < r.visits.size(); ++i) out << (i ? ";" : "") << r.visits[i].first << ':' << r.visits[i].second;
    out << '\n';
  }
}

inline void write_distance_csv(std::ostream& out, const RunLog& log) {
  out << "eval,max_distance\n";
  for (const auto& r : log.records) out << r.eval_index << ',' << format_double(r.max_distance) << '\n';
}

}  // namespace entropic

#endif  // ENTROPIC_EVOLUTION_HPP
