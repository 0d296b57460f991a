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

#include "entropic/evolution.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace entropic {
namespace {

const std::string kDataDir = ENTROPIC_DATA_DIR;

using Point = std::vector<double>;

Point gaussian_point(Rng& rng, std::size_t dim, double scale) {
  std::normal_distribution<double> g(0.0, 1.0);
  Point x(dim);
  for (double& v : x) v = scale * g(rng);
  return x;
}

double neg_sphere(const Point& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return -s;
}

/// Maximises minus the squared norm in `dim` dimensions.
struct SphereProblem {
  using individual_type = Point;
  std::size_t dim = 10;
  std::vector<EsEvent> events;
  int restarts_seen = 0;
  double best = -1e300;

  Point sample(Rng& rng) const { return gaussian_point(rng, dim, 1.0); }
  Point mutate(const Point& p, double sigma, Rng& rng) const {
    Point child = p;
    std::normal_distribution<double> g(0.0, 1.0);
    for (double& v : child) v += sigma * g(rng);
    return child;
  }
  double evaluate(const Point& x) { return neg_sphere(x); }
  void on_evaluated(const EsEvent& ev, const Point&) {
    events.push_back(ev);
    best = std::max(best, ev.fitness);
  }
  void on_restart() { ++restarts_seen; }
};

struct ConstantProblem {
  using individual_type = int;
  std::vector<EsEvent> events;
  int restarts_seen = 0;
  int sample(Rng&) const { return 0; }
  int mutate(int p, double, Rng&) const { return p; }
  double evaluate(int) { return 1.0; }
  void on_evaluated(const EsEvent& ev, int) { events.push_back(ev); }
  void on_restart() { ++restarts_seen; }
};

// Written from the textual rule set, independent of run_one_plus_one.
std::vector<double> reference_es_fitnesses(std::size_t dim, std::size_t budget, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out;
  Point parent;
  double parent_f = 0, sigma = 0;
  int stale = 0;
  auto init = [&] {
    parent = gaussian_point(rng, dim, 1.0);
    parent_f = neg_sphere(parent);
    sigma = 0.2;
    stale = 0;
    out.push_back(parent_f);
  };
  init();
  while (out.size() < budget) {
    if (stale >= 30) {
      init();
      continue;
    }
    Point child = parent;
    std::normal_distribution<double> g(0.0, 1.0);
    for (double& v : child) v += sigma * g(rng);
    const double f = neg_sphere(child);
    out.push_back(f);
    if (f >= parent_f) {
      sigma *= 1.5;
    } else {
      sigma *= std::pow(1.5, -0.25);
    }
    sigma = std::min(10.0, std::max(1e-6, sigma));
    stale = f > parent_f ? 0 : stale + 1;
    if (f >= parent_f) {
      parent = child;
      parent_f = f;
    }
  }
  return out;
}

TEST(OneFifth, EquilibriumIdentity) {
  for (double s : {0.2, 1e-3, 3.7}) {
    EsState<int> st;
    st.sigma = s;
    one_fifth_update(st, true);
    for (int i = 0; i < 4; ++i) one_fifth_update(st, false);
    EXPECT_NEAR(st.sigma, s, 1e-12);
  }
}

TEST(OneFifth, ThirtyRejects) {
  EsState<int> st;
  st.sigma = 0.2;
  for (int i = 0; i < 30; ++i) one_fifth_update(st, false);
  EXPECT_NEAR(st.sigma, 0.2 * std::pow(1.5, -7.5), 1e-15);
}

TEST(OneFifth, AcceptMultipliesByOnePointFive) {
  EsState<int> st;
  st.sigma = 0.2;
  one_fifth_update(st, true);
  EXPECT_NEAR(st.sigma, 0.3, 1e-15);
}

TEST(OneFifth, Clamped) {
  EsState<int> st;
  st.sigma = 9.0;
  one_fifth_update(st, true);
  EXPECT_EQ(st.sigma, 10.0);
  st.sigma = 1.1e-6;
  one_fifth_update(st, false);
  EXPECT_EQ(st.sigma, 1e-6);
}

TEST(OneFifth, WindowVariant) {
  EsParams p;
  p.rule = StepSizeRule::Window;
  EsState<int> st;
  st.sigma = 1.0;
  for (int i = 0; i < 9; ++i) one_fifth_update(st, false, p);
  EXPECT_EQ(st.sigma, 1.0);
  one_fifth_update(st, false, p);
  EXPECT_DOUBLE_EQ(st.sigma, 0.85);
  for (int i = 0; i < 10; ++i) one_fifth_update(st, i < 2, p);
  EXPECT_DOUBLE_EQ(st.sigma, 0.85);
  for (int i = 0; i < 10; ++i) one_fifth_update(st, i < 5, p);
  EXPECT_DOUBLE_EQ(st.sigma, 1.0);
}

TEST(OnePlusOne, BudgetOneEvaluatesOnlyTheInitialChampion) {
  SphereProblem p;
  Rng rng(1);
  const auto st = run_one_plus_one(p, 1, EsParams{}, rng);
  ASSERT_EQ(p.events.size(), 1u);
  EXPECT_EQ(st.evals_done, 1u);
  EXPECT_TRUE(p.events[0].accepted);
  EXPECT_FALSE(p.events[0].restart);
  EXPECT_THROW(run_one_plus_one(p, 0, EsParams{}, rng), std::invalid_argument);
}

TEST(OnePlusOne, ConstantFitnessRestartsEveryThirtyOne) {
  ConstantProblem p;
  Rng rng(1);
  run_one_plus_one(p, 2000, EsParams{}, rng);
  ASSERT_EQ(p.events.size(), 2000u);
  EXPECT_EQ(p.restarts_seen, 64);
  EXPECT_GE(p.restarts_seen, 2000 / 31);
  for (std::size_t i = 0; i < p.events.size(); ++i) {
    EXPECT_EQ(p.events[i].eval_index, i + 1);
    EXPECT_EQ(p.events[i].restart, i > 0 && i % 31 == 0) << i;
    EXPECT_FALSE(p.events[i].improved);
    EXPECT_TRUE(p.events[i].accepted);
  }
}

TEST(OnePlusOne, SphereImprovesThreeOrdersOfMagnitude) {
  SphereProblem p;
  Rng rng(12);
  run_one_plus_one(p, 2000, EsParams{}, rng);
  const double initial = -p.events.front().fitness;
  EXPECT_LE(-p.best, initial * 1e-3) << "initial " << initial << " best " << -p.best;
}

TEST(OnePlusOne, MatchesScriptedReference) {
  for (std::uint64_t seed : {1, 2, 3}) {
    SphereProblem p;
    Rng rng(seed);
    run_one_plus_one(p, 2000, EsParams{}, rng);
    const auto ref = reference_es_fitnesses(10, 2000, seed);
    ASSERT_EQ(ref.size(), p.events.size());
    for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_EQ(p.events[i].fitness, ref[i]) << "eval " << i + 1;
  }
}

// Elitism between restarts and the restart cadence on a plateau-heavy problem.
TEST(OnePlusOne, ElitismAndRestartBound) {
  SphereProblem p;
  p.dim = 30;
  Rng rng(5);
  run_one_plus_one(p, 3000, EsParams{}, rng);
  double champion = p.events[0].fitness;
  int stale = 0;
  for (std::size_t i = 1; i < p.events.size(); ++i) {
    const auto& ev = p.events[i];
    if (ev.restart) {
      EXPECT_EQ(stale, 30);
      champion = ev.fitness;
      stale = 0;
      continue;
    }
    EXPECT_EQ(ev.accepted, ev.fitness >= champion);
    if (ev.accepted) champion = ev.fitness;
    stale = ev.improved ? 0 : stale + 1;
    EXPECT_LE(stale, 30);
  }
}

EvolutionConfig small_config(const Arena& a, int steps) {
  EvolutionConfig cfg;
  cfg.episode = EpisodeConfig::for_arena(a, steps);
  return cfg;
}

TEST(EsRun, BudgetExactAndDenseIndices) {
  const Arena a = load_arena_file(kDataDir + "/arenas/medium.arena");
  for (auto type : {FitnessType::Curiosity, FitnessType::Discovery, FitnessType::Novelty, FitnessType::Displacement}) {
    const RunLog log = es_run(a, FitnessKind::of(type), 60, small_config(a, 100), 3);
    ASSERT_EQ(log.records.size(), 60u);
    EXPECT_EQ(log.episodes, 60u);
    for (std::size_t i = 0; i < 60; ++i) EXPECT_EQ(log.records[i].eval_index, i + 1);
    for (const auto& r : log.records) {
      std::uint64_t total = 0;
      for (const auto& [cell, n] : r.visits) total += n;
      EXPECT_EQ(total, 100u);
    }
  }
}

TEST(EsRun, SameSeedSameLog) {
  const Arena a = load_arena_file(kDataDir + "/arenas/medium.arena");
  for (auto type : {FitnessType::Curiosity, FitnessType::Discovery, FitnessType::Novelty}) {
    const auto cfg = small_config(a, 150);
    std::ostringstream s1, s2, c1, c2;
    write_runlog_csv(s1, es_run(a, FitnessKind::of(type), 80, cfg, 9));
    write_runlog_csv(s2, es_run(a, FitnessKind::of(type), 80, cfg, 9));
    EXPECT_EQ(s1.str(), s2.str());
    write_champions_csv(c1, es_run(a, FitnessKind::of(type), 80, cfg, 9));
    write_champions_csv(c2, es_run(a, FitnessKind::of(type), 80, cfg, 9));
    EXPECT_EQ(c1.str(), c2.str());
    std::ostringstream other;
    write_runlog_csv(other, es_run(a, FitnessKind::of(type), 80, cfg, 10));
    EXPECT_NE(s1.str(), other.str());
  }
}

TEST(EsRun, DiscoveryArchiveAbsorbsEveryStep) {
  const Arena a = load_arena_file(kDataDir + "/arenas/medium.arena");
  const RunLog log = es_run(a, FitnessKind::of(FitnessType::Discovery), 70, small_config(a, 120), 4);
  EXPECT_EQ(log.clusters.total(), 70u * 120u);
}

TEST(EsRun, DiscoveryAcceptedOnlyCommitsLess) {
  const Arena a = load_arena_file(kDataDir + "/arenas/medium.arena");
  auto kind = FitnessKind::of(FitnessType::Discovery);
  kind.discovery_commit = ArchiveCommit::AcceptedOnly;
  const RunLog log = es_run(a, kind, 70, small_config(a, 120), 4);
  const auto accepted = std::count_if(log.records.begin(), log.records.end(), [](const RunRecord& r) { return r.accepted; });
  EXPECT_EQ(log.clusters.total(), static_cast<std::uint64_t>(accepted) * 120u);
}

TEST(EsRun, FirstNoveltyIsTheArenaDiagonal) {
  const Arena a = load_arena_file(kDataDir + "/arenas/medium.arena");
  const RunLog log = es_run(a, FitnessKind::of(FitnessType::Novelty), 5, small_config(a, 50), 2);
  EXPECT_EQ(log.records[0].fitness, a.diagonal());
}

TEST(EsRun, RecordedFitnessReplays) {
  const Arena a = load_arena_file(kDataDir + "/arenas/medium.arena");
  const auto cfg = small_config(a, 200);
  const RunLog log = es_run(a, FitnessKind::of(FitnessType::Curiosity), 40, cfg, 6);
  for (const auto& r : log.records) {
    const auto ep = run_episode(a, r.genotype, cfg.episode);
    EXPECT_EQ(curiosity_fitness(ep.stream, 0.2).fitness, r.fitness);
    EXPECT_EQ(sparse_visits(ep.patrol), r.visits);
    EXPECT_EQ(ep.end_point, r.end_point);
  }
}

RunLog synthetic_log(const std::vector<double>& fitness) {
  RunLog log;
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    RunRecord r;
    r.eval_index = i + 1;
    r.fitness = fitness[i];
    log.records.push_back(r);
  }
  return log;
}

TEST(SelectBest, TopHundredOfTwoThousand) {
  std::vector<double> f(2000);
  for (int i = 0; i < 2000; ++i) f[i] = i + 1;
  std::shuffle(f.begin(), f.end(), Rng(3));
  const auto best = select_best(synthetic_log(f), 100);
  ASSERT_EQ(best.size(), 100u);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(best[i].fitness, 2000 - i);
}

TEST(SelectBest, WholeLogSortedWithEarlierTiesFirst) {
  const auto best = select_best(synthetic_log({1, 3, 2, 3, 1}), 5);
  const std::vector<std::size_t> order{2, 4, 3, 1, 5};
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(best[i].eval_index, order[i]);
  EXPECT_THROW(select_best(synthetic_log({1, 2}), 3), std::invalid_argument);
}

TEST(SelectBest, PooledMatchesSortOracle) {
  Rng rng(17);
  std::uniform_int_distribution<int> u(0, 300);
  std::vector<RunLog> logs;
  struct Flat {
    double f;
    std::size_t eval, run;
  };
  std::vector<Flat> flat;
  for (std::size_t run = 0; run < 11; ++run) {
    std::vector<double> f(200);
    for (double& v : f) v = u(rng) / 10.0;
    logs.push_back(synthetic_log(f));
    for (std::size_t i = 0; i < f.size(); ++i) flat.push_back({f[i], i + 1, run});
  }
  std::sort(flat.begin(), flat.end(), [](const Flat& a, const Flat& b) {
    if (a.f != b.f) return a.f > b.f;
    if (a.eval != b.eval) return a.eval < b.eval;
    return a.run < b.run;
  });
  const auto best = select_best(std::span<const RunLog>(logs), 100);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(best[i].run, flat[i].run);
    EXPECT_EQ(best[i].index + 1, flat[i].eval);
  }
}

TEST(RunLogCsv, HeaderAndRows) {
  RunLog log = synthetic_log({0.5});
  log.seed = 7;
  log.config_hash = 0xabc;
  log.records[0].accepted = true;
  log.records[0].sigma = 0.2;
  log.records[0].end_point = {1.5, 2.25};
  std::ostringstream out;
  write_runlog_csv(out, log);
  EXPECT_EQ(out.str(),
            "# seed=7 config_hash=0000000000000abc fitness=curiosity\n"
            "eval,fitness,accepted,sigma,end_x,end_y,restart\n"
            "1,0.5,1,0.20000000000000001,1.5,2.25,0\n");
}

}  // namespace
}  // namespace entropic
