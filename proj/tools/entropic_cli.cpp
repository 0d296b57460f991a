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

// Command-line front end: full experiments, single-controller replays and
// re-aggregation of existing run directories.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "entropic/entropic.hpp"

namespace {

using namespace entropic;

int cmd_run(const std::string& config_path, std::size_t threads) {
  ExperimentConfig cfg = load_config_file(config_path);
  if (threads) cfg.threads = threads;
  const auto result = run_experiment(cfg);
  std::cout << metrics_csv(result.report, cfg);
  for (const auto& v : result.report.violations) std::cerr << "warning: " << v << '\n';
  return 0;
}

// Accepts a bare genotype line, or a champions sidecar (`eval,<genotype>`
// rows) from which `eval` picks a row (default: the last one).
Genotype read_genotype(const std::string& path, long eval) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open genotype file: " + path);
  std::string line;
  std::size_t line_no = 0;
  std::optional<Genotype> chosen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto values = parse_csv_doubles(line, line_no);
    if (values.size() == kWeightCount + 1) {
      if (eval > 0) throw std::runtime_error("--eval needs a champions file, not a bare genotype");
      return genotype_from_values(values, line_no);
    }
    if (values.size() != kWeightCount + 2) throw ParseError(line_no, "expected a genotype row");
    if (eval <= 0 || static_cast<long>(values[0]) == eval)
      chosen = genotype_from_values(std::span<const double>(values).subspan(1), line_no);
    if (eval > 0 && chosen) break;
  }
  if (!chosen) throw std::runtime_error(eval > 0 ? "evaluation " + std::to_string(eval) + " not found in " + path : "no genotype in " + path);
  return *chosen;
}

int cmd_episode(const std::string& arena_path, const std::string& genotype_path, long eval, int steps,
                const std::string& trajectory_path, double epsilon) {
  const Arena arena = load_arena_file(arena_path);
  const Genotype g = read_genotype(genotype_path, eval);
  const auto cfg = EpisodeConfig::for_arena(arena, steps);
  const auto episode = run_episode(arena, g, cfg);
  const auto curiosity = curiosity_fitness(episode.stream, epsilon);

  std::size_t visited = 0;
  for (std::size_t i = 0; i < arena.cell_count(); ++i) visited += episode.patrol.count(i) > 0 ? 1 : 0;
  std::cout << "steps " << steps << '\n'
            << "end_point " << format_double(episode.end_point.x) << ' ' << format_double(episode.end_point.y) << '\n'
            << "max_distance_from_start " << format_double(episode.max_distance_from_start) << '\n'
            << "curiosity " << format_double(curiosity.fitness) << " (epsilon " << epsilon << ", " << curiosity.clusters.size()
            << " states)\n"
            << "displacement " << format_double(displacement_fitness(episode.stream)) << '\n'
            << "cells_visited " << visited << " of " << arena.free_cell_count() << '\n';
  for (int ell : {2, 5, 10})
    std::cout << "p(" << ell << ") " << format_fixed2(patrol_percentage(episode.patrol, arena, ell)) << '\n';

  if (!trajectory_path.empty()) {
    write_with(trajectory_path, [&](std::ostream& o) { write_trajectory_csv(o, episode); });
  }
  return 0;
}

const SelectionMetrics& pick_selection(const PatrolReport& report, const std::string& name) {
  for (const auto& s : report.selections)
    if (s.name == name || (name == "best" && s.mode == SelectionMode::Best)) return s;
  throw std::runtime_error("selection '" + name + "' not present in run directory");
}

int cmd_heatmap(const std::string& runs_dir, int ell, const std::string& selection, const std::string& out_dir) {
  auto loaded = load_run_directory(runs_dir);
  const Arena arena = load_arena_file(loaded.cfg.arena_path);
  loaded.cfg.ells = {ell};
  const auto report = aggregate_patrol(arena, loaded.logs, loaded.cfg);
  const auto& sel = pick_selection(report, selection);
  const std::filesystem::path dir = out_dir.empty() ? runs_dir : out_dir;
  std::filesystem::create_directories(dir);
  const auto path = dir / ("heatmap_" + sel.name + "_" + std::to_string(ell) + ".pgm");
  write_file_atomic(path, heatmap_pgm(sel.merged, arena, ell));
  std::cout << path.string() << '\n';
  return 0;
}

int cmd_metrics(const std::string& runs_dir) {
  const auto loaded = load_run_directory(runs_dir);
  const Arena arena = load_arena_file(loaded.cfg.arena_path);
  const auto report = aggregate_patrol(arena, loaded.logs, loaded.cfg);
  std::cout << metrics_csv(report, loaded.cfg);
  for (const auto& v : report.violations) std::cerr << "warning: " << v << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropy-driven evolutionary robotics experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::size_t threads = 0;
  auto* run = app.add_subcommand("run", "Run a full experiment from a config file");
  run->add_option("--config", config_path, "Experiment config (key = value)")->required()->check(CLI::ExistingFile);
  run->add_option("--threads", threads, "Override the worker count");

  std::string arena_path, genotype_path, trajectory_path;
  long eval = 0;
  int steps = 2000;
  double epsilon = 0.2;
  auto* episode = app.add_subcommand("episode", "Replay one controller and optionally dump its trajectory");
  episode->add_option("--arena", arena_path, "Arena file")->required()->check(CLI::ExistingFile);
  episode->add_option("--genotype", genotype_path, "Genotype line or champions file")->required()->check(CLI::ExistingFile);
  episode->add_option("--eval", eval, "Evaluation index to pick from a champions file");
  episode->add_option("--steps", steps, "Episode length")->check(CLI::PositiveNumber);
  episode->add_option("--trajectory", trajectory_path, "Write t,x,y,heading,s0..s7,m0,m1 CSV here");
  episode->add_option("--epsilon", epsilon, "Radius for the reported curiosity score")->check(CLI::PositiveNumber);

  std::string runs_dir, selection = "all", out_dir;
  int ell = 10;
  auto* heatmap = app.add_subcommand("heatmap", "Render the visit heatmap of a run directory");
  heatmap->add_option("--runs", runs_dir, "Experiment output directory")->required()->check(CLI::ExistingDirectory);
  heatmap->add_option("--ell", ell, "Visit threshold")->required()->check(CLI::PositiveNumber);
  heatmap->add_option("--selection", selection, "all or best");
  heatmap->add_option("--out", out_dir, "Output directory (defaults to --runs)");

  auto* metrics = app.add_subcommand("metrics", "Recompute patrol metrics from a run directory");
  metrics->add_option("--runs", runs_dir, "Experiment output directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config_path, threads);
    if (*episode) return cmd_episode(arena_path, genotype_path, eval, steps, trajectory_path, epsilon);
    if (*heatmap) return cmd_heatmap(runs_dir, ell, selection, out_dir);
    if (*metrics) return cmd_metrics(runs_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
