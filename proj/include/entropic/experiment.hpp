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

#ifndef ENTROPIC_EXPERIMENT_HPP
#define ENTROPIC_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "entropic/arena.hpp"
#include "entropic/evolution.hpp"
#include "entropic/fitness.hpp"

namespace entropic {

namespace fs = std::filesystem;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SelectionMode { Best, All };

struct ExperimentConfig {
  std::string arena_path;
  FitnessKind fitness = FitnessKind::of(FitnessType::Curiosity);
  std::size_t runs = 11;
  std::size_t budget = 2000;
  int steps = 2000;
  std::vector<std::uint64_t> seeds;
  std::string output_dir;
  std::vector<SelectionMode> selections{SelectionMode::Best, SelectionMode::All};
  std::size_t best_n = 100;
  bool best_pooled = true;  // pool the best individuals over all runs
  std::vector<int> ells{2, 5, 10};
  std::size_t threads = 0;  // 0: one per hardware thread
  EsParams es;
  InitSpread init_spread = InitSpread::Variance;
  double sensor_noise = 0.0;
  double motor_noise = 0.0;

  std::string selection_name(SelectionMode mode) const {
    return mode == SelectionMode::All ? "all" : "best_" + std::to_string(best_n);
  }

  EvolutionConfig evolution_config(const Arena& arena) const {
    EvolutionConfig cfg;
    cfg.episode = EpisodeConfig::for_arena(arena, steps);
    cfg.episode.sensor_noise = sensor_noise;
    cfg.episode.motor_noise = motor_noise;
    cfg.es = es;
    cfg.init_spread = init_spread;
    return cfg;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = s.find(sep, pos);
    out.push_back(trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

template <class T>
T config_number(const std::string& key, const std::string& value, std::size_t line) {
  T out{};
  if (!parse_number(value, out)) throw ConfigError("line " + std::to_string(line) + ": bad value for '" + key + "': " + value);
  return out;
}

inline bool config_bool(const std::string& key, const std::string& value, std::size_t line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("line " + std::to_string(line) + ": bad boolean for '" + key + "': " + value);
}

/// "1,2,3" or "1-11" or a mix of both.
inline std::vector<std::uint64_t> parse_seed_list(const std::string& value, std::size_t line) {
  std::vector<std::uint64_t> seeds;
  for (const auto& item : split(value, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(config_number<std::uint64_t>("seeds", item, line));
    } else {
      const auto lo = config_number<std::uint64_t>("seeds", trim(item.substr(0, dash)), line);
      const auto hi = config_number<std::uint64_t>("seeds", trim(item.substr(dash + 1)), line);
      if (hi < lo) throw ConfigError("line " + std::to_string(line) + ": empty seed range " + item);
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
  }
  return seeds;
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Reads the line-based `key = value` format ('#' starts a comment). Relative
/// paths are resolved against `base_dir`.
inline ExperimentConfig parse_config(std::string_view text, const fs::path& base_dir = {}) {
  ExperimentConfig cfg;
  bool epsilon_set = false;
  bool runs_set = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = detail::trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
    using detail::config_bool;
    using detail::config_number;

    if (key == "arena") {
      cfg.arena_path = (base_dir / value).lexically_normal().string();
    } else if (key == "output") {
      cfg.output_dir = (base_dir / value).lexically_normal().string();
    } else if (key == "fitness") {
      try {
        cfg.fitness.type = parse_fitness_type(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
      }
    } else if (key == "epsilon") {
      cfg.fitness.epsilon = config_number<double>(key, value, line_no);
      epsilon_set = true;
    } else if (key == "novelty_k") {
      cfg.fitness.novelty_k = config_number<std::size_t>(key, value, line_no);
    } else if (key == "clustering") {
      if (value == "epsilon_means") cfg.fitness.clustering = StateClustering::EpsilonMeans;
      else if (value == "kmeans") cfg.fitness.clustering = StateClustering::KMeans;
      else throw ConfigError("line " + std::to_string(line_no) + ": clustering must be epsilon_means or kmeans");
    } else if (key == "kmeans_k") {
      cfg.fitness.kmeans_k = config_number<std::size_t>(key, value, line_no);
    } else if (key == "discovery_commit") {
      if (value == "all") cfg.fitness.discovery_commit = ArchiveCommit::All;
      else if (value == "accepted") cfg.fitness.discovery_commit = ArchiveCommit::AcceptedOnly;
      else throw ConfigError("line " + std::to_string(line_no) + ": discovery_commit must be all or accepted");
    } else if (key == "reset_archive_on_restart") {
      cfg.fitness.reset_archive_on_restart = config_bool(key, value, line_no);
    } else if (key == "runs") {
      cfg.runs = config_number<std::size_t>(key, value, line_no);
      runs_set = true;
    } else if (key == "budget") {
      cfg.budget = config_number<std::size_t>(key, value, line_no);
    } else if (key == "steps") {
      cfg.steps = config_number<int>(key, value, line_no);
    } else if (key == "seeds") {
      cfg.seeds = detail::parse_seed_list(value, line_no);
    } else if (key == "selection") {
      cfg.selections.clear();
      for (const auto& s : detail::split(value, ',')) {
        if (s == "all") cfg.selections.push_back(SelectionMode::All);
        else if (s == "best") cfg.selections.push_back(SelectionMode::Best);
        else throw ConfigError("line " + std::to_string(line_no) + ": selection entries must be best or all");
      }
    } else if (key == "best_n") {
      cfg.best_n = config_number<std::size_t>(key, value, line_no);
    } else if (key == "best_pooled") {
      cfg.best_pooled = config_bool(key, value, line_no);
    } else if (key == "ells") {
      cfg.ells.clear();
      for (const auto& s : detail::split(value, ',')) cfg.ells.push_back(config_number<int>(key, s, line_no));
    } else if (key == "threads") {
      cfg.threads = config_number<std::size_t>(key, value, line_no);
    } else if (key == "init_spread") {
      if (value == "variance") cfg.init_spread = InitSpread::Variance;
      else if (value == "stddev") cfg.init_spread = InitSpread::StdDev;
      else throw ConfigError("line " + std::to_string(line_no) + ": init_spread must be variance or stddev");
    } else if (key == "step_rule") {
      if (value == "per_eval") cfg.es.rule = StepSizeRule::PerEvaluation;
      else if (value == "window") cfg.es.rule = StepSizeRule::Window;
      else throw ConfigError("line " + std::to_string(line_no) + ": step_rule must be per_eval or window");
    } else if (key == "restart_after") {
      cfg.es.restart_after = config_number<int>(key, value, line_no);
    } else if (key == "sensor_noise") {
      cfg.sensor_noise = config_number<double>(key, value, line_no);
    } else if (key == "motor_noise") {
      cfg.motor_noise = config_number<double>(key, value, line_no);
    } else {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }
  if (!epsilon_set) cfg.fitness.epsilon = default_epsilon(cfg.fitness.type);
  if (!runs_set && !cfg.seeds.empty()) cfg.runs = cfg.seeds.size();
  return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), fs::absolute(path).parent_path());
}

/// Canonical `key = value` text of everything that influences results.
inline std::string canonical_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "arena = " << cfg.arena_path << '\n';
  out << "fitness = " << to_string(cfg.fitness.type) << '\n';
  out << "epsilon = " << format_double(cfg.fitness.epsilon) << '\n';
  out << "novelty_k = " << cfg.fitness.novelty_k << '\n';
  out << "clustering = " << (cfg.fitness.clustering == StateClustering::KMeans ? "kmeans" : "epsilon_means") << '\n';
  out << "kmeans_k = " << cfg.fitness.kmeans_k << '\n';
  out << "discovery_commit = " << (cfg.fitness.discovery_commit == ArchiveCommit::All ? "all" : "accepted") << '\n';
  out << "reset_archive_on_restart = " << (cfg.fitness.reset_archive_on_restart ? "true" : "false") << '\n';
  out << "runs = " << cfg.runs << '\n';
  out << "budget = " << cfg.budget << '\n';
  out << "steps = " << cfg.steps << '\n';
  out << "seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) out << (i ? "," : "") << cfg.seeds[i];
  out << '\n';
  out << "selection = ";
  for (std::size_t i = 0; i < cfg.selections.size(); ++i) out << (i ? "," : "") << (cfg.selections[i] == SelectionMode::All ? "all" : "best");
  out << '\n';
  out << "best_n = " << cfg.best_n << '\n';
  out << "best_pooled = " << (cfg.best_pooled ? "true" : "false") << '\n';
  out << "ells = ";
  for (std::size_t i = 0; i < cfg.ells.size(); ++i) out << (i ? "," : "") << cfg.ells[i];
  out << '\n';
  out << "init_spread = " << (cfg.init_spread == InitSpread::Variance ? "variance" : "stddev") << '\n';
  out << "step_rule = " << (cfg.es.rule == StepSizeRule::PerEvaluation ? "per_eval" : "window") << '\n';
  out << "restart_after = " << cfg.es.restart_after << '\n';
  out << "sensor_noise = " << format_double(cfg.sensor_noise) << '\n';
  out << "motor_noise = " << format_double(cfg.motor_noise) << '\n';
  return out.str();
}

inline std::uint64_t config_hash(const ExperimentConfig& cfg) { return detail::fnv1a(canonical_config(cfg)); }

/// Checks everything that can be checked before simulating.
inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.arena_path.empty()) throw ConfigError("config: 'arena' is required");
  if (!fs::is_regular_file(cfg.arena_path)) throw ConfigError("config: arena file not found: " + cfg.arena_path);
  if (cfg.output_dir.empty()) throw ConfigError("config: 'output' is required");
  if (fs::exists(cfg.output_dir) && !fs::is_directory(cfg.output_dir))
    throw ConfigError("config: output path exists and is not a directory: " + cfg.output_dir);
  if (cfg.runs < 1) throw ConfigError("config: runs must be >= 1");
  if (cfg.seeds.size() != cfg.runs)
    throw ConfigError("config: " + std::to_string(cfg.seeds.size()) + " seeds given for " + std::to_string(cfg.runs) + " runs");
  if (std::set<std::uint64_t>(cfg.seeds.begin(), cfg.seeds.end()).size() != cfg.seeds.size())
    throw ConfigError("config: seeds must be distinct");
  if (cfg.budget < 1) throw ConfigError("config: budget must be >= 1");
  if (cfg.steps < 1) throw ConfigError("config: steps must be >= 1");
  if (cfg.best_n < 1) throw ConfigError("config: best_n must be >= 1");
  if (cfg.selections.empty()) throw ConfigError("config: at least one selection is required");
  if (cfg.ells.empty()) throw ConfigError("config: at least one ell is required");
  for (int ell : cfg.ells)
    if (ell < 1) throw ConfigError("config: ells must be >= 1");
  try {
    cfg.fitness.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

/// 100 * (free cells visited at least `ell` times) / (free cells).
inline double patrol_percentage(const PatrolGrid& grid, const Arena& arena, int ell) {
  if (ell < 1) throw std::invalid_argument("patrol_percentage: ell must be >= 1");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < arena.cell_count(); ++i)
    if (arena.cell(i) == Cell::Free && grid.count(i) >= static_cast<std::uint32_t>(ell)) ++hit;
  return 100.0 * static_cast<double>(hit) / static_cast<double>(arena.free_cell_count());
}

inline constexpr int kPgmWall = 0;
inline constexpr int kPgmUnder = 128;
inline constexpr int kPgmVisited = 255;

/// Plain (P2) PGM, one pixel per cell: walls black, cells visited at least
/// `ell` times white, everything else mid-gray.
inline std::string heatmap_pgm(const PatrolGrid& grid, const Arena& arena, int ell) {
  std::ostringstream out;
  out << "P2\n" << arena.width() << ' ' << arena.height() << "\n255\n";
  for (int r = 0; r < arena.height(); ++r) {
    for (int c = 0; c < arena.width(); ++c) {
      int v = kPgmUnder;
      if (arena.cell(c, r) == Cell::Wall) v = kPgmWall;
      else if (grid.count(c, r) >= static_cast<std::uint32_t>(ell)) v = kPgmVisited;
      out << (c ? " " : "") << v;
    }
    out << '\n';
  }
  return out.str();
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and sample standard deviation (n - 1); zero deviation for one value.
inline MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

struct SelectionMetrics {
  SelectionMode mode = SelectionMode::All;
  std::string name;
  std::vector<PatrolGrid> run_grids;      // selected visits summed per run
  PatrolGrid merged;                      // summed over all runs
  std::map<int, std::vector<double>> per_run;  // ell -> p(ell) for each run
  std::map<int, MeanStd> summary;              // ell -> across-run mean/std
};

struct PatrolReport {
  std::vector<SelectionMetrics> selections;
  std::vector<std::string> violations;  // broken monotonicity properties, if any

  const SelectionMetrics* find(SelectionMode mode) const {
    for (const auto& s : selections)
      if (s.mode == mode) return &s;
    return nullptr;
  }
};

/// Builds per-run visit grids for every selection mode, their p(ell)
/// statistics, and checks p(ell) is non-increasing in ell and that the
/// all-individuals grid dominates every other selection.
inline PatrolReport aggregate_patrol(const Arena& arena, std::span<const RunLog> logs, const ExperimentConfig& cfg) {
  PatrolReport report;
  std::vector<int> ells = cfg.ells;
  std::sort(ells.begin(), ells.end());
  ells.erase(std::unique(ells.begin(), ells.end()), ells.end());

  for (SelectionMode mode : cfg.selections) {
    SelectionMetrics sel;
    sel.mode = mode;
    sel.name = cfg.selection_name(mode);
    sel.run_grids.assign(logs.size(), PatrolGrid(arena));
    if (mode == SelectionMode::All) {
      for (std::size_t r = 0; r < logs.size(); ++r)
        for (const auto& rec : logs[r].records) add_visits(sel.run_grids[r], rec.visits);
    } else if (cfg.best_pooled) {
      std::size_t total = 0;
      for (const auto& log : logs) total += log.records.size();
      for (const auto& ref : select_best(logs, std::min(cfg.best_n, total)))
        add_visits(sel.run_grids[ref.run], logs[ref.run].records[ref.index].visits);
    } else {
      for (std::size_t r = 0; r < logs.size(); ++r)
        for (const auto& ref : select_best(logs.subspan(r, 1), std::min(cfg.best_n, logs[r].records.size())))
          add_visits(sel.run_grids[r], logs[r].records[ref.index].visits);
    }
    sel.merged = PatrolGrid(arena);
    for (const auto& g : sel.run_grids) sel.merged.merge(g);
    for (int ell : ells) {
      auto& values = sel.per_run[ell];
      for (const auto& g : sel.run_grids) values.push_back(patrol_percentage(g, arena, ell));
      sel.summary[ell] = mean_std(values);
    }
    report.selections.push_back(std::move(sel));
  }

  for (const auto& sel : report.selections) {
    for (std::size_t i = 1; i < ells.size(); ++i) {
      for (std::size_t r = 0; r < logs.size(); ++r)
        if (sel.per_run.at(ells[i])[r] > sel.per_run.at(ells[i - 1])[r])
          report.violations.push_back(sel.name + ": run " + std::to_string(r) + " p(" + std::to_string(ells[i]) + ") > p(" +
                                      std::to_string(ells[i - 1]) + ")");
      if (sel.summary.at(ells[i]).mean > sel.summary.at(ells[i - 1]).mean)
        report.violations.push_back(sel.name + ": mean p(" + std::to_string(ells[i]) + ") > mean p(" + std::to_string(ells[i - 1]) + ")");
    }
  }
  if (const auto* all = report.find(SelectionMode::All)) {
    for (const auto& sel : report.selections) {
      if (sel.mode == SelectionMode::All) continue;
      for (int ell : ells) {
        for (std::size_t r = 0; r < logs.size(); ++r)
          if (sel.per_run.at(ell)[r] > all->per_run.at(ell)[r])
            report.violations.push_back(sel.name + " exceeds all at p(" + std::to_string(ell) + ") in run " + std::to_string(r));
      }
    }
  }
  return report;
}

inline std::string format_fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string arena_label(const std::string& arena_path) { return fs::path(arena_path).stem().string(); }

/// `fitness_kind,arena,selection,ell,mean,std`, two decimals.
inline std::string metrics_csv(const PatrolReport& report, const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "fitness_kind,arena,selection,ell,mean,std\n";
  for (const auto& sel : report.selections)
    for (const auto& [ell, ms] : sel.summary)
      out << to_string(cfg.fitness.type) << ',' << arena_label(cfg.arena_path) << ',' << sel.name << ',' << ell << ','
          << format_fixed2(ms.mean) << ',' << format_fixed2(ms.std) << '\n';
  return out.str();
}

/// Writes `content` next to `path` and renames it into place.
inline void write_file_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

template <class Writer>
void write_with(const fs::path& path, Writer&& writer) {
  std::ostringstream out;
  writer(out);
  write_file_atomic(path, out.str());
}

struct ExperimentResult {
  std::vector<RunLog> logs;
  PatrolReport report;
};

/// Runs `runs` independent ES runs (in parallel, up to `threads`), then
/// aggregates patrol statistics and writes every output file.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const Arena arena = load_arena_file(cfg.arena_path);
  const EvolutionConfig evo = cfg.evolution_config(arena);
  evo.episode.validate();
  const std::uint64_t hash = config_hash(cfg);
  fs::create_directories(cfg.output_dir);

  ExperimentResult result;
  result.logs.resize(cfg.runs);
  std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cfg.runs);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t r = next++; r < cfg.runs; r = next++) {
      try {
        result.logs[r] = es_run(arena, cfg.fitness, cfg.budget, evo, cfg.seeds[r], hash);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.report = aggregate_patrol(arena, result.logs, cfg);

  const fs::path dir = cfg.output_dir;
  for (const auto& log : result.logs) {
    const std::string seed = std::to_string(log.seed);
    write_with(dir / ("runlog_" + seed + ".csv"), [&](std::ostream& o) { write_runlog_csv(o, log); });
    write_with(dir / ("champions_" + seed + ".csv"), [&](std::ostream& o) { write_champions_csv(o, log); });
    write_with(dir / ("clusters_" + seed + ".csv"), [&](std::ostream& o) { write_clusters_csv(o, log.clusters, kSmsDim); });
    write_with(dir / ("visits_" + seed + ".csv"), [&](std::ostream& o) { write_visits_csv(o, log); });
    write_with(dir / ("distance_" + seed + ".csv"), [&](std::ostream& o) { write_distance_csv(o, log); });
  }
  for (const auto& sel : result.report.selections)
    for (int ell : cfg.ells)
      write_file_atomic(dir / ("heatmap_" + sel.name + "_" + std::to_string(ell) + ".pgm"), heatmap_pgm(sel.merged, arena, ell));
  write_file_atomic(dir / "metrics.csv", metrics_csv(result.report, cfg));

  std::ostringstream info;
  char hash_hex[24];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx", static_cast<unsigned long long>(hash));
  info << "# config_hash " << hash_hex << '\n';
  info << "# entropy_log_base e\n";
  info << "# patrol_cell arena_cell " << format_double(arena.cell_size()) << '\n';
  info << "# free_cells " << arena.free_cell_count() << '\n';
  for (const auto& v : result.report.violations) info << "# violation " << v << '\n';
  info << canonical_config(cfg);
  write_file_atomic(dir / "run_info.txt", info.str());
  return result;
}

inline std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Rebuilds the per-evaluation records of a run directory from its run
/// logs and visit dumps (genotypes are not reloaded).
struct LoadedRuns {
  ExperimentConfig cfg;
  std::vector<RunLog> logs;
};

inline LoadedRuns load_run_directory(const fs::path& dir) {
  LoadedRuns out;
  // run_info.txt stores absolute or already-resolved paths.
  out.cfg = parse_config(read_text_file(dir / "run_info.txt"));
  out.cfg.output_dir = dir.string();
  for (auto seed : out.cfg.seeds) {
    RunLog log;
    log.seed = seed;
    log.fitness = out.cfg.fitness.type;
    const auto runlog_path = dir / ("runlog_" + std::to_string(seed) + ".csv");
    std::istringstream runlog(read_text_file(runlog_path));
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    while (std::getline(runlog, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      if (!header) {
        header = true;
        continue;
      }
      const auto v = parse_csv_doubles(line, line_no);
      if (v.size() != 7) throw ParseError(line_no, runlog_path.string() + ": expected 7 columns");
      RunRecord rec;
      rec.eval_index = static_cast<std::size_t>(v[0]);
      rec.fitness = v[1];
      rec.accepted = v[2] != 0;
      rec.sigma = v[3];
      rec.end_point = {v[4], v[5]};
      rec.restart = v[6] != 0;
      log.records.push_back(rec);
    }
    const auto visits_path = dir / ("visits_" + std::to_string(seed) + ".csv");
    std::istringstream visits(read_text_file(visits_path));
    line_no = 0;
    header = false;
    std::size_t idx = 0;
    while (std::getline(visits, line)) {
      ++line_no;
      if (line.empty()) continue;
      if (!header) {
        header = true;
        continue;
      }
      const auto comma = line.find(',');
      if (comma == std::string::npos || idx >= log.records.size()) throw ParseError(line_no, visits_path.string() + ": malformed row");
      SparseVisits sv;
      for (const auto& item : detail::split(std::string_view(line).substr(comma + 1), ';')) {
        if (item.empty()) continue;
        const auto colon = item.find(':');
        std::uint32_t cell = 0, n = 0;
        if (colon == std::string::npos || !detail::parse_number(std::string_view(item).substr(0, colon), cell) ||
            !detail::parse_number(std::string_view(item).substr(colon + 1), n))
          throw ParseError(line_no, visits_path.string() + ": bad visit entry '" + item + "'");
        sv.emplace_back(cell, n);
      }
      log.records[idx++].visits = std::move(sv);
    }
    if (idx != log.records.size()) throw ParseError(0, visits_path.string() + ": row count does not match run log");
    out.logs.push_back(std::move(log));
  }
  return out;
}

}  // namespace entropic

#endif  // ENTROPIC_EXPERIMENT_HPP
