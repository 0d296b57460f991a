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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "entropic/entropic.hpp"

namespace entropic {
namespace {

const std::string kCli = ENTROPIC_CLI;
const std::string kDataDir = ENTROPIC_DATA_DIR;
const fs::path kTmp = ENTROPIC_TEST_TMP;

struct Result {
  int status;
  std::string out;
};

Result run(const std::string& args, const std::string& tag) {
  fs::create_directories(kTmp);
  const fs::path out = kTmp / (tag + ".stdout");
  const int rc = std::system((kCli + " " + args + " > " + out.string() + " 2> " + (kTmp / (tag + ".stderr")).string()).c_str());
  return {WEXITSTATUS(rc), read_text_file(out)};
}

fs::path write_config(const std::string& name, const std::string& body) {
  fs::create_directories(kTmp);
  const fs::path p = kTmp / name;
  std::ofstream(p) << body;
  return p;
}

fs::path small_run(const std::string& name) {
  const fs::path out = kTmp / name;
  fs::remove_all(out);
  const auto cfg = write_config(name + ".cfg", "arena = " + kDataDir + "/arenas/medium.arena\n" + "output = " + out.string() +
                                                   "\nfitness = curiosity\nseeds = 1-2\nbudget = 20\nsteps = 100\nbest_n = 5\n");
  const auto r = run("run --config " + cfg.string(), name);
  EXPECT_EQ(r.status, 0);
  return out;
}

TEST(Cli, RequiresASubcommand) { EXPECT_NE(run("", "none").status, 0); }

TEST(Cli, RunPrintsMetricsAndWritesFiles) {
  const fs::path out = small_run("cli_run");
  EXPECT_TRUE(fs::exists(out / "metrics.csv"));
  EXPECT_TRUE(fs::exists(out / "runlog_1.csv"));
  EXPECT_TRUE(fs::exists(out / "heatmap_all_10.pgm"));
}

TEST(Cli, MetricsReproducesRunOutput) {
  const fs::path out = small_run("cli_metrics");
  const auto r = run("metrics --runs " + out.string(), "metrics");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, read_text_file(out / "metrics.csv"));
}

TEST(Cli, HeatmapRegeneratesIdenticalImage) {
  const fs::path out = small_run("cli_heatmap");
  const std::string original = read_text_file(out / "heatmap_all_5.pgm");
  const fs::path elsewhere = kTmp / "cli_heatmap_out";
  fs::remove_all(elsewhere);
  const auto r = run("heatmap --runs " + out.string() + " --ell 5 --out " + elsewhere.string(), "heatmap");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(read_text_file(elsewhere / "heatmap_all_5.pgm"), original);
  const auto odd = run("heatmap --runs " + out.string() + " --ell 3 --selection best --out " + elsewhere.string(), "heatmap3");
  EXPECT_EQ(odd.status, 0);
  EXPECT_TRUE(fs::exists(elsewhere / "heatmap_best_5_3.pgm"));
}

TEST(Cli, EpisodeReplaysAChampion) {
  const fs::path out = small_run("cli_episode");
  const fs::path traj = kTmp / "traj.csv";
  const auto r = run("episode --arena " + kDataDir + "/arenas/medium.arena --genotype " + (out / "champions_1.csv").string() +
                         " --eval 1 --steps 100 --trajectory " + traj.string(),
                     "episode");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("curiosity"), std::string::npos);
  EXPECT_NE(r.out.find("p(10)"), std::string::npos);
  const std::string csv = read_text_file(traj);
  EXPECT_EQ(csv.rfind("t,x,y,heading,s0,s1,s2,s3,s4,s5,s6,s7,m0,m1\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);

  // The fitness printed by the replay matches the logged one.
  const auto loaded = load_run_directory(out);
  const double logged = loaded.logs[0].records[0].fitness;
  EXPECT_NE(r.out.find("curiosity " + format_double(logged)), std::string::npos) << r.out;
}

TEST(Cli, EpisodeAcceptsABareGenotypeLine) {
  Rng rng(3);
  const fs::path g = write_config("bare.genotype", to_csv_line(random_genotype(rng)) + "\n");
  const auto r = run("episode --arena " + kDataDir + "/arenas/hard.arena --genotype " + g.string() + " --steps 50", "bare");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("steps 50"), std::string::npos);
}

TEST(Cli, ReportsBadInputs) {
  const auto cfg = write_config("bad.cfg", "arena = " + kDataDir + "/arenas/medium.arena\nbudget = many\n");
  EXPECT_NE(run("run --config " + cfg.string(), "badcfg").status, 0);
  EXPECT_NE(read_text_file(kTmp / "badcfg.stderr").find("line 2"), std::string::npos);
  EXPECT_NE(run("run --config /nonexistent.cfg", "missing").status, 0);
  const fs::path junk = write_config("junk.genotype", "1,2,3\n");
  EXPECT_NE(run("episode --arena " + kDataDir + "/arenas/hard.arena --genotype " + junk.string(), "junk").status, 0);
}

}  // namespace
}  // namespace entropic
