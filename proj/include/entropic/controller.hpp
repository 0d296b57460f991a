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

#ifndef ENTROPIC_CONTROLLER_HPP
#define ENTROPIC_CONTROLLER_HPP

#include <array>
#include <cmath>
#include <cstdio>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "entropic/arena.hpp"

namespace entropic {

using Rng = std::mt19937_64;

inline constexpr std::size_t kSensorCount = 8;
inline constexpr std::size_t kMotorCount = 2;
inline constexpr std::size_t kHiddenCount = 10;
// (8 inputs + bias) x 10 hidden + (10 hidden + bias) x 2 outputs.
inline constexpr std::size_t kWeightCount = (kSensorCount + 1) * kHiddenCount + (kHiddenCount + 1) * kMotorCount;
static_assert(kWeightCount == 112);

inline constexpr double kInitialSigma = 0.2;

using SensorReading = std::array<double, kSensorCount>;
using MotorCommand = std::array<double, kMotorCount>;

/// Weights of the 8-10-2 tanh perceptron plus its mutation step-size.
///
/// Layout: hidden unit j owns weights [9j, 9j + 8) for the inputs and 9j + 8
/// for its bias; output k then owns 11 weights starting at 90 + 11k, the last
/// being the bias.
struct Genotype {
  std::array<double, kWeightCount> weights{};
  double sigma = kInitialSigma;

  friend bool operator==(const Genotype&, const Genotype&) = default;
};

/// How the "variance 0.1" initialisation is read.
enum class InitSpread {
  Variance,  // N(0, 0.1): standard deviation sqrt(0.1)
  StdDev,    // N(0, 0.1^2)
};

inline double init_stddev(InitSpread spread) { return spread == InitSpread::Variance ? std::sqrt(0.1) : 0.1; }

inline Genotype random_genotype(Rng& rng, InitSpread spread = InitSpread::Variance) {
  std::normal_distribution<double> gauss(0.0, init_stddev(spread));
  Genotype g;
  for (double& w : g.weights) w = gauss(rng);
  g.sigma = kInitialSigma;
  return g;
}

/// Isotropic Gaussian mutation with the parent's step-size. The child keeps
/// the parent's sigma; adapting it is the optimizer's job.
inline Genotype mutate(const Genotype& parent, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Genotype child = parent;
  for (double& w : child.weights) w += parent.sigma * gauss(rng);
  return child;
}

inline MotorCommand activate(const Genotype& g, std::span<const double, kSensorCount> inputs) {
  std::array<double, kHiddenCount> hidden{};
  const double* w = g.weights.data();
  for (std::size_t j = 0; j < kHiddenCount; ++j, w += kSensorCount + 1) {
    double sum = w[kSensorCount];
    for (std::size_t i = 0; i < kSensorCount; ++i) sum += w[i] * inputs[i];
    hidden[j] = std::tanh(sum);
  }
  MotorCommand out{};
  for (std::size_t k = 0; k < kMotorCount; ++k, w += kHiddenCount + 1) {
    double sum = w[kHiddenCount];
    for (std::size_t j = 0; j < kHiddenCount; ++j) sum += w[j] * hidden[j];
    out[k] = std::tanh(sum);
  }
  return out;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// 112 weights then sigma, comma separated, 17 significant digits.
inline std::string to_csv_line(const Genotype& g) {
  std::string line;
  line.reserve(24 * (kWeightCount + 1));
  for (double w : g.weights) {
    line += format_double(w);
    line += ',';
  }
  line += format_double(g.sigma);
  return line;
}

inline std::vector<double> parse_csv_doubles(std::string_view line, std::size_t line_no = 0) {
  std::vector<double> values;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    if (comma == std::string_view::npos) comma = line.size();
    std::string_view tok = line.substr(pos, comma - pos);
    while (!tok.empty() && (tok.front() == ' ' || tok.front() == '\t')) tok.remove_prefix(1);
    while (!tok.empty() && (tok.back() == ' ' || tok.back() == '\t' || tok.back() == '\r')) tok.remove_suffix(1);
    double v = 0.0;
    if (!detail::parse_number(tok, v)) throw ParseError(line_no, "not a number: '" + std::string(tok) + "'");
    values.push_back(v);
    pos = comma + 1;
  }
  return values;
}

inline Genotype genotype_from_values(std::span<const double> values, std::size_t line_no = 0) {
  if (values.size() != kWeightCount + 1)
    throw ParseError(line_no, "genotype needs " + std::to_string(kWeightCount + 1) + " values, got " + std::to_string(values.size()));
  Genotype g;
  std::copy(values.begin(), values.begin() + kWeightCount, g.weights.begin());
  g.sigma = values[kWeightCount];
  if (!(g.sigma > 0.0)) throw ParseError(line_no, "genotype sigma must be positive");
  return g;
}

inline Genotype parse_genotype(std::string_view line) {
  const auto values = parse_csv_doubles(detail::trim_cr(line), 1);
  return genotype_from_values(values, 1);
}

}  // namespace entropic

#endif  // ENTROPIC_CONTROLLER_HPP
