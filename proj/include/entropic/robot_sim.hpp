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

#ifndef ENTROPIC_ROBOT_SIM_HPP
#define ENTROPIC_ROBOT_SIM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "entropic/arena.hpp"
#include "entropic/controller.hpp"

namespace entropic {

inline constexpr std::size_t kSmsDim = kSensorCount + kMotorCount;

/// One time step: 8 sensor activations then 2 motor commands, all in [0, 1].
using SensoriMotorVector = std::array<double, kSmsDim>;
using SensoriMotorStream = std::vector<SensoriMotorVector>;

using RobotState = Pose;

struct EpisodeConfig {
  int steps = 2000;
  double dt = 0.1;
  double max_speed = 5.0;     // world units per second at motor command 1
  double axle = 2.0;          // wheel separation, world units
  double sensor_range = 4.0;  // world units
  std::array<double, kSensorCount> sensor_angles{
      0.0,
      std::numbers::pi / 6,
      -std::numbers::pi / 6,
      std::numbers::pi / 2,
      -std::numbers::pi / 2,
      5 * std::numbers::pi / 6,
      -5 * std::numbers::pi / 6,
      std::numbers::pi,
  };
  // Gaussian noise on sensor activations and motor commands (standard
  // deviations). Zero disables noise entirely; the controller then is a pure
  // function of the arena and the genotype.
  double sensor_noise = 0.0;
  double motor_noise = 0.0;
  std::uint64_t noise_seed = 0;

  /// Constants scaled to the arena grid: a full-speed robot crosses one cell
  /// in two steps, sensors see four cells away.
  static EpisodeConfig for_cell_size(double cell_size, int steps = 2000) {
    EpisodeConfig cfg;
    cfg.steps = steps;
    cfg.max_speed = 5.0 * cell_size;
    cfg.axle = 2.0 * cell_size;
    cfg.sensor_range = 4.0 * cell_size;
    return cfg;
  }

  static EpisodeConfig for_arena(const Arena& arena, int steps = 2000) {
    return for_cell_size(arena.cell_size(), steps);
  }

  void validate() const {
    if (steps < 1) throw std::invalid_argument("episode steps must be >= 1");
    if (!(dt > 0) || !(max_speed >= 0) || !(axle > 0) || !(sensor_range > 0))
      throw std::invalid_argument("episode dt, axle and sensor_range must be positive");
    if (sensor_noise < 0 || motor_noise < 0) throw std::invalid_argument("noise levels must be non-negative");
  }
};

struct EpisodeResult {
  SensoriMotorStream stream;
  PatrolGrid patrol;
  std::vector<RobotState> trajectory;  // pose after each step
  Vec2 end_point;
  double max_distance_from_start = 0.0;
};

/// activation_i = 1 - range_i / sensor_range: 1 when touching, 0 when nothing is in range.
inline SensorReading sense(const Arena& arena, const RobotState& state, const EpisodeConfig& cfg) {
  SensorReading out{};
  for (std::size_t i = 0; i < kSensorCount; ++i) {
    const double d = arena.raycast(state.position(), state.heading + cfg.sensor_angles[i], cfg.sensor_range);
    out[i] = std::clamp(1.0 - d / cfg.sensor_range, 0.0, 1.0);
  }
  return out;
}

/// Differential-drive kinematics. The heading always turns; the position only
/// advances if the destination is free (the robot blocks against walls).
inline RobotState step(const Arena& arena, const RobotState& state, const MotorCommand& motors, const EpisodeConfig& cfg) {
  const double left = std::clamp(motors[0], -1.0, 1.0);
  const double right = std::clamp(motors[1], -1.0, 1.0);
  const double v = 0.5 * (left + right) * cfg.max_speed;
  const double omega = (right - left) / cfg.axle * cfg.max_speed;

  RobotState next = state;
  if (omega != 0.0) next.heading = std::remainder(state.heading + omega * cfg.dt, 2 * std::numbers::pi);
  if (v != 0.0) {
    const Vec2 target{state.x + v * cfg.dt * std::cos(next.heading), state.y + v * cfg.dt * std::sin(next.heading)};
    if (arena.is_free(target)) {
      next.x = target.x;
      next.y = target.y;
    }
  }
  return next;
}

/// Runs `cfg.steps` sense -> act -> record -> move cycles from the arena's
/// start pose. Motor commands are stored rescaled to [0, 1] via (m + 1) / 2.
inline EpisodeResult run_episode(const Arena& arena, const Genotype& controller, const EpisodeConfig& cfg) {
  cfg.validate();
  EpisodeResult result;
  result.patrol = PatrolGrid(arena);
  result.stream.reserve(cfg.steps);
  result.trajectory.reserve(cfg.steps);

  const bool noisy = cfg.sensor_noise > 0 || cfg.motor_noise > 0;
  Rng noise_rng(cfg.noise_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  RobotState state = arena.start_pose();
  const Vec2 start = state.position();
  for (int t = 0; t < cfg.steps; ++t) {
    SensorReading sensors = sense(arena, state, cfg);
    if (noisy && cfg.sensor_noise > 0)
      for (double& s : sensors) s = std::clamp(s + cfg.sensor_noise * gauss(noise_rng), 0.0, 1.0);
    MotorCommand motors = activate(controller, sensors);
    for (double& m : motors) {
      if (noisy && cfg.motor_noise > 0) m += cfg.motor_noise * gauss(noise_rng);
      m = std::clamp(m, -1.0, 1.0);
    }

    SensoriMotorVector x;
    std::copy(sensors.begin(), sensors.end(), x.begin());
    for (std::size_t k = 0; k < kMotorCount; ++k) x[kSensorCount + k] = 0.5 * (motors[k] + 1.0);
    result.stream.push_back(x);

    state = step(arena, state, motors, cfg);
    result.patrol.record_visit(arena, state.position());
    result.trajectory.push_back(state);
    result.max_distance_from_start = std::max(result.max_distance_from_start, distance(start, state.position()));
  }
  result.end_point = state.position();
  return result;
}

/// CSV dump `t,x,y,heading,s0..s7,m0,m1`; one row per step, sensor and motor
/// columns as stored in the stream (all in [0, 1]).
inline void write_trajectory_csv(std::ostream& out, const EpisodeResult& episode) {
  out << "t,x,y,heading";
  for (std::size_t i = 0; i < kSensorCount; ++i) out << ",s" << i;
  for (std::size_t k = 0; k < kMotorCount; ++k) out << ",m" << k;
  out << '\n';
  for (std::size_t t = 0; t < episode.stream.size(); ++t) {
    const auto& pose = episode.trajectory[t];
    out << (t + 1) << ',' << format_double(pose.x) << ',' << format_double(pose.y) << ',' << format_double(pose.heading);
    for (double v : episode.stream[t]) out << ',' << format_double(v);
    out << '\n';
  }
}

}  // namespace entropic

#endif  // ENTROPIC_ROBOT_SIM_HPP
