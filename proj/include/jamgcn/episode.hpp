#pragma once

#include "jamgcn/gcn.hpp"
#include "jamgcn/geometry.hpp"
#include "jamgcn/jamfield.hpp"
#include "jamgcn/swarm.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jamgcn {

struct EpisodeParams {
  Vec2 start = Vec2(30.0, 100.0);  // initial formation centroid
  double replan_interval = 1.0;
  double snapshot_interval = 10.0;
  double timeout = 300.0;
  std::uint64_t seed = 0;
  double inflation = 7.0;
  double margin = 60.0;
  double ema_weight = 0.3;  // weight of the newest prediction
  double a_clamp_lo = 0.5;
  double a_clamp_hi = 0.999;
  double dispersal_cohesion_scale = 0.25;
  double formation_jitter = 1.0;  // meters, per coordinate
};

struct EpisodeConfig {
  SwarmConfig swarm;
  JammerField jammer;  // ground truth
  DisruptionPolicy policy;
  EpisodeParams params;

  void validate() const;
  long ticks_per_replan() const;
  long ticks_per_snapshot() const;
};

/// Jammer estimate in physical units with the radius derived from it.
struct JammerEstimate {
  double xj = 0.0;
  double yj = 0.0;
  double a = 0.0;
  double r_tau = 0.0;
};

struct TickRecord {
  long tick = 0;
  double t = 0.0;
  Swarm uavs;
  std::vector<double> p;  // true P per UAV
  JammerEstimate predicted;
  JammerEstimate truth;
  std::vector<std::pair<int, int>> edges;
  bool danger = false;
};

enum class Outcome { success, disruption_failure, timeout };

std::string to_string(Outcome outcome);
Outcome outcome_from_string(const std::string& name);

struct Terminal {
  Outcome outcome = Outcome::timeout;
  double t_final = 0.0;
};

struct TrajectoryLog {
  nlohmann::json config;  // resolved configuration, including start positions
  std::vector<TickRecord> ticks;
  std::optional<Terminal> terminal;
};

/// Initial formation: triangular lattice at spacing_rs centered on the start
/// point, apex toward the target, with seeded jitter and zero velocity.
Swarm initial_swarm(const EpisodeConfig& cfg);

/// True iff any operational UAV lies within the disk's alert radius
/// (boundary inclusive).
bool detect_danger(const Swarm& swarm, const DangerDisk& disk);

/// Disk derived from a raw regression output: A clamped to
/// [a_clamp_lo, a_clamp_hi], radius from the critical-radius formula with k = 1.
JammerEstimate estimate_from_prediction(const LabelVec& prediction, const EpisodeConfig& cfg);

TrajectoryLog run_episode(const EpisodeConfig& cfg, const GcnModel& model);

struct OutcomeSummary {
  Outcome outcome = Outcome::timeout;
  double t_final = 0.0;
  double min_margin = 0.0;  // min over ticks and UAVs of (distance to true center - true r_tau)
  bool final_connected = false;
};

/// Throws std::invalid_argument on a log without ticks or terminal record.
OutcomeSummary episode_outcome(const TrajectoryLog& log);

/// Copy of base with the jammer placed near the middle of the start-target
/// segment (fraction 0.4-0.6, lateral offset up to 5 m) and A uniform in
/// [a_lo, a_hi]; params.seed is set to seed.
EpisodeConfig crossing_mission(const EpisodeConfig& base, std::uint64_t seed, double a_lo, double a_hi);

nlohmann::json tick_to_json(const TickRecord& tick);
TickRecord tick_from_json(const nlohmann::json& doc);

void write_trajectory(const TrajectoryLog& log, const std::string& path);
/// Throws IoError on unreadable or malformed files. A log without a terminal
/// line is returned with terminal unset.
TrajectoryLog read_trajectory(const std::string& path);

}  // namespace jamgcn
