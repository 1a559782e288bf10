#pragma once

#include "jamgcn/geometry.hpp"
#include "jamgcn/jamfield.hpp"

#include <vector>

namespace jamgcn {

struct UavState {
  int id = 0;
  Vec2 pos = Vec2::Zero();
  Vec2 vel = Vec2::Zero();
  // Latches on the first tick with P >= p_tau; the UAV never moves again.
  bool disrupted = false;
};

using Swarm = std::vector<UavState>;

struct ControlGains {
  double cohesion = 0.02;
  double alignment = 0.5;
  double goal = 0.4;
  double damping = 0.6;
  double repulsion = 1.0e5;
  double tangential = 200.0;
};

struct SwarmConfig {
  int n = 6;
  double comm_range_d = 20.0;
  double spacing_rs = 24.0;
  double v_max = 5.0;
  double a_max = 2.0;
  double dt = 0.1;
  Vec2 target = Vec2(170.0, 100.0);
  ControlGains gains;
  double arrive_radius = 5.0;

  void validate() const;
};

/// Predicted disruption disk the swarm steers around.
struct DangerDisk {
  Vec2 center = Vec2::Zero();
  double radius = 1.0;
  double inflation = 1.5;
  double margin = 10.0;

  double avoid_radius() const { return radius * inflation; }
  double alert_radius() const { return radius * inflation + margin; }
  void validate() const;
};

/// Triangular lattice (rows of 1, 2, 3, ... UAVs) whose apex points along
/// heading, translated so the mean position equals centroid.
std::vector<Vec2> triangular_formation(int n, double spacing, const Vec2& centroid,
                                       double heading_rad);

/// Spring-spacing cohesion, velocity alignment, goal seeking and damping for
/// each UAV, clamped to a_max. Neighbors are operational UAVs strictly within
/// comm_range_d. cohesion_scale multiplies the cohesion gain (dispersal mode).
std::vector<Vec2> flocking_accel(const Swarm& swarm, const SwarmConfig& cfg,
                                 double cohesion_scale = 1.0);

/// Inverse potential-field repulsion from the disk's alert radius plus a
/// tangential slide toward the target, clamped to a_max.
Vec2 avoidance_accel(const UavState& state, const DangerDisk& disk, const SwarmConfig& cfg);

/// Semi-implicit Euler step with the speed clamp and the frozen-when-disrupted
/// rule applied against the true field.
Swarm step(const Swarm& swarm, const std::vector<Vec2>& accels, const JammerField& field,
           const DisruptionPolicy& policy, const SwarmConfig& cfg);

struct SwarmMetrics {
  bool connected = false;
  double min_pairwise_dist = 0.0;
  double max_dist_to_target = 0.0;
  bool any_disrupted = false;
};

SwarmMetrics swarm_metrics(const Swarm& swarm, const SwarmConfig& cfg);

}  // namespace jamgcn
