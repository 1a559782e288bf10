#include "jamgcn/swarm.hpp"

#include "jamgcn/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace jamgcn {

void SwarmConfig::validate() const {
  if (n < 2) throw ConfigError("swarm needs at least 2 UAVs");
  if (!(comm_range_d > 0.0)) throw ConfigError("comm_range_d must be positive");
  if (!(spacing_rs > 0.0)) throw ConfigError("spacing_rs must be positive");
  if (!(v_max > 0.0) || !(a_max > 0.0)) throw ConfigError("v_max and a_max must be positive");
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (!is_finite(target)) throw ConfigError("target must be finite");
  if (!(arrive_radius > 0.0)) throw ConfigError("arrive_radius must be positive");
  const ControlGains& g = gains;
  for (double v : {g.cohesion, g.alignment, g.goal, g.damping, g.repulsion, g.tangential})
    if (!(v >= 0.0)) throw ConfigError("control gains must be non-negative");
}

void DangerDisk::validate() const {
  if (!is_finite(center)) throw std::invalid_argument("danger disk center must be finite");
  if (!(radius > 0.0)) throw std::invalid_argument("danger disk radius must be positive");
  if (!(inflation >= 1.0)) throw std::invalid_argument("danger disk inflation must be >= 1");
  if (!(margin >= 0.0)) throw std::invalid_argument("danger disk margin must be >= 0");
}

std::vector<Vec2> triangular_formation(int n, double spacing, const Vec2& centroid,
                                       double heading_rad) {
  std::vector<Vec2> local;
  local.reserve(static_cast<std::size_t>(n));
  const double row_step = spacing * std::sqrt(3.0) / 2.0;
  for (int row = 0; static_cast<int>(local.size()) < n; ++row) {
    for (int j = 0; j <= row && static_cast<int>(local.size()) < n; ++j)
      local.emplace_back(-row * row_step, (j - 0.5 * row) * spacing);
  }
  Vec2 mean = Vec2::Zero();
  for (const Vec2& p : local) mean += p;
  mean /= static_cast<double>(n);

  const Vec2 fwd(std::cos(heading_rad), std::sin(heading_rad));
  const Vec2 left(-fwd.y(), fwd.x());
  std::vector<Vec2> out;
  out.reserve(local.size());
  for (const Vec2& p : local) {
    const Vec2 q = p - mean;
    out.push_back(centroid + q.x() * fwd + q.y() * left);
  }
  return out;
}

std::vector<Vec2> flocking_accel(const Swarm& swarm, const SwarmConfig& cfg,
                                 double cohesion_scale) {
  if (swarm.size() < 2) throw std::invalid_argument("flocking_accel: need at least 2 UAVs");
  const ControlGains& g = cfg.gains;
  const double k_c = g.cohesion * cohesion_scale;
  std::vector<Vec2> out(swarm.size(), Vec2::Zero());

  for (std::size_t i = 0; i < swarm.size(); ++i) {
    const UavState& me = swarm[i];
    if (me.disrupted) continue;

    Vec2 spring = Vec2::Zero();
    Vec2 vel_sum = Vec2::Zero();
    int neighbors = 0;
    for (std::size_t j = 0; j < swarm.size(); ++j) {
      if (j == i || swarm[j].disrupted) continue;
      const Vec2 diff = swarm[j].pos - me.pos;
      const double r = std::hypot(diff.x(), diff.y());
      if (r == 0.0) throw std::domain_error("flocking_accel: coincident UAV positions");
      if (r >= cfg.comm_range_d) continue;
      spring += (1.0 - cfg.spacing_rs / r) * diff;
      vel_sum += swarm[j].vel;
      ++neighbors;
    }

    Vec2 a = k_c * spring + g.goal * (cfg.target - me.pos) - g.damping * me.vel;
    if (neighbors > 0) a += g.alignment * (vel_sum / neighbors - me.vel);
    out[i] = clamp_norm(a, cfg.a_max);
  }
  return out;
}

Vec2 avoidance_accel(const UavState& state, const DangerDisk& disk, const SwarmConfig& cfg) {
  if (state.disrupted) throw std::invalid_argument("avoidance_accel: UAV is disrupted");
  disk.validate();
  const Vec2 offset = state.pos - disk.center;
  const double rho = std::hypot(offset.x(), offset.y());
  if (rho == 0.0) throw std::domain_error("avoidance_accel: UAV at predicted jammer center");
  const double rho0 = disk.alert_radius();
  if (rho >= rho0) return Vec2::Zero();

  const Vec2 radial = offset / rho;
  const Vec2 ccw(-radial.y(), radial.x());
  const Vec2 to_target = cfg.target - state.pos;
  // Tangent that turns toward the goal; counterclockwise on ties.
  const Vec2 tangent = (-ccw).dot(to_target) > ccw.dot(to_target) ? Vec2(-ccw) : ccw;

  const double excess = 1.0 / rho - 1.0 / rho0;
  const Vec2 a = cfg.gains.repulsion * excess / (rho * rho) * radial +
                 cfg.gains.tangential * excess * tangent;
  return clamp_norm(a, cfg.a_max);
}

Swarm step(const Swarm& swarm, const std::vector<Vec2>& accels, const JammerField& field,
           const DisruptionPolicy& policy, const SwarmConfig& cfg) {
  if (accels.size() != swarm.size())
    throw std::invalid_argument("step: acceleration count does not match swarm size");
  Swarm next = swarm;
  for (std::size_t i = 0; i < next.size(); ++i) {
    UavState& u = next[i];
    if (u.disrupted) continue;
    if (!is_finite(accels[i])) throw std::domain_error("step: non-finite acceleration");
    u.vel = clamp_norm(u.vel + accels[i] * cfg.dt, cfg.v_max);
    u.pos += u.vel * cfg.dt;
    if (is_disrupted(field, policy, u.pos)) {
      u.disrupted = true;
      u.vel = Vec2::Zero();
    }
  }
  return next;
}

SwarmMetrics swarm_metrics(const Swarm& swarm, const SwarmConfig& cfg) {
  SwarmMetrics m;
  m.min_pairwise_dist = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < swarm.size(); ++i) {
    m.any_disrupted = m.any_disrupted || swarm[i].disrupted;
    m.max_dist_to_target = std::max(m.max_dist_to_target, distance(swarm[i].pos, cfg.target));
    for (std::size_t j = i + 1; j < swarm.size(); ++j)
      m.min_pairwise_dist = std::min(m.min_pairwise_dist, distance(swarm[i].pos, swarm[j].pos));
    if (!swarm[i].disrupted) active.push_back(i);
  }
  if (active.empty()) return m;

  // Flood fill over operational UAVs.
  std::vector<char> seen(active.size(), 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t a = stack.back();
    stack.pop_back();
    for (std::size_t b = 0; b < active.size(); ++b) {
      if (seen[b]) continue;
      if (distance(swarm[active[a]].pos, swarm[active[b]].pos) < cfg.comm_range_d) {
        seen[b] = 1;
        ++reached;
        stack.push_back(b);
      }
    }
  }
  m.connected = reached == active.size();
  return m;
}

}  // namespace jamgcn
