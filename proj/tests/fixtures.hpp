#pragma once

#include "jamgcn/config.hpp"
#include "jamgcn/episode.hpp"

#include <cmath>

namespace fixture {

// Hand-built log: six UAVs flying east at 1 m/s past a jammer, recorded at
// the default tick length, with a terminal record at the last tick.
inline jamgcn::TrajectoryLog straight_flight(double seconds) {
  using namespace jamgcn;
  EpisodeConfig cfg;
  cfg.jammer = JammerField{100.0, 60.0, 1.0, 0.9};
  TrajectoryLog log;
  log.config = to_json(cfg);
  const double r_tau = critical_radius(cfg.jammer, cfg.policy);
  const long ticks = std::lround(seconds / cfg.swarm.dt);
  for (long k = 0; k <= ticks; ++k) {
    TickRecord rec;
    rec.tick = k;
    rec.t = static_cast<double>(k) * cfg.swarm.dt;
    for (int i = 0; i < 6; ++i) {
      UavState u;
      u.id = i;
      u.pos = Vec2(30.0 + rec.t + 10.0 * (i % 3), 100.0 + 12.0 * (i / 3));
      u.vel = Vec2(1.0, 0.0);
      rec.uavs.push_back(u);
      rec.p.push_back(probability(cfg.jammer, u.pos));
    }
    rec.edges = {{0, 1}, {1, 2}, {3, 4}, {4, 5}, {0, 3}};
    rec.truth = {cfg.jammer.pos_x, cfg.jammer.pos_y, cfg.jammer.decay_a, r_tau};
    rec.predicted = {cfg.jammer.pos_x + 4.0 * std::sin(rec.t), cfg.jammer.pos_y - 3.0, 0.91, r_tau + 1.0};
    log.ticks.push_back(std::move(rec));
  }
  log.terminal = Terminal{Outcome::timeout, log.ticks.back().t};
  return log;
}

}  // namespace fixture
