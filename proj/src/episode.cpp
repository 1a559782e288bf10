#include "jamgcn/episode.hpp"

#include "jamgcn/config.hpp"
#include "jamgcn/error.hpp"
#include "jamgcn/graph.hpp"
#include "jamgcn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace jamgcn {

namespace {

nlohmann::json estimate_json(const JammerEstimate& e) {
  return {{"xj", e.xj}, {"yj", e.yj}, {"a", e.a}, {"r_tau", e.r_tau}};
}

JammerEstimate estimate_from_json(const nlohmann::json& j) {
  return {j.at("xj").get<double>(), j.at("yj").get<double>(), j.at("a").get<double>(),
          j.at("r_tau").get<double>()};
}

long ratio_ticks(double interval, double dt) { return std::lround(interval / dt); }

}  // namespace

void EpisodeConfig::validate() const {
  swarm.validate();
  try {
    jammer.validate();
    policy.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  const EpisodeParams& p = params;
  if (!is_finite(p.start)) throw ConfigError("episode start must be finite");
  if (!(p.replan_interval >= swarm.dt * (1.0 - 1e-9)))
    throw ConfigError("replan_interval must be >= dt");
  if (!(p.snapshot_interval > 0.0)) throw ConfigError("snapshot_interval must be positive");
  const double snap_ratio = p.snapshot_interval / swarm.dt;
  if (std::abs(snap_ratio - std::round(snap_ratio)) > 1e-6)
    throw ConfigError("snapshot_interval must be a multiple of dt");
  if (!(p.timeout > 0.0)) throw ConfigError("timeout must be positive");
  if (!(p.inflation >= 1.0) || !(p.margin >= 0.0)) throw ConfigError("invalid danger disk inflation or margin");
  if (!(p.ema_weight > 0.0 && p.ema_weight <= 1.0)) throw ConfigError("ema_weight must lie in (0, 1]");
  if (!(p.a_clamp_lo > 0.0 && p.a_clamp_lo < p.a_clamp_hi && p.a_clamp_hi < 1.0))
    throw ConfigError("A clamp must satisfy 0 < lo < hi < 1");
  if (!(p.dispersal_cohesion_scale >= 0.0)) throw ConfigError("dispersal_cohesion_scale must be >= 0");
  if (!(p.formation_jitter >= 0.0)) throw ConfigError("formation_jitter must be >= 0");
}

long EpisodeConfig::ticks_per_replan() const {
  return std::max(1L, ratio_ticks(params.replan_interval, swarm.dt));
}

long EpisodeConfig::ticks_per_snapshot() const {
  return std::max(1L, ratio_ticks(params.snapshot_interval, swarm.dt));
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::success: return "success";
    case Outcome::disruption_failure: return "disruption_failure";
    case Outcome::timeout: return "timeout";
  }
  return "timeout";
}

Outcome outcome_from_string(const std::string& name) {
  if (name == "success") return Outcome::success;
  if (name == "disruption_failure") return Outcome::disruption_failure;
  if (name == "timeout") return Outcome::timeout;
  throw std::invalid_argument("unknown outcome: " + name);
}

Swarm initial_swarm(const EpisodeConfig& cfg) {
  const Vec2 heading_vec = cfg.swarm.target - cfg.params.start;
  const double heading = std::atan2(heading_vec.y(), heading_vec.x());
  const auto slots = triangular_formation(cfg.swarm.n, cfg.swarm.spacing_rs, cfg.params.start, heading);
  Rng rng(cfg.params.seed);
  const double j = cfg.params.formation_jitter;
  Swarm swarm;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    UavState u;
    u.id = static_cast<int>(i);
    u.pos = slots[i] + Vec2(rng.uniform(-j, j), rng.uniform(-j, j));
    swarm.push_back(u);
  }
  return swarm;
}

bool detect_danger(const Swarm& swarm, const DangerDisk& disk) {
  const double alert = disk.alert_radius();
  return std::any_of(swarm.begin(), swarm.end(), [&](const UavState& u) {
    return !u.disrupted && distance(u.pos, disk.center) <= alert;
  });
}

JammerEstimate estimate_from_prediction(const LabelVec& prediction, const EpisodeConfig& cfg) {
  JammerEstimate e;
  e.xj = prediction[0];
  e.yj = prediction[1];
  e.a = std::clamp(prediction[2], cfg.params.a_clamp_lo, cfg.params.a_clamp_hi);
  JammerField assumed;
  assumed.k = 1.0;
  assumed.decay_a = e.a;
  e.r_tau = critical_radius(assumed, cfg.policy);
  return e;
}

TrajectoryLog run_episode(const EpisodeConfig& cfg, const GcnModel& model) {
  cfg.validate();
  model.validate();
  const JammerField& truth_field = cfg.jammer;
  const double true_r_tau = critical_radius(truth_field, cfg.policy);
  const JammerEstimate truth{truth_field.pos_x, truth_field.pos_y, truth_field.decay_a, true_r_tau};

  Swarm swarm = initial_swarm(cfg);
  for (const UavState& u : swarm)
    if (is_disrupted(truth_field, cfg.policy, u.pos))
      throw ConfigError("initial formation overlaps the true disruption disk");

  TrajectoryLog log;
  log.config = to_json(cfg);
  nlohmann::json starts = nlohmann::json::array();
  for (const UavState& u : swarm) starts.push_back({u.pos.x(), u.pos.y()});
  log.config["start_positions"] = std::move(starts);

  const long replan_every = cfg.ticks_per_replan();
  const long max_ticks = std::lround(cfg.params.timeout / cfg.swarm.dt);
  std::optional<LabelVec> smoothed;
  JammerEstimate estimate;
  DangerDisk disk;
  disk.inflation = cfg.params.inflation;
  disk.margin = cfg.params.margin;

  for (long tick = 0;; ++tick) {
    const double t = static_cast<double>(tick) * cfg.swarm.dt;
    if (tick % replan_every == 0) {
      const GraphSnapshot snap = build_snapshot(swarm, truth_field, cfg.swarm.comm_range_d);
      const LabelVec raw = predict(model, snap);
      const double w = cfg.params.ema_weight;
      smoothed = smoothed ? LabelVec(w * raw + (1.0 - w) * *smoothed) : raw;
      estimate = estimate_from_prediction(*smoothed, cfg);
      disk.center = Vec2(estimate.xj, estimate.yj);
      disk.radius = estimate.r_tau;
    }
    const bool danger = detect_danger(swarm, disk);

    TickRecord rec;
    rec.tick = tick;
    rec.t = t;
    rec.uavs = swarm;
    for (const UavState& u : swarm) rec.p.push_back(probability(truth_field, u.pos));
    rec.predicted = estimate;
    rec.truth = truth;
    for (std::size_t i = 0; i < swarm.size(); ++i)
      for (std::size_t j = i + 1; j < swarm.size(); ++j)
        if (!swarm[i].disrupted && !swarm[j].disrupted &&
            distance(swarm[i].pos, swarm[j].pos) < cfg.swarm.comm_range_d)
          rec.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    rec.danger = danger;
    log.ticks.push_back(std::move(rec));

    const SwarmMetrics m = swarm_metrics(swarm, cfg.swarm);
    if (m.any_disrupted) {
      log.terminal = Terminal{Outcome::disruption_failure, t};
      break;
    }
    if (m.max_dist_to_target <= cfg.swarm.arrive_radius && m.connected) {
      log.terminal = Terminal{Outcome::success, t};
      break;
    }
    if (tick >= max_ticks) {
      log.terminal = Terminal{Outcome::timeout, t};
      break;
    }

    std::vector<Vec2> accels =
        flocking_accel(swarm, cfg.swarm, danger ? cfg.params.dispersal_cohesion_scale : 1.0);
    if (danger)
      for (std::size_t i = 0; i < swarm.size(); ++i)
        if (!swarm[i].disrupted) accels[i] += avoidance_accel(swarm[i], disk, cfg.swarm);
    swarm = step(swarm, accels, truth_field, cfg.policy, cfg.swarm);
  }
  return log;
}

OutcomeSummary episode_outcome(const TrajectoryLog& log) {
  if (log.ticks.empty() || !log.terminal) throw std::invalid_argument("episode_outcome: truncated log");
  OutcomeSummary s;
  s.outcome = log.terminal->outcome;
  s.t_final = log.terminal->t_final;
  s.min_margin = std::numeric_limits<double>::infinity();
  for (const TickRecord& tick : log.ticks) {
    const Vec2 center(tick.truth.xj, tick.truth.yj);
    for (const UavState& u : tick.uavs)
      s.min_margin = std::min(s.min_margin, distance(u.pos, center) - tick.truth.r_tau);
  }
  const TickRecord& last = log.ticks.back();
  SwarmConfig cfg;
  if (log.config.contains("physics"))
    cfg.comm_range_d = log.config["physics"].value("comm_range_d", cfg.comm_range_d);
  s.final_connected = swarm_metrics(last.uavs, cfg).connected;
  return s;
}

EpisodeConfig crossing_mission(const EpisodeConfig& base, std::uint64_t seed, double a_lo, double a_hi) {
  EpisodeConfig cfg = base;
  cfg.params.seed = seed;
  // Separate stream from the formation jitter, which also draws from seed.
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  const Vec2 along = cfg.swarm.target - cfg.params.start;
  const Vec2 normal = Vec2(-along.y(), along.x()).normalized();
  const Vec2 center = cfg.params.start + rng.uniform(0.4, 0.6) * along + rng.uniform(-5.0, 5.0) * normal;
  cfg.jammer.pos_x = center.x();
  cfg.jammer.pos_y = center.y();
  cfg.jammer.k = 1.0;
  cfg.jammer.decay_a = rng.uniform(a_lo, a_hi);
  return cfg;
}

nlohmann::json tick_to_json(const TickRecord& tick) {
  nlohmann::json uavs = nlohmann::json::array();
  for (std::size_t i = 0; i < tick.uavs.size(); ++i) {
    const UavState& u = tick.uavs[i];
    uavs.push_back({{"id", u.id},
                    {"pos", {u.pos.x(), u.pos.y()}},
                    {"vel", {u.vel.x(), u.vel.y()}},
                    {"p", tick.p.at(i)},
                    {"disrupted", u.disrupted}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : tick.edges) edges.push_back({a, b});
  return {{"tick", tick.tick},
          {"t", tick.t},
          {"uavs", std::move(uavs)},
          {"predicted", estimate_json(tick.predicted)},
          {"true", estimate_json(tick.truth)},
          {"edges", std::move(edges)},
          {"danger", tick.danger}};
}

TickRecord tick_from_json(const nlohmann::json& doc) {
  TickRecord rec;
  rec.tick = doc.at("tick").get<long>();
  rec.t = doc.at("t").get<double>();
  for (const auto& u : doc.at("uavs")) {
    UavState s;
    s.id = u.at("id").get<int>();
    s.pos = Vec2(u.at("pos").at(0).get<double>(), u.at("pos").at(1).get<double>());
    s.vel = Vec2(u.at("vel").at(0).get<double>(), u.at("vel").at(1).get<double>());
    s.disrupted = u.at("disrupted").get<bool>();
    rec.uavs.push_back(s);
    rec.p.push_back(u.at("p").get<double>());
  }
  rec.predicted = estimate_from_json(doc.at("predicted"));
  rec.truth = estimate_from_json(doc.at("true"));
  for (const auto& e : doc.at("edges")) rec.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  rec.danger = doc.at("danger").get<bool>();
  return rec;
}

void write_trajectory(const TrajectoryLog& log, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open trajectory for writing: " + path);
  out << nlohmann::json{{"version", 1}, {"config", log.config}}.dump() << '\n';
  for (const TickRecord& tick : log.ticks) out << tick_to_json(tick).dump() << '\n';
  if (log.terminal)
    out << nlohmann::json{{"outcome", to_string(log.terminal->outcome)}, {"t_final", log.terminal->t_final}}.dump()
        << '\n';
  if (!out) throw IoError("failed writing trajectory: " + path);
}

TrajectoryLog read_trajectory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open trajectory: " + path);
  TrajectoryLog log;
  std::string line;
  std::size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const auto doc = nlohmann::json::parse(line);
      if (line_no == 1) {
        if (doc.value("version", 0) != 1 || !doc.contains("config"))
          throw IoError("trajectory header must be {\"version\":1, \"config\":{...}}");
        log.config = doc.at("config");
        continue;
      }
      if (log.terminal) throw IoError("trajectory has records after the terminal line");
      if (doc.contains("outcome")) {
        log.terminal = Terminal{outcome_from_string(doc.at("outcome").get<std::string>()),
                                doc.at("t_final").get<double>()};
        continue;
      }
      TickRecord rec = tick_from_json(doc);
      if (!log.ticks.empty() && !(rec.t > log.ticks.back().t))
        throw IoError("trajectory times must increase");
      log.ticks.push_back(std::move(rec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
  }
  if (line_no == 0) throw IoError("empty trajectory file: " + path);
  return log;
}

}  // namespace jamgcn
