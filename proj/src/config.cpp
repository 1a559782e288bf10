#include "jamgcn/config.hpp"

#include "jamgcn/error.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

namespace jamgcn {

namespace {

using nlohmann::json;

void require_object(const json& j, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
}

void reject_unknown(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  require_object(j, where);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || it.key() == a;
    if (!ok) throw ConfigError(std::string(where) + ": unknown key \"" + it.key() + "\"");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, std::string_view where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + "." + key + ": wrong type");
  }
}

void read_point(const json& j, const char* key, Vec2& out, std::string_view where) {
  if (!j.contains(key)) return;
  const json& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError(std::string(where) + "." + key + ": expected [x, y]");
  out = Vec2(v[0].get<double>(), v[1].get<double>());
}

void read_pair(const json& j, const char* key, double& lo, double& hi, std::string_view where) {
  Vec2 p(lo, hi);
  read_point(j, key, p, where);
  lo = p.x();
  hi = p.y();
}

void read_rect(const json& j, const char* key, Rect& out, std::string_view where) {
  if (!j.contains(key)) return;
  const std::string sub = std::string(where) + "." + key;
  reject_unknown(j.at(key), sub, {"min", "max"});
  read_point(j.at(key), "min", out.lo, sub);
  read_point(j.at(key), "max", out.hi, sub);
}

json point_json(const Vec2& p) { return json::array({p.x(), p.y()}); }

json rect_json(const Rect& r) { return {{"min", point_json(r.lo)}, {"max", point_json(r.hi)}}; }

void parse_physics(const json& j, SwarmConfig& c) {
  constexpr std::string_view w = "physics";
  reject_unknown(j, w, {"n", "comm_range_d", "spacing_rs", "v_max", "a_max", "dt", "target", "gains", "arrive_radius"});
  read(j, "n", c.n, w);
  read(j, "comm_range_d", c.comm_range_d, w);
  read(j, "spacing_rs", c.spacing_rs, w);
  read(j, "v_max", c.v_max, w);
  read(j, "a_max", c.a_max, w);
  read(j, "dt", c.dt, w);
  read_point(j, "target", c.target, w);
  read(j, "arrive_radius", c.arrive_radius, w);
  if (j.contains("gains")) {
    const json& g = j.at("gains");
    constexpr std::string_view wg = "physics.gains";
    reject_unknown(g, wg, {"cohesion", "alignment", "goal", "damping", "repulsion", "tangential"});
    read(g, "cohesion", c.gains.cohesion, wg);
    read(g, "alignment", c.gains.alignment, wg);
    read(g, "goal", c.gains.goal, wg);
    read(g, "damping", c.gains.damping, wg);
    read(g, "repulsion", c.gains.repulsion, wg);
    read(g, "tangential", c.gains.tangential, wg);
  }
}

void parse_jammer(const json& j, JammerField& f, DisruptionPolicy& p) {
  constexpr std::string_view w = "jammer";
  reject_unknown(j, w, {"x", "y", "k", "a", "p_tau"});
  read(j, "x", f.pos_x, w);
  read(j, "y", f.pos_y, w);
  read(j, "k", f.k, w);
  read(j, "a", f.decay_a, w);
  read(j, "p_tau", p.p_tau, w);
}

void parse_scenario(const json& j, ScenarioRanges& s) {
  constexpr std::string_view w = "scenario";
  reject_unknown(j, w, {"arena", "a_range", "jammer_region", "speed_range", "jitter", "near_fraction", "placement_radius"});
  read_rect(j, "arena", s.arena, w);
  read_pair(j, "a_range", s.a_lo, s.a_hi, w);
  read_rect(j, "jammer_region", s.jammer_region, w);
  read_pair(j, "speed_range", s.speed_lo, s.speed_hi, w);
  read(j, "jitter", s.jitter, w);
  read(j, "near_fraction", s.near_fraction, w);
  read(j, "placement_radius", s.placement_radius, w);
}

void parse_train(const json& j, TrainConfig& t) {
  constexpr std::string_view w = "train";
  reject_unknown(j, w, {"batch_size", "learning_rate", "epochs", "val_fraction", "seed", "hidden", "layers",
                        "beta1", "beta2", "epsilon"});
  read(j, "batch_size", t.batch_size, w);
  read(j, "learning_rate", t.learning_rate, w);
  read(j, "epochs", t.epochs, w);
  read(j, "val_fraction", t.val_fraction, w);
  read(j, "seed", t.seed, w);
  read(j, "hidden", t.hidden, w);
  if (j.contains("layers") && j.at("layers") != 2) throw ConfigError("train.layers: only 2 is supported");
  read(j, "beta1", t.beta1, w);
  read(j, "beta2", t.beta2, w);
  read(j, "epsilon", t.epsilon, w);
}

void parse_episode(const json& j, EpisodeParams& e) {
  constexpr std::string_view w = "episode";
  reject_unknown(j, w, {"start", "replan_interval", "snapshot_interval", "timeout", "seed", "inflation", "margin",
                        "ema_weight", "a_clamp", "dispersal_cohesion_scale", "formation_jitter"});
  read_point(j, "start", e.start, w);
  read(j, "replan_interval", e.replan_interval, w);
  read(j, "snapshot_interval", e.snapshot_interval, w);
  read(j, "timeout", e.timeout, w);
  read(j, "seed", e.seed, w);
  read(j, "inflation", e.inflation, w);
  read(j, "margin", e.margin, w);
  read(j, "ema_weight", e.ema_weight, w);
  read_pair(j, "a_clamp", e.a_clamp_lo, e.a_clamp_hi, w);
  read(j, "dispersal_cohesion_scale", e.dispersal_cohesion_scale, w);
  read(j, "formation_jitter", e.formation_jitter, w);
}

json episode_params_json(const EpisodeParams& e) {
  return {{"start", point_json(e.start)},
          {"replan_interval", e.replan_interval},
          {"snapshot_interval", e.snapshot_interval},
          {"timeout", e.timeout},
          {"seed", e.seed},
          {"inflation", e.inflation},
          {"margin", e.margin},
          {"ema_weight", e.ema_weight},
          {"a_clamp", {e.a_clamp_lo, e.a_clamp_hi}},
          {"dispersal_cohesion_scale", e.dispersal_cohesion_scale},
          {"formation_jitter", e.formation_jitter}};
}

json jammer_json(const JammerField& f, const DisruptionPolicy& p) {
  return {{"x", f.pos_x}, {"y", f.pos_y}, {"k", f.k}, {"a", f.decay_a}, {"p_tau", p.p_tau}};
}

}  // namespace

void RunConfig::validate() const {
  physics.validate();
  try {
    jammer.validate();
    policy.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  scenario.validate();
  train.validate();
  episode_config().validate();
}

GeneratorSetup RunConfig::generator() const { return {scenario, physics, policy}; }

EpisodeConfig RunConfig::episode_config() const { return {physics, jammer, policy, episode}; }

RunConfig run_config_from_json(const json& doc) {
  RunConfig cfg;
  reject_unknown(doc, "config", {"physics", "jammer", "scenario", "train", "episode"});
  if (doc.contains("physics")) parse_physics(doc.at("physics"), cfg.physics);
  if (doc.contains("jammer")) parse_jammer(doc.at("jammer"), cfg.jammer, cfg.policy);
  if (doc.contains("scenario")) parse_scenario(doc.at("scenario"), cfg.scenario);
  if (doc.contains("train")) parse_train(doc.at("train"), cfg.train);
  if (doc.contains("episode")) parse_episode(doc.at("episode"), cfg.episode);
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("malformed config " + path + ": " + e.what());
  }
  return run_config_from_json(doc);
}

json to_json(const SwarmConfig& c) {
  return {{"n", c.n},
          {"comm_range_d", c.comm_range_d},
          {"spacing_rs", c.spacing_rs},
          {"v_max", c.v_max},
          {"a_max", c.a_max},
          {"dt", c.dt},
          {"target", point_json(c.target)},
          {"arrive_radius", c.arrive_radius},
          {"gains",
           {{"cohesion", c.gains.cohesion},
            {"alignment", c.gains.alignment},
            {"goal", c.gains.goal},
            {"damping", c.gains.damping},
            {"repulsion", c.gains.repulsion},
            {"tangential", c.gains.tangential}}}};
}

json to_json(const RunConfig& cfg) {
  json train = to_json(cfg.train);
  train["layers"] = 2;
  json scenario = {{"arena", rect_json(cfg.scenario.arena)},
                   {"a_range", {cfg.scenario.a_lo, cfg.scenario.a_hi}},
                   {"jammer_region", rect_json(cfg.scenario.jammer_region)},
                   {"speed_range", {cfg.scenario.speed_lo, cfg.scenario.speed_hi}},
                   {"jitter", cfg.scenario.jitter},
                   {"near_fraction", cfg.scenario.near_fraction},
                   {"placement_radius", cfg.scenario.placement_radius}};
  return {{"physics", to_json(cfg.physics)},
          {"jammer", jammer_json(cfg.jammer, cfg.policy)},
          {"scenario", std::move(scenario)},
          {"train", std::move(train)},
          {"episode", episode_params_json(cfg.episode)}};
}

json to_json(const EpisodeConfig& cfg) {
  return {{"physics", to_json(cfg.swarm)},
          {"jammer", jammer_json(cfg.jammer, cfg.policy)},
          {"episode", episode_params_json(cfg.params)}};
}

}  // namespace jamgcn
