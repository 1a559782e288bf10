#pragma once

#include "jamgcn/datagen.hpp"
#include "jamgcn/episode.hpp"
#include "jamgcn/gcn.hpp"
#include "jamgcn/jamfield.hpp"
#include "jamgcn/swarm.hpp"

#include <json.hpp>

#include <string>

namespace jamgcn {

/// Every tunable of the pipeline. JSON sections: "physics", "jammer",
/// "scenario", "train", "episode". Omitted keys keep their defaults; unknown
/// keys are rejected with ConfigError.
struct RunConfig {
  SwarmConfig physics;
  JammerField jammer{100.0, 100.0, 1.0, 0.9};
  DisruptionPolicy policy;
  ScenarioRanges scenario;
  TrainConfig train;
  EpisodeParams episode;

  void validate() const;
  GeneratorSetup generator() const;
  EpisodeConfig episode_config() const;
};

RunConfig run_config_from_json(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const SwarmConfig& cfg);
nlohmann::json to_json(const EpisodeConfig& cfg);

}  // namespace jamgcn
