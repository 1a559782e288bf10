#pragma once

#include "jamgcn/geometry.hpp"
#include "jamgcn/jamfield.hpp"
#include "jamgcn/sample.hpp"
#include "jamgcn/swarm.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace jamgcn {

struct Rect {
  Vec2 lo = Vec2::Zero();
  Vec2 hi = Vec2::Zero();

  bool contains(const Vec2& p) const {
    return p.x() >= lo.x() && p.x() <= hi.x() && p.y() >= lo.y() && p.y() <= hi.y();
  }
};

struct ScenarioRanges {
  Rect arena{Vec2(0.0, 0.0), Vec2(200.0, 200.0)};
  double a_lo = 0.85;
  double a_hi = 0.98;
  Rect jammer_region{Vec2(50.0, 50.0), Vec2(150.0, 150.0)};
  double speed_lo = 0.0;
  double speed_hi = 5.0;
  double jitter = 2.0;  // per-coordinate, meters
  // With probability near_fraction the formation centroid is drawn uniformly
  // from the disk of radius placement_radius around the jammer; otherwise
  // uniformly from the arena.
  double near_fraction = 1.0;
  double placement_radius = 60.0;

  void validate() const;
};

struct Scenario {
  JammerField field;
  Swarm swarm;
};

/// Everything the sampler needs besides the seed.
struct GeneratorSetup {
  ScenarioRanges ranges;
  SwarmConfig swarm;
  DisruptionPolicy policy;
};

inline constexpr int kMaxPlacementTries = 100;

/// Jammer uniform in jammer_region, A uniform in [a_lo, a_hi], k = 1, and a
/// jittered triangular formation with a common velocity, resampled until every
/// UAV is outside the disruption disk. Throws ConfigError("ranges
/// incompatible") after kMaxPlacementTries rejections.
Scenario sample_scenario(std::uint64_t seed, const GeneratorSetup& setup);

Sample make_sample(std::uint64_t scenario_seed, const GeneratorSetup& setup);

nlohmann::json to_json(const ScenarioRanges& ranges);
nlohmann::json sample_to_json(const Sample& sample);
Sample sample_from_json(const nlohmann::json& line);

/// Writes the samples with scenario seeds base_seed + first .. base_seed + first + count - 1,
/// one JSON object per line.
void write_samples(std::ostream& out, std::uint64_t base_seed, std::uint64_t first,
                   std::uint64_t count, const GeneratorSetup& setup);

/// Header line plus n samples. first_index selects a shard; a shard header
/// records it as "first_index".
void generate_dataset(std::uint64_t n, std::uint64_t seed, const GeneratorSetup& setup,
                      const std::string& out_path, std::uint64_t first_index = 0);

struct LoadedDataset {
  nlohmann::json header;
  Dataset samples;
};

LoadedDataset read_dataset(const std::string& path);

}  // namespace jamgcn
