#include "jamgcn/datagen.hpp"

#include "jamgcn/error.hpp"
#include "jamgcn/graph.hpp"
#include "jamgcn/rng.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace jamgcn {

namespace {

bool valid_rect(const Rect& r) {
  return is_finite(r.lo) && is_finite(r.hi) && r.lo.x() <= r.hi.x() && r.lo.y() <= r.hi.y();
}

nlohmann::json rect_json(const Rect& r) {
  return {{"min", {r.lo.x(), r.lo.y()}}, {"max", {r.hi.x(), r.hi.y()}}};
}

}  // namespace

void ScenarioRanges::validate() const {
  if (!valid_rect(arena)) throw ConfigError("scenario arena must be a nonempty rectangle");
  if (!valid_rect(jammer_region)) throw ConfigError("jammer region must be a nonempty rectangle");
  if (!arena.contains(jammer_region.lo) || !arena.contains(jammer_region.hi))
    throw ConfigError("jammer region must lie inside the arena");
  if (!(a_lo > 0.0 && a_hi < 1.0 && a_lo <= a_hi))
    throw ConfigError("A range must lie strictly inside (0, 1)");
  if (!(speed_lo >= 0.0 && speed_lo <= speed_hi)) throw ConfigError("invalid speed range");
  if (!(jitter >= 0.0)) throw ConfigError("jitter must be non-negative");
  if (!(placement_radius > 0.0)) throw ConfigError("placement_radius must be positive");
  if (!(near_fraction >= 0.0 && near_fraction <= 1.0)) throw ConfigError("near_fraction must lie in [0, 1]");
}

Scenario sample_scenario(std::uint64_t seed, const GeneratorSetup& setup) {
  const ScenarioRanges& rg = setup.ranges;
  Rng rng(seed);
  Scenario sc;
  sc.field.pos_x = rng.uniform(rg.jammer_region.lo.x(), rg.jammer_region.hi.x());
  sc.field.pos_y = rng.uniform(rg.jammer_region.lo.y(), rg.jammer_region.hi.y());
  sc.field.k = 1.0;
  sc.field.decay_a = rng.uniform(rg.a_lo, rg.a_hi);
  const double r_tau = critical_radius(sc.field, setup.policy);

  for (int attempt = 0; attempt < kMaxPlacementTries; ++attempt) {
    Vec2 centroid;
    if (rng.unit() < rg.near_fraction) {
      const double rho = rg.placement_radius * std::sqrt(rng.unit());
      const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
      centroid = sc.field.center() + rho * Vec2(std::cos(phi), std::sin(phi));
    } else {
      centroid = Vec2(rng.uniform(rg.arena.lo.x(), rg.arena.hi.x()),
                      rng.uniform(rg.arena.lo.y(), rg.arena.hi.y()));
    }
    const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double speed = rng.uniform(rg.speed_lo, std::min(rg.speed_hi, setup.swarm.v_max));
    const Vec2 vel = speed * Vec2(std::cos(heading), std::sin(heading));

    const auto slots = triangular_formation(setup.swarm.n, setup.swarm.spacing_rs, centroid, heading);
    Swarm swarm;
    bool safe = true;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      UavState u;
      u.id = static_cast<int>(i);
      u.pos = slots[i] + Vec2(rng.uniform(-rg.jitter, rg.jitter), rng.uniform(-rg.jitter, rg.jitter));
      u.vel = vel;
      safe = safe && distance(u.pos, sc.field.center()) > r_tau;
      swarm.push_back(u);
    }
    if (safe) {
      sc.swarm = std::move(swarm);
      return sc;
    }
  }
  throw ConfigError("ranges incompatible");
}

Sample make_sample(std::uint64_t scenario_seed, const GeneratorSetup& setup) {
  const Scenario sc = sample_scenario(scenario_seed, setup);
  Sample s;
  s.snapshot = build_snapshot(sc.swarm, sc.field, setup.swarm.comm_range_d);
  s.label = LabelVec(sc.field.pos_x, sc.field.pos_y, sc.field.decay_a);
  s.scenario_seed = scenario_seed;
  return s;
}

nlohmann::json to_json(const ScenarioRanges& r) {
  return {{"arena", rect_json(r.arena)},
          {"a_range", {r.a_lo, r.a_hi}},
          {"jammer_region", rect_json(r.jammer_region)},
          {"speed_range", {r.speed_lo, r.speed_hi}},
          {"jitter", r.jitter},
          {"near_fraction", r.near_fraction},
          {"placement_radius", r.placement_radius}};
}

nlohmann::json sample_to_json(const Sample& s) {
  const Eigen::MatrixXd& a = s.snapshot.adjacency;
  const Eigen::MatrixXd& x = s.snapshot.features;
  nlohmann::json adj = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j) != 0.0 ? 1 : 0);
    adj.push_back(std::move(row));
  }
  nlohmann::json feats = nlohmann::json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < x.cols(); ++j) row.push_back(x(i, j));
    feats.push_back(std::move(row));
  }
  return {{"adjacency", std::move(adj)},
          {"features", std::move(feats)},
          {"label", {{"xj", s.label[0]}, {"yj", s.label[1]}, {"a", s.label[2]}}},
          {"meta", {{"scenario_seed", s.scenario_seed}}}};
}

Sample sample_from_json(const nlohmann::json& line) {
  Sample s;
  const auto& adj = line.at("adjacency");
  const auto& feats = line.at("features");
  const auto n = static_cast<Eigen::Index>(feats.size());
  if (n == 0 || static_cast<Eigen::Index>(adj.size()) != n)
    throw std::invalid_argument("sample: adjacency and features disagree on node count");
  s.snapshot.adjacency.resize(n, n);
  s.snapshot.features.resize(n, kFeatureDim);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& arow = adj[static_cast<std::size_t>(i)];
    const auto& frow = feats[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(arow.size()) != n || frow.size() != kFeatureDim)
      throw std::invalid_argument("sample: ragged matrix row");
    for (Eigen::Index j = 0; j < n; ++j) s.snapshot.adjacency(i, j) = arow[static_cast<std::size_t>(j)].get<int>();
    for (int j = 0; j < kFeatureDim; ++j) s.snapshot.features(i, j) = frow[static_cast<std::size_t>(j)].get<double>();
  }
  const auto& lab = line.at("label");
  s.label = LabelVec(lab.at("xj").get<double>(), lab.at("yj").get<double>(), lab.at("a").get<double>());
  s.scenario_seed = line.at("meta").at("scenario_seed").get<std::uint64_t>();
  return s;
}

void write_samples(std::ostream& out, std::uint64_t base_seed, std::uint64_t first,
                   std::uint64_t count, const GeneratorSetup& setup) {
  for (std::uint64_t i = first; i < first + count; ++i)
    out << sample_to_json(make_sample(base_seed + i, setup)).dump() << '\n';
}

void generate_dataset(std::uint64_t n, std::uint64_t seed, const GeneratorSetup& setup,
                      const std::string& out_path, std::uint64_t first_index) {
  if (n < 1) throw ConfigError("generate_dataset: n must be >= 1");
  setup.ranges.validate();
  setup.swarm.validate();
  setup.policy.validate();
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw IoError("cannot open dataset for writing: " + out_path);
  nlohmann::json header{{"version", 1}, {"n", n}, {"seed", seed}, {"ranges", to_json(setup.ranges)}};
  if (first_index != 0) header["first_index"] = first_index;
  out << header.dump() << '\n';
  write_samples(out, seed, first_index, n, setup);
  out.flush();
  if (!out) throw IoError("failed writing dataset: " + out_path);
}

LoadedDataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset: " + path);
  LoadedDataset ds;
  std::string line;
  std::size_t line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      auto doc = nlohmann::json::parse(line);
      if (line_no == 1) {
        if (!doc.contains("version")) throw IoError("dataset header missing version");
        ds.header = std::move(doc);
        continue;
      }
      ds.samples.push_back(sample_from_json(doc));
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(path + ":" + std::to_string(line_no) + ": " + e.what());
  }
  if (line_no == 0) throw IoError("empty dataset file: " + path);
  return ds;
}

}  // namespace jamgcn
