#include <doctest.h>

#include "jamgcn/datagen.hpp"
#include "jamgcn/error.hpp"

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace jamgcn;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("jamgcn_test_datagen_" + name)).string();
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("scenario sampling is deterministic and respects the ranges") {
  GeneratorSetup setup;
  const Scenario a = sample_scenario(1234, setup);
  const Scenario b = sample_scenario(1234, setup);
  CHECK(a.field.pos_x == b.field.pos_x);
  CHECK(a.field.decay_a == b.field.decay_a);
  REQUIRE(a.swarm.size() == b.swarm.size());
  for (std::size_t i = 0; i < a.swarm.size(); ++i) {
    CHECK(a.swarm[i].pos == b.swarm[i].pos);
    CHECK(a.swarm[i].vel == b.swarm[i].vel);
  }

  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Scenario s = sample_scenario(seed, setup);
    CHECK(s.field.k == 1.0);
    CHECK(setup.ranges.jammer_region.contains(s.field.center()));
    CHECK(s.field.decay_a >= setup.ranges.a_lo);
    CHECK(s.field.decay_a <= setup.ranges.a_hi);
    CHECK(s.swarm.size() == 6);
    const double rt = critical_radius(s.field, setup.policy);
    for (const UavState& u : s.swarm) {
      CHECK(distance(u.pos, s.field.center()) > rt);
      CHECK_FALSE(u.disrupted);
      CHECK(u.vel == s.swarm[0].vel);
      CHECK(u.vel.norm() <= setup.ranges.speed_hi + 1e-12);
    }
  }
}

TEST_CASE("mean decay constant over 1000 scenarios") {
  GeneratorSetup setup;
  double sum = 0.0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) sum += sample_scenario(seed, setup).field.decay_a;
  const double mean = sum / 1000.0;
  CHECK(mean >= 0.905);
  CHECK(mean <= 0.925);
}

TEST_CASE("label coverage reaches every decile") {
  GeneratorSetup setup;
  std::array<int, 10> a{}, x{}, y{};
  auto decile = [](double v, double lo, double hi) {
    return std::min(9, static_cast<int>((v - lo) / (hi - lo) * 10.0));
  };
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const Scenario s = sample_scenario(seed, setup);
    ++a[decile(s.field.decay_a, setup.ranges.a_lo, setup.ranges.a_hi)];
    ++x[decile(s.field.pos_x, 50.0, 150.0)];
    ++y[decile(s.field.pos_y, 50.0, 150.0)];
  }
  for (int i = 0; i < 10; ++i) {
    CHECK(a[i] > 0);
    CHECK(x[i] > 0);
    CHECK(y[i] > 0);
  }
}

TEST_CASE("incompatible ranges are reported") {
  GeneratorSetup setup;
  setup.ranges.a_lo = setup.ranges.a_hi = 0.999;
  setup.ranges.placement_radius = 1.0;
  CHECK_THROWS_WITH_AS(sample_scenario(1, setup), "ranges incompatible", ConfigError);
}

TEST_CASE("range validation") {
  ScenarioRanges r;
  CHECK_NOTHROW(r.validate());
  r.a_hi = 1.0;
  CHECK_THROWS_AS(r.validate(), ConfigError);
  r = ScenarioRanges{};
  r.jammer_region = Rect{Vec2(-10, 0), Vec2(50, 50)};
  CHECK_THROWS_AS(r.validate(), ConfigError);
  r = ScenarioRanges{};
  r.near_fraction = 1.5;
  CHECK_THROWS_AS(r.validate(), ConfigError);
}

TEST_CASE("arena-uniform placement keeps formations in the arena neighbourhood") {
  GeneratorSetup setup;
  setup.ranges.near_fraction = 0.0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Scenario s = sample_scenario(seed, setup);
    Vec2 c = Vec2::Zero();
    for (const UavState& u : s.swarm) c += u.pos;
    c /= 6.0;
    CHECK(c.x() >= -setup.ranges.jitter);
    CHECK(c.x() <= 200.0 + setup.ranges.jitter);
  }
}

TEST_CASE("sample JSON round trip") {
  GeneratorSetup setup;
  const Sample s = make_sample(77, setup);
  const nlohmann::json j = sample_to_json(s);
  CHECK(j["features"].size() == 6);
  CHECK(j["features"][0].size() == 6);
  CHECK(j["adjacency"].size() == 6);
  CHECK(j["meta"]["scenario_seed"] == 77);
  const Sample back = sample_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.snapshot.features == s.snapshot.features);
  CHECK(back.snapshot.adjacency == s.snapshot.adjacency);
  CHECK(back.label == s.label);
  CHECK(back.scenario_seed == 77);

  nlohmann::json bad = j;
  bad["features"][2].erase(0);
  CHECK_THROWS(sample_from_json(bad));
}

TEST_CASE("dataset files are byte deterministic and shardable") {
  GeneratorSetup setup;
  const std::string one = temp_path("a.jsonl"), two = temp_path("b.jsonl");
  generate_dataset(100, 7, setup, one);
  generate_dataset(100, 7, setup, two);
  CHECK(slurp(one) == slurp(two));

  const auto full = read_lines(one);
  REQUIRE(full.size() == 101);
  const nlohmann::json header = nlohmann::json::parse(full[0]);
  CHECK(header["version"] == 1);
  CHECK(header["n"] == 100);
  CHECK(header["seed"] == 7);
  CHECK(header.contains("ranges"));

  const std::string s0 = temp_path("s0.jsonl"), s1 = temp_path("s1.jsonl");
  generate_dataset(50, 7, setup, s0, 0);
  generate_dataset(50, 7, setup, s1, 50);
  auto l0 = read_lines(s0), l1 = read_lines(s1);
  CHECK(nlohmann::json::parse(l1[0])["first_index"] == 50);
  std::vector<std::string> joined(l0.begin() + 1, l0.end());
  joined.insert(joined.end(), l1.begin() + 1, l1.end());
  CHECK(joined == std::vector<std::string>(full.begin() + 1, full.end()));

  const LoadedDataset loaded = read_dataset(one);
  REQUIRE(loaded.samples.size() == 100);
  CHECK(loaded.samples[3].scenario_seed == 10);
  CHECK(loaded.samples[3].label == make_sample(10, setup).label);

  for (const auto& p : {one, two, s0, s1}) std::remove(p.c_str());
}

TEST_CASE("dataset I/O errors") {
  GeneratorSetup setup;
  CHECK_THROWS_AS(generate_dataset(5, 1, setup, "/nonexistent-dir/x.jsonl"), IoError);
  CHECK_THROWS_AS(read_dataset(temp_path("missing.jsonl")), IoError);
  const std::string bad = temp_path("bad.jsonl");
  {
    std::ofstream out(bad);
    out << "{\"version\":1,\"n\":1,\"seed\":0}\n{not json\n";
  }
  CHECK_THROWS_AS(read_dataset(bad), IoError);
  std::remove(bad.c_str());
}
