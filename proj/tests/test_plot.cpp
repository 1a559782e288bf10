#include <doctest.h>

#include "fixtures.hpp"
#include "jamgcn/error.hpp"
#include "jamgcn/plot.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace jamgcn;
namespace fs = std::filesystem;

namespace {

int count_class(const std::string& svg, const char* cls) {
  const std::string needle = std::string("class=\"") + cls + "\"";
  int n = 0;
  for (auto pos = svg.find(needle); pos != std::string::npos; pos = svg.find(needle, pos + 1)) ++n;
  return n;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("jamgcn_test_plot_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("scene elements by class") {
  const TrajectoryLog log = fixture::straight_flight(20.0);
  const std::string svg = render_scene_svg(log, &log.ticks[50]);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count_class(svg, svg_class::kTrueDisk) == 1);
  CHECK(count_class(svg, svg_class::kPredicted) == 1);
  CHECK(count_class(svg, svg_class::kUav) == 6);
  CHECK(count_class(svg, svg_class::kTarget) == 1);
  CHECK(count_class(svg, svg_class::kLink) == 5);
  CHECK(count_class(svg, svg_class::kContour) == 9);
}

TEST_CASE("snapshots are written every ten seconds") {
  const TrajectoryLog log = fixture::straight_flight(80.0);
  const fs::path dir = fresh_dir("snap");
  const auto files = plot_trajectory(log, dir.string(), 10.0);
  REQUIRE(files.size() == 9);
  CHECK(fs::path(files.front()).filename() == "snapshot_0000.svg");
  CHECK(fs::path(files.back()).filename() == "snapshot_0080.svg");
  for (const auto& f : files) {
    const std::string svg = slurp(f);
    CHECK(count_class(svg, svg_class::kTrueDisk) == 1);
    CHECK(count_class(svg, svg_class::kPredicted) == 1);
    CHECK(count_class(svg, svg_class::kUav) == 6);
    CHECK(count_class(svg, svg_class::kTarget) == 1);
  }
  CHECK(plot_trajectory(log, dir.string(), 40.0).size() == 3);
  CHECK_THROWS_AS(plot_trajectory(log, dir.string(), 0.0), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("a log without ticks still renders the start") {
  TrajectoryLog log = fixture::straight_flight(1.0);
  log.config["start_positions"] = {{30, 100}, {40, 100}, {50, 100}};
  log.ticks.clear();
  log.terminal.reset();
  const fs::path dir = fresh_dir("empty");
  const auto files = plot_trajectory(log, dir.string(), 10.0);
  REQUIRE(files.size() == 1);
  const std::string svg = slurp(files[0]);
  CHECK(count_class(svg, svg_class::kUav) == 3);
  CHECK(count_class(svg, svg_class::kPredicted) == 0);
  CHECK(count_class(svg, svg_class::kTrueDisk) == 1);
  fs::remove_all(dir);
}

TEST_CASE("loss curve CSV and SVG") {
  const fs::path dir = fresh_dir("loss");
  fs::create_directories(dir);
  const std::string csv = (dir / "loss.csv").string();
  {
    std::ofstream out(csv);
    out << "epoch,train_loss,val_loss\n1,0.5,0.4\n2,0.3,0.35\n3,0.2,0.3\n";
  }
  const auto curve = read_loss_csv(csv);
  REQUIRE(curve.size() == 3);
  CHECK(curve[1].epoch == 2);
  CHECK(curve[1].val_loss == 0.35);
  const std::string svg = render_loss_svg(curve);
  CHECK(count_class(svg, "train-loss") == 1);
  CHECK(count_class(svg, "val-loss") == 1);
  CHECK(count_class(render_loss_svg({}), "train-loss") == 0);

  {
    std::ofstream out(csv);
    out << "epoch;train;val\n";
  }
  CHECK_THROWS_AS(read_loss_csv(csv), IoError);
  {
    std::ofstream out(csv);
    out << "epoch,train_loss,val_loss\n1,0.5\n";
  }
  CHECK_THROWS_AS(read_loss_csv(csv), IoError);
  CHECK_THROWS_AS(read_loss_csv((dir / "missing.csv").string()), IoError);
  fs::remove_all(dir);
}
