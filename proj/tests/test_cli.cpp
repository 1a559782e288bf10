#include <doctest.h>

#include "jamgcn/gcn.hpp"

#include <json.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Workspace {
 public:
  Workspace() : dir_(fs::temp_directory_path() / "jamgcn_test_cli") {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Run run(const std::string& args) const {
    const std::string cmd = "cd '" + dir_.string() + "' && '" JAMGCN_CLI_PATH "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(dir_ / "stdout.txt");
    return r;
  }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name, std::ios::binary) << text;
  }

 private:
  fs::path dir_;
};

nlohmann::json summary(const Run& r) { return nlohmann::json::parse(r.out); }

// A model that always predicts the given physical-unit label.
void save_constant_model(const std::string& path, double x, double y, double a) {
  jamgcn::GcnModel m = jamgcn::init_model(4, 0);
  m.params = jamgcn::GcnParams::zeros(4);
  m.params.b_out << x, y, a;
  jamgcn::save_model(m, path);
}

}  // namespace

TEST_CASE("help and argument errors") {
  Workspace ws;
  CHECK(ws.run("--help").code == 0);
  CHECK(ws.run("train --help").code == 0);
  CHECK(ws.run("").code == 2);
  CHECK(ws.run("frobnicate").code == 2);
  CHECK(ws.run("gen-data --out x.jsonl").code == 2);
  CHECK(ws.run("gen-data --n 0 --out x.jsonl").code == 2);
  CHECK(ws.run("gen-data --n ten --out x.jsonl").code == 2);
}

TEST_CASE("config errors and missing files") {
  Workspace ws;
  ws.write("bad.json", R"({"physics": {"warp": 9}})");
  CHECK(ws.run("gen-data --n 5 --config bad.json --out x.jsonl").code == 2);
  ws.write("layers.json", R"({"train": {"layers": 3}})");
  CHECK(ws.run("gen-data --n 5 --config layers.json --out x.jsonl").code == 2);
  CHECK(ws.run("gen-data --n 5 --config missing.json --out x.jsonl").code == 3);
  CHECK(ws.run("gen-data --n 5 --out /nonexistent-dir/x.jsonl").code == 3);
  CHECK(ws.run("train --data missing.jsonl --out-model m.json --loss-csv l.csv").code == 3);
  CHECK(ws.run("simulate --model missing.json --out-traj t.jsonl").code == 3);
  CHECK(ws.run("plot --traj missing.jsonl --out-dir plots").code == 3);
}

TEST_CASE("data, training and evaluation") {
  Workspace ws;
  Run r = ws.run("gen-data --n 60 --seed 5 --out d.jsonl");
  REQUIRE(r.code == 0);
  CHECK(summary(r)["command"] == "gen-data");
  CHECK(summary(r)["samples"] == 60);

  r = ws.run("train --data d.jsonl --out-model m.json --loss-csv l.csv --epochs 4 --hidden 8 --seed 1");
  REQUIRE(r.code == 0);
  const auto s = summary(r);
  CHECK(s["epochs"] == 4);
  CHECK(s["final_val_loss"].is_number());
  CHECK(fs::exists(ws.path("m.json")));
  CHECK(slurp(ws.path("l.csv")).rfind("epoch,train_loss,val_loss\n", 0) == 0);

  r = ws.run("eval --model m.json --data d.jsonl --report report.json");
  REQUIRE(r.code == 0);
  CHECK(summary(r)["mse_overall"].is_number());
  const auto report = nlohmann::json::parse(slurp(ws.path("report.json")));
  CHECK(report["count"] == 60);
  CHECK(report["buckets"].size() == 3);

  r = ws.run("train --data d.jsonl --out-model bad.json --loss-csv bad.csv --epochs 3 --hidden 8 --lr 1e300");
  CHECK(r.code == 4);
  CHECK_FALSE(fs::exists(ws.path("bad.json")));
}

TEST_CASE("simulation outcomes map to exit codes") {
  Workspace ws;
  save_constant_model(ws.path("far.json"), 10000, 10000, 0.9);

  ws.write("control.json", R"({"jammer": {"x": 10000, "y": 10000}})");
  Run r = ws.run("simulate --model far.json --config control.json --out-traj ok.jsonl");
  CHECK(r.code == 0);
  CHECK(summary(r)["outcome"] == "success");
  CHECK(summary(r)["final_connected"] == true);

  ws.write("blind.json", R"({"jammer": {"a": 0.95}})");
  r = ws.run("simulate --model far.json --config blind.json --out-traj hit.jsonl");
  CHECK(r.code == 5);
  CHECK(summary(r)["outcome"] == "disruption_failure");

  ws.write("short.json", R"({"jammer": {"x": 10000, "y": 10000}, "episode": {"timeout": 3}})");
  r = ws.run("simulate --model far.json --config short.json --out-traj slow.jsonl");
  CHECK(r.code == 6);
  CHECK(summary(r)["outcome"] == "timeout");

  r = ws.run("plot --traj ok.jsonl --out-dir plots");
  REQUIRE(r.code == 0);
  const int snapshots = summary(r)["snapshots"];
  CHECK(snapshots > 0);
  CHECK(fs::exists(ws.path("plots/snapshot_0000.svg")));
}
