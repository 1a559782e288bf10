// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Work files go to ./acceptance_work.

#include "fixtures.hpp"
#include "jamgcn/config.hpp"
#include "jamgcn/datagen.hpp"
#include "jamgcn/episode.hpp"
#include "jamgcn/gcn.hpp"
#include "jamgcn/plot.hpp"
#include "jamgcn/rng.hpp"
#include "oracles.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace jamgcn;

namespace {

using Clock = std::chrono::steady_clock;

const fs::path kWork = "acceptance_work";

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_class(const std::string& svg, const char* cls) {
  const std::string needle = std::string("class=\"") + cls + "\"";
  int n = 0;
  for (auto pos = svg.find(needle); pos != std::string::npos; pos = svg.find(needle, pos + 1)) ++n;
  return n;
}

int failures = 0;

void report(int id, bool ok, double elapsed, double budget, const std::string& detail) {
  ok = ok && (budget <= 0.0 || elapsed < budget);
  if (!ok) ++failures;
  std::ostringstream t;
  t.precision(3);
  t << elapsed;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << " (" << t.str() << " s";
  if (budget > 0.0) std::cout << ", budget " << budget << " s";
  std::cout << ")" << std::endl;
}

void analytic_oracles() {
  const auto start = Clock::now();
  Rng rng(20240601);
  double worst_rt = 0.0, worst_rate = 0.0;
  int rate_checked = 0, rt_checked = 0;
  while (rt_checked < 1000) {
    const JammerField f{rng.uniform(0, 200), rng.uniform(0, 200), rng.uniform(0.6, 1.0), rng.uniform(0.5, 0.99)};
    const DisruptionPolicy pol{rng.uniform(0.05, 0.55)};
    if (pol.p_tau >= f.k) continue;
    const double rt = critical_radius(f, pol);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    worst_rt = std::max(worst_rt, rel_err(probability(f, f.center() + rt * Vec2(std::cos(phi), std::sin(phi))), pol.p_tau));
    worst_rt = std::max(worst_rt, rel_err(rt, std::log(pol.p_tau / f.k) / std::log(f.decay_a)));
    ++rt_checked;
  }
  while (rate_checked < 1000) {
    const JammerField f{rng.uniform(0, 200), rng.uniform(0, 200), rng.uniform(0.2, 1.0), rng.uniform(0.85, 0.98)};
    const Vec2 p(rng.uniform(0, 200), rng.uniform(0, 200));
    const Vec2 v(rng.uniform(-5, 5), rng.uniform(-5, 5));
    if (distance(p, f.center()) < 1.0) continue;
    worst_rate = std::max(worst_rate, rel_err(probability_rate(f, p, v), oracle::probability_rate_fd(f, p, v, 1e-6L)));
    ++rate_checked;
  }
  const JammerField ref{0.0, 0.0, 1.0, 0.9};
  const double closed = rel_err(probability(ref, Vec2(0.0, 24.0)), std::exp(24.0 * std::log(0.9)));
  std::ostringstream d;
  d << "P(r_tau) rel err " << worst_rt << ", rate vs central difference rel err " << worst_rate
    << ", closed form rel err " << closed;
  report(1, worst_rt < 1e-12 && worst_rate < 1e-6 && closed < 1e-12, seconds_since(start), 1.0, d.str());
}

void gradient_check() {
  const auto start = Clock::now();
  Rng rng(77);
  double worst = 0.0;
  std::size_t params = 0;
  for (int b = 0; b < 10; ++b) {
    const GcnParams p = oracle::random_params(rng, 8);
    std::vector<PreparedExample> batch;
    for (int i = 0; i < 4; ++i) batch.push_back(oracle::random_example(rng, 2 + static_cast<int>(rng.below(6))));
    const oracle::GradCheck g = oracle::gradient_check(p, batch, 1e-5);
    worst = std::max(worst, g.max_rel_err);
    params = g.params;
  }
  std::ostringstream d;
  d << "max relative error " << worst << " over " << params << " parameters x 10 batches";
  report(2, worst < 1e-4, seconds_since(start), 30.0, d.str());
}

void permutation_invariance() {
  const auto start = Clock::now();
  Rng rng(4242);
  GcnModel model = init_model(64, 9);
  model.params = oracle::random_params(rng, 64);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(7));
    GraphSnapshot s;
    s.adjacency = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s.adjacency(i, j) = s.adjacency(j, i) = rng.unit() < 0.5 ? 1.0 : 0.0;
    s.features.resize(n, kFeatureDim);
    for (int i = 0; i < n; ++i)
      for (int f = 0; f < kFeatureDim; ++f) s.features(i, f) = rng.uniform(-2.0, 2.0);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) perm(i, order[static_cast<std::size_t>(i)]) = 1.0;
    GraphSnapshot t;
    t.adjacency = perm * s.adjacency * perm.transpose();
    t.features = perm * s.features;
    worst = std::max(worst, (forward(model, s) - forward(model, t)).cwiseAbs().maxCoeff());
  }
  std::ostringstream d;
  d << "max output change " << worst << " over 100 permuted snapshots";
  report(3, worst < 1e-12, seconds_since(start), 5.0, d.str());
}

Dataset make_dataset(std::uint64_t seed, std::size_t n, const GeneratorSetup& setup) {
  Dataset ds;
  ds.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ds.push_back(make_sample(seed + i, setup));
  return ds;
}

GcnModel training(const GeneratorSetup& setup) {
  const auto start = Clock::now();
  const Dataset ds = make_dataset(2024, 10000, setup);
  TrainConfig tc;
  tc.hidden = 64;
  tc.epochs = 300;
  tc.batch_size = 32;
  tc.learning_rate = 1e-3;
  tc.seed = 0;
  bool finite = true;
  TrainResult result;
  try {
    result = train(ds, tc);
  } catch (const std::exception& e) {
    report(4, false, seconds_since(start), 0.0, std::string("training failed: ") + e.what());
    return init_model(64, 0);
  }
  for (const LossPoint& p : result.curve) finite = finite && std::isfinite(p.train_loss) && std::isfinite(p.val_loss);
  double ma = 0.0;
  const std::size_t window = std::min<std::size_t>(20, result.curve.size());
  for (std::size_t i = result.curve.size() - window; i < result.curve.size(); ++i) ma += result.curve[i].val_loss;
  ma /= static_cast<double>(window);
  const double first = result.curve.front().val_loss;
  save_model(result.model, (kWork / "model.json").string());
  save_loss_csv(result.curve, (kWork / "loss.csv").string());
  std::ostringstream d;
  d << "val loss epoch 1 " << first << ", 20-epoch average at epoch " << result.curve.size() << " " << ma
    << " (ratio " << ma / first << "), finite " << (finite ? "yes" : "no");
  const double elapsed = seconds_since(start);
  if (elapsed > 900.0) d << ", over the 15 min target";
  report(4, finite && result.curve.size() == 300 && ma < 0.5 * first, elapsed, 0.0, d.str());
  return result.model;
}

void near_field_accuracy(const GcnModel& model, const GeneratorSetup& setup) {
  const auto start = Clock::now();
  const Dataset test = make_dataset(900000, 2000, setup);
  const EvalReport r = evaluate(model, test);
  const auto& near = r.buckets[2];
  const auto& far = r.buckets[0];
  std::ostringstream d;
  if (!near || !far) {
    d << "a bucket is empty";
    report(5, false, seconds_since(start), 60.0, d.str());
    return;
  }
  d << "position RMSE near " << near->position_rmse_m << " m (" << near->count << "), far " << far->position_rmse_m
    << " m (" << far->count << ")";
  report(5, near->position_rmse_m < far->position_rmse_m, seconds_since(start), 60.0, d.str());
}

void mission_suite(const GcnModel& model) {
  const auto start = Clock::now();
  const EpisodeConfig base = RunConfig{}.episode_config();
  int successes = 0, bad_successes = 0;
  std::ostringstream outcomes;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const EpisodeConfig cfg = crossing_mission(base, 1000 + i, 0.88, 0.95);
    const OutcomeSummary s = episode_outcome(run_episode(cfg, model));
    if (s.outcome == Outcome::success) {
      ++successes;
      if (!(s.min_margin > 0.0) || !s.final_connected) ++bad_successes;
    } else {
      outcomes << " seed " << 1000 + i << ' ' << to_string(s.outcome) << ';';
    }
  }
  std::ostringstream d;
  d << successes << "/20 successes, " << bad_successes << " successes with a breach or split";
  if (!outcomes.str().empty()) d << ", failures:" << outcomes.str();
  report(6, successes >= 18 && bad_successes == 0, seconds_since(start), 600.0, d.str());
}

int cli(const std::string& args) {
  const std::string cmd = "'" JAMGCN_CLI_PATH "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void determinism() {
  const auto start = Clock::now();
  const fs::path dir = kWork / "determinism";
  fs::create_directories(dir);
  bool ran = true;
  for (const char* run : {"a", "b"}) {
    const std::string p = (dir / run).string();
    ran = ran && cli("gen-data --n 300 --seed 11 --out " + p + "_data.jsonl") == 0;
    ran = ran && cli("train --data " + p + "_data.jsonl --out-model " + p + "_model.json --loss-csv " + p +
                     "_loss.csv --epochs 5 --hidden 16 --seed 3") == 0;
    const int sim = cli("simulate --model " + p + "_model.json --seed 5 --out-traj " + p + "_traj.jsonl");
    ran = ran && (sim == 0 || sim == 5 || sim == 6);
  }
  bool same = ran;
  std::ostringstream d;
  for (const char* name : {"_data.jsonl", "_model.json", "_traj.jsonl"}) {
    const std::string a = slurp(dir / (std::string("a") + name));
    const std::string b = slurp(dir / (std::string("b") + name));
    const bool eq = !a.empty() && a == b;
    same = same && eq;
    d << name + 1 << (eq ? " identical" : " differs") << ", ";
  }
  d << "commands " << (ran ? "ran" : "failed");
  report(7, same, seconds_since(start), 0.0, d.str());
}

void plot_contract() {
  const auto start = Clock::now();
  const fs::path dir = kWork / "plots";
  fs::remove_all(dir);
  const auto files = plot_trajectory(fixture::straight_flight(80.0), dir.string(), 10.0);
  bool ok = files.size() == 9;
  for (const auto& f : files) {
    const std::string svg = slurp(f);
    ok = ok && count_class(svg, svg_class::kTrueDisk) == 1 && count_class(svg, svg_class::kPredicted) == 1 &&
         count_class(svg, svg_class::kUav) == 6 && count_class(svg, svg_class::kTarget) == 1;
  }
  std::ostringstream d;
  d << files.size() << " SVGs, element counts " << (ok ? "match" : "do not match");
  report(8, ok, seconds_since(start), 0.0, d.str());
}

}  // namespace

int main() {
  fs::create_directories(kWork);
  const GeneratorSetup setup = RunConfig{}.generator();
  analytic_oracles();
  gradient_check();
  permutation_invariance();
  const GcnModel model = training(setup);
  near_field_accuracy(model, setup);
  mission_suite(model);
  determinism();
  plot_contract();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
