// Command-line driver: dataset generation, training, evaluation, closed-loop
// simulation and SVG plotting. stdout carries one JSON summary line; stderr
// carries diagnostics.

#include "jamgcn/config.hpp"
#include "jamgcn/datagen.hpp"
#include "jamgcn/episode.hpp"
#include "jamgcn/error.hpp"
#include "jamgcn/gcn.hpp"
#include "jamgcn/plot.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitDiverged = 4;
constexpr int kExitDisrupted = 5;
constexpr int kExitTimeout = 6;

using jamgcn::RunConfig;

RunConfig resolve_config(const std::string& path) {
  return path.empty() ? RunConfig{} : jamgcn::load_run_config(path);
}

void summary(const nlohmann::json& j) { std::cout << j.dump() << std::endl; }

struct GenDataArgs {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::uint64_t first_index = 0;
  std::string config, out;
};

int run_gen_data(const GenDataArgs& a) {
  const RunConfig cfg = resolve_config(a.config);
  jamgcn::generate_dataset(a.n, a.seed, cfg.generator(), a.out, a.first_index);
  summary({{"command", "gen-data"}, {"samples", a.n}, {"seed", a.seed}, {"out", a.out}});
  return kExitOk;
}

struct TrainArgs {
  std::string data, out_model, loss_csv, config;
  int epochs = 0, batch_size = 0, hidden = 0;
  double lr = 0.0;
  std::uint64_t seed = 0;
  CLI::Option *epochs_opt = nullptr, *batch_opt = nullptr, *lr_opt = nullptr, *seed_opt = nullptr,
              *hidden_opt = nullptr;
};

int run_train(const TrainArgs& a) {
  RunConfig cfg = resolve_config(a.config);
  jamgcn::TrainConfig tc = cfg.train;
  if (a.epochs_opt->count()) tc.epochs = a.epochs;
  if (a.batch_opt->count()) tc.batch_size = a.batch_size;
  if (a.lr_opt->count()) tc.learning_rate = a.lr;
  if (a.seed_opt->count()) tc.seed = a.seed;
  if (a.hidden_opt->count()) tc.hidden = a.hidden;
  tc.validate();

  const jamgcn::LoadedDataset ds = jamgcn::read_dataset(a.data);
  std::cerr << "training on " << ds.samples.size() << " samples, hidden " << tc.hidden << ", " << tc.epochs
            << " epochs, batch " << tc.batch_size << ", lr " << tc.learning_rate << '\n';
  const auto result = jamgcn::train(ds.samples, tc, [](const jamgcn::LossPoint& p) {
    if (p.epoch == 1 || p.epoch % 10 == 0)
      std::cerr << "epoch " << p.epoch << " train " << p.train_loss << " val " << p.val_loss << '\n';
  });
  jamgcn::save_model(result.model, a.out_model);
  jamgcn::save_loss_csv(result.curve, a.loss_csv);
  nlohmann::json out{{"command", "train"}, {"model", a.out_model}, {"loss_csv", a.loss_csv}, {"epochs", tc.epochs}};
  if (!result.curve.empty()) {
    out["final_train_loss"] = result.curve.back().train_loss;
    out["final_val_loss"] = result.curve.back().val_loss;
  } else {
    out["final_train_loss"] = nullptr;
    out["final_val_loss"] = nullptr;
  }
  summary(out);
  return kExitOk;
}

struct EvalArgs {
  std::string model, data, report, config;
};

int run_eval(const EvalArgs& a) {
  if (!a.config.empty()) resolve_config(a.config);
  const jamgcn::GcnModel model = jamgcn::load_model(a.model);
  const jamgcn::LoadedDataset ds = jamgcn::read_dataset(a.data);
  if (ds.samples.empty()) throw jamgcn::ConfigError("evaluation dataset has no samples");
  const nlohmann::json report = jamgcn::to_json(jamgcn::evaluate(model, ds.samples));
  std::ofstream out(a.report, std::ios::binary);
  if (!out) throw jamgcn::IoError("cannot write report " + a.report);
  out << report.dump(2) << '\n';
  if (!out) throw jamgcn::IoError("failed writing report " + a.report);
  summary({{"command", "eval"},
           {"report", a.report},
           {"mse_overall", report["mse_overall"]},
           {"position_rmse_m", report["position_rmse_m"]},
           {"a_mae", report["a_mae"]}});
  return kExitOk;
}

struct SimulateArgs {
  std::string model, config, out_traj;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

int run_simulate(const SimulateArgs& a) {
  const RunConfig cfg = resolve_config(a.config);
  jamgcn::EpisodeConfig ec = cfg.episode_config();
  if (a.seed_opt->count()) ec.params.seed = a.seed;
  const jamgcn::GcnModel model = jamgcn::load_model(a.model);
  const jamgcn::TrajectoryLog log = jamgcn::run_episode(ec, model);
  jamgcn::write_trajectory(log, a.out_traj);
  const jamgcn::OutcomeSummary s = jamgcn::episode_outcome(log);
  summary({{"command", "simulate"},
           {"outcome", jamgcn::to_string(s.outcome)},
           {"t_final", s.t_final},
           {"min_margin", s.min_margin},
           {"final_connected", s.final_connected},
           {"out", a.out_traj}});
  switch (s.outcome) {
    case jamgcn::Outcome::success: return kExitOk;
    case jamgcn::Outcome::disruption_failure: return kExitDisrupted;
    case jamgcn::Outcome::timeout: return kExitTimeout;
  }
  return kExitTimeout;
}

struct PlotArgs {
  std::string traj, out_dir, loss_csv, config;
  double snapshot_every = 10.0;
  CLI::Option* every_opt = nullptr;
};

int run_plot(const PlotArgs& a) {
  double every = a.snapshot_every;
  if (!a.config.empty() && !a.every_opt->count()) every = resolve_config(a.config).episode.snapshot_interval;
  const jamgcn::TrajectoryLog log = jamgcn::read_trajectory(a.traj);
  auto files = jamgcn::plot_trajectory(log, a.out_dir, every);
  nlohmann::json out{{"command", "plot"}, {"snapshots", files.size()}, {"out_dir", a.out_dir}};
  if (!a.loss_csv.empty()) {
    const auto path = (std::filesystem::path(a.out_dir) / "loss.svg").string();
    std::ofstream f(path, std::ios::binary);
    if (!f) throw jamgcn::IoError("cannot write " + path);
    f << jamgcn::render_loss_svg(jamgcn::read_loss_csv(a.loss_csv));
    out["loss_svg"] = path;
  }
  summary(out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jammer localization with a graph convolutional network and anti-jamming swarm control"};
  app.require_subcommand(1);

  GenDataArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a labeled JSONL dataset");
  gen_cmd->add_option("--n", gen.n, "Number of samples")->required()->check(CLI::PositiveNumber);
  gen_cmd->add_option("--seed", gen.seed, "Base seed; sample i uses seed + i");
  gen_cmd->add_option("--first-index", gen.first_index, "First sample index (sharding)");
  gen_cmd->add_option("--config", gen.config, "Run config JSON");
  gen_cmd->add_option("--out", gen.out, "Output JSONL path")->required();

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train the GCN on a dataset");
  train_cmd->add_option("--data", tr.data, "Dataset JSONL")->required();
  train_cmd->add_option("--out-model", tr.out_model, "Model JSON output")->required();
  train_cmd->add_option("--loss-csv", tr.loss_csv, "Loss curve CSV output")->required();
  train_cmd->add_option("--config", tr.config, "Run config JSON");
  tr.epochs_opt = train_cmd->add_option("--epochs", tr.epochs, "Epochs (default 1000)");
  tr.batch_opt = train_cmd->add_option("--batch-size", tr.batch_size, "Batch size (default 32)");
  tr.lr_opt = train_cmd->add_option("--lr", tr.lr, "Learning rate (default 0.001)");
  tr.seed_opt = train_cmd->add_option("--seed", tr.seed, "Split/init/shuffle seed");
  tr.hidden_opt = train_cmd->add_option("--hidden", tr.hidden, "Hidden width (default 64)");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a model on a dataset");
  eval_cmd->add_option("--model", ev.model, "Model JSON")->required();
  eval_cmd->add_option("--data", ev.data, "Dataset JSONL")->required();
  eval_cmd->add_option("--report", ev.report, "Report JSON output")->required();
  eval_cmd->add_option("--config", ev.config, "Run config JSON");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one closed-loop mission");
  sim_cmd->add_option("--model", sim.model, "Model JSON")->required();
  sim_cmd->add_option("--config", sim.config, "Run config JSON");
  sim.seed_opt = sim_cmd->add_option("--seed", sim.seed, "Episode seed");
  sim_cmd->add_option("--out-traj", sim.out_traj, "Trajectory JSONL output")->required();

  PlotArgs pl;
  auto* plot_cmd = app.add_subcommand("plot", "Render trajectory snapshots (and a loss curve) as SVG");
  plot_cmd->add_option("--traj", pl.traj, "Trajectory JSONL")->required();
  plot_cmd->add_option("--out-dir", pl.out_dir, "Output directory")->required();
  pl.every_opt = plot_cmd->add_option("--snapshot-every", pl.snapshot_every, "Seconds between snapshots");
  plot_cmd->add_option("--loss-csv", pl.loss_csv, "Also render this loss CSV");
  plot_cmd->add_option("--config", pl.config, "Run config JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return kExitConfig;
  }

  try {
    if (*gen_cmd) return run_gen_data(gen);
    if (*train_cmd) return run_train(tr);
    if (*eval_cmd) return run_eval(ev);
    if (*sim_cmd) return run_simulate(sim);
    if (*plot_cmd) return run_plot(pl);
  } catch (const jamgcn::TrainingDiverged& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const jamgcn::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
