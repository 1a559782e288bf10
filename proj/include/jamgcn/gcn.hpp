#pragma once

#include "jamgcn/graph.hpp"
#include "jamgcn/sample.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace jamgcn {

/// Weights of the two graph-convolution layers and the readout head. The same
/// shape doubles as a gradient record and as optimizer moment storage.
struct GcnParams {
  Eigen::MatrixXd w1;     // 6 x H
  Eigen::RowVectorXd b1;  // H
  Eigen::MatrixXd w2;     // H x H
  Eigen::RowVectorXd b2;  // H
  Eigen::MatrixXd w_out;  // H x 3
  Eigen::RowVectorXd b_out;  // 3

  static GcnParams zeros(int hidden);
  int hidden() const { return static_cast<int>(w1.cols()); }
  std::size_t size() const;

  // Flat views in a fixed order (w1, b1, w2, b2, w_out, b_out), used by
  // optimizers and gradient checks.
  double& at(std::size_t flat_index);
  double at(std::size_t flat_index) const;
};

struct TrainConfig {
  int batch_size = 32;
  double learning_rate = 1e-3;
  int epochs = 1000;
  double val_fraction = 0.1;
  std::uint64_t seed = 0;
  int hidden = 64;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

struct GcnModel {
  GcnParams params;
  Normalizer normalizer;
  std::uint64_t seed = 0;
  TrainConfig train_config;

  int hidden() const { return params.hidden(); }
  /// Throws std::invalid_argument on inconsistent shapes or non-finite values.
  void validate() const;
};

/// Glorot-uniform weights, zero biases, identity normalizer.
GcnModel init_model(int hidden, std::uint64_t seed);

/// Standardized snapshot plus its normalized propagation matrix.
struct PreparedExample {
  Eigen::MatrixXd a_hat;
  Eigen::MatrixXd x;
  LabelVec y = LabelVec::Zero();
};

/// snapshot and label must already be standardized.
PreparedExample prepare(const GraphSnapshot& standardized, const LabelVec& standardized_label);

/// Standardized prediction for a standardized snapshot.
LabelVec forward(const GcnModel& model, const GraphSnapshot& standardized);

/// Physical-unit prediction (x_j, y_j, A) for a raw snapshot.
LabelVec predict(const GcnModel& model, const GraphSnapshot& raw);

double loss(const LabelVec& pred, const LabelVec& label);

/// Mean loss over the batch.
double batch_loss(const GcnParams& params, std::span<const PreparedExample> batch);

/// Exact gradient of the mean batch loss. loss_out receives the batch loss.
GcnParams backward(const GcnParams& params, std::span<const PreparedExample> batch,
                   double* loss_out = nullptr);
GcnParams backward(const GcnParams& params, std::span<const PreparedExample* const> batch,
                   double* loss_out = nullptr);

/// Adaptive moment estimation state for one parameter set.
class AdamOptimizer {
 public:
  AdamOptimizer(int hidden, double learning_rate, double beta1, double beta2, double epsilon);
  void step(GcnParams& params, const GcnParams& grad);
  long steps() const { return t_; }

 private:
  GcnParams m_, v_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

struct LossPoint {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainResult {
  GcnModel model;
  std::vector<LossPoint> curve;
};

/// Seeded split, normalizer fit on the training split, Glorot init and
/// shuffled mini-batch Adam. on_epoch, if set, is called after every epoch.
TrainResult train(const Dataset& dataset, const TrainConfig& cfg,
                  const std::function<void(const LossPoint&)>& on_epoch = {});

/// Buckets on the largest per-UAV P in the snapshot: [0, 0.01), [0.01, 0.1), [0.1, 1].
inline constexpr std::array<double, 4> kBucketEdges{0.0, 0.01, 0.1, 1.0};

struct ErrorMetrics {
  std::size_t count = 0;
  double mse = 0.0;             // standardized label space
  double position_rmse_m = 0.0;
  double a_mae = 0.0;
};

struct EvalReport {
  ErrorMetrics overall;
  std::array<std::optional<ErrorMetrics>, 3> buckets;  // absent when empty
};

std::string bucket_name(std::size_t bucket);
std::size_t bucket_of(double max_p);

EvalReport evaluate(const GcnModel& model, const Dataset& dataset);

nlohmann::json to_json(const GcnModel& model);
GcnModel model_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const TrainConfig& cfg);

void save_model(const GcnModel& model, const std::string& path);
GcnModel load_model(const std::string& path);
void save_loss_csv(const std::vector<LossPoint>& curve, const std::string& path);

}  // namespace jamgcn
