#include "jamgcn/gcn.hpp"

#include "jamgcn/error.hpp"
#include "jamgcn/rng.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace jamgcn {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;

template <typename F>
void for_each_block(GcnParams& p, F&& f) {
  f(p.w1.data(), p.w1.size());
  f(p.b1.data(), p.b1.size());
  f(p.w2.data(), p.w2.size());
  f(p.b2.data(), p.b2.size());
  f(p.w_out.data(), p.w_out.size());
  f(p.b_out.data(), p.b_out.size());
}

bool all_finite(const GcnParams& p) {
  return p.w1.allFinite() && p.b1.allFinite() && p.w2.allFinite() && p.b2.allFinite() &&
         p.w_out.allFinite() && p.b_out.allFinite();
}

MatrixXd relu(const MatrixXd& z) { return z.cwiseMax(0.0); }

// relu'(z) with the subgradient at exactly 0 taken as 0.
MatrixXd relu_mask(const MatrixXd& z) {
  return (z.array() > 0.0).cast<double>().matrix();
}

// Activations of one batch, stacked node-wise: rows [offset[b], offset[b+1])
// belong to sample b.
struct BatchTape {
  std::vector<Index> offset;
  MatrixXd ax;   // blockdiag(A_hat) X
  MatrixXd z1;
  MatrixXd h1;
  MatrixXd ah1;  // blockdiag(A_hat) H1
  MatrixXd z2;
  MatrixXd h2;
  MatrixXd pooled;  // B x H
  MatrixXd out;     // B x 3
};

BatchTape run_forward(const GcnParams& p, std::span<const PreparedExample* const> batch) {
  BatchTape t;
  const Index b_count = static_cast<Index>(batch.size());
  const Index hidden = p.w1.cols();
  t.offset.resize(batch.size() + 1, 0);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const PreparedExample& ex = *batch[b];
    if (ex.x.cols() != kFeatureDim || ex.a_hat.rows() != ex.x.rows() ||
        ex.a_hat.cols() != ex.x.rows() || ex.x.rows() == 0)
      throw std::invalid_argument("forward: snapshot shape mismatch");
    t.offset[b + 1] = t.offset[b] + ex.x.rows();
  }
  const Index rows = t.offset.back();

  t.ax.resize(rows, kFeatureDim);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Index n = t.offset[b + 1] - t.offset[b];
    t.ax.middleRows(t.offset[b], n).noalias() = batch[b]->a_hat * batch[b]->x;
  }
  t.z1.noalias() = t.ax * p.w1;
  t.z1.rowwise() += p.b1;
  t.h1 = relu(t.z1);

  t.ah1.resize(rows, hidden);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Index n = t.offset[b + 1] - t.offset[b];
    t.ah1.middleRows(t.offset[b], n).noalias() = batch[b]->a_hat * t.h1.middleRows(t.offset[b], n);
  }
  t.z2.noalias() = t.ah1 * p.w2;
  t.z2.rowwise() += p.b2;
  t.h2 = relu(t.z2);

  t.pooled.resize(b_count, hidden);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Index n = t.offset[b + 1] - t.offset[b];
    t.pooled.row(static_cast<Index>(b)) = t.h2.middleRows(t.offset[b], n).colwise().mean();
  }
  t.out.noalias() = t.pooled * p.w_out;
  t.out.rowwise() += p.b_out;
  return t;
}

std::vector<const PreparedExample*> pointers(std::span<const PreparedExample> batch) {
  std::vector<const PreparedExample*> ptrs;
  ptrs.reserve(batch.size());
  for (const PreparedExample& ex : batch) ptrs.push_back(&ex);
  return ptrs;
}

double mean_loss(const BatchTape& t, std::span<const PreparedExample* const> batch) {
  double total = 0.0;
  for (std::size_t b = 0; b < batch.size(); ++b)
    total += loss(t.out.row(static_cast<Index>(b)).transpose(), batch[b]->y);
  return total / static_cast<double>(batch.size());
}

std::vector<PreparedExample> prepare_all(const Dataset& data, const std::vector<std::size_t>& idx,
                                         const Normalizer& norm) {
  std::vector<PreparedExample> out;
  out.reserve(idx.size());
  for (std::size_t i : idx)
    out.push_back(prepare(standardize(data[i].snapshot, norm), standardize_label(data[i].label, norm)));
  return out;
}

double dataset_loss(const GcnParams& p, const std::vector<PreparedExample>& data) {
  constexpr std::size_t kChunk = 256;
  double total = 0.0;
  for (std::size_t start = 0; start < data.size(); start += kChunk) {
    const std::size_t len = std::min(kChunk, data.size() - start);
    total += batch_loss(p, std::span(data).subspan(start, len)) * static_cast<double>(len);
  }
  return total / static_cast<double>(data.size());
}

nlohmann::json matrix_json(const MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_json(const auto& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

MatrixXd matrix_from_json(const nlohmann::json& j, Index rows, Index cols, const char* name) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    throw std::invalid_argument(std::string("model: bad row count for ") + name);
  MatrixXd m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw std::invalid_argument(std::string("model: bad column count for ") + name);
    for (Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

template <typename Vec>
Vec vector_from_json(const nlohmann::json& j, Index size, const char* name) {
  if (!j.is_array() || static_cast<Index>(j.size()) != size)
    throw std::invalid_argument(std::string("model: bad length for ") + name);
  Vec v(size);
  for (Index i = 0; i < size; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

GcnParams GcnParams::zeros(int hidden) {
  GcnParams p;
  p.w1 = MatrixXd::Zero(kFeatureDim, hidden);
  p.b1 = RowVectorXd::Zero(hidden);
  p.w2 = MatrixXd::Zero(hidden, hidden);
  p.b2 = RowVectorXd::Zero(hidden);
  p.w_out = MatrixXd::Zero(hidden, kLabelDim);
  p.b_out = RowVectorXd::Zero(kLabelDim);
  return p;
}

std::size_t GcnParams::size() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size() + w_out.size() +
                                  b_out.size());
}

double& GcnParams::at(std::size_t flat_index) {
  double* found = nullptr;
  std::size_t rest = flat_index;
  for_each_block(*this, [&](double* data, Index len) {
    if (found) return;
    const auto n = static_cast<std::size_t>(len);
    if (rest < n) found = data + rest;
    else rest -= n;
  });
  if (!found) throw std::out_of_range("GcnParams::at");
  return *found;
}

double GcnParams::at(std::size_t flat_index) const {
  return const_cast<GcnParams&>(*this).at(flat_index);
}

void TrainConfig::validate() const {
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
  if (epochs < 0) throw ConfigError("epochs must be >= 0");
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) throw ConfigError("val_fraction must lie in (0, 1)");
  if (hidden < 1) throw ConfigError("hidden width must be >= 1");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0))
    throw ConfigError("Adam decay rates must lie in [0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("Adam epsilon must be positive");
}

void GcnModel::validate() const {
  const Index h = params.w1.cols();
  if (h < 1 || params.w1.rows() != kFeatureDim || params.b1.size() != h || params.w2.rows() != h ||
      params.w2.cols() != h || params.b2.size() != h || params.w_out.rows() != h ||
      params.w_out.cols() != kLabelDim || params.b_out.size() != kLabelDim)
    throw std::invalid_argument("model: inconsistent weight shapes");
  if (!all_finite(params)) throw std::invalid_argument("model: non-finite weights");
}

GcnModel init_model(int hidden, std::uint64_t seed) {
  if (hidden < 1) throw std::invalid_argument("init_model: hidden width must be >= 1");
  Rng rng(seed);
  GcnModel model;
  model.seed = seed;
  model.params = GcnParams::zeros(hidden);
  auto glorot = [&rng](MatrixXd& w) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    for (Index i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-limit, limit);
  };
  glorot(model.params.w1);
  glorot(model.params.w2);
  glorot(model.params.w_out);
  return model;
}

PreparedExample prepare(const GraphSnapshot& standardized, const LabelVec& standardized_label) {
  if (standardized.adjacency.rows() != standardized.features.rows() ||
      standardized.adjacency.cols() != standardized.features.rows())
    throw std::invalid_argument("prepare: adjacency does not match feature rows");
  return {normalize_adjacency(standardized.adjacency), standardized.features, standardized_label};
}

LabelVec forward(const GcnModel& model, const GraphSnapshot& standardized) {
  const PreparedExample ex = prepare(standardized, LabelVec::Zero());
  const PreparedExample* one[] = {&ex};
  const BatchTape t = run_forward(model.params, one);
  return t.out.row(0).transpose();
}

LabelVec predict(const GcnModel& model, const GraphSnapshot& raw) {
  return destandardize_label(forward(model, standardize(raw, model.normalizer)), model.normalizer);
}

double loss(const LabelVec& pred, const LabelVec& label) {
  return (pred - label).squaredNorm() / static_cast<double>(kLabelDim);
}

double batch_loss(const GcnParams& params, std::span<const PreparedExample> batch) {
  if (batch.empty()) throw std::invalid_argument("batch_loss: empty batch");
  const auto ptrs = pointers(batch);
  return mean_loss(run_forward(params, ptrs), ptrs);
}

GcnParams backward(const GcnParams& params, std::span<const PreparedExample> batch,
                   double* loss_out) {
  const auto ptrs = pointers(batch);
  return backward(params, std::span<const PreparedExample* const>(ptrs), loss_out);
}

GcnParams backward(const GcnParams& p, std::span<const PreparedExample* const> batch,
                   double* loss_out) {
  if (batch.empty()) throw std::invalid_argument("backward: empty batch");
  const BatchTape t = run_forward(p, batch);
  const Index b_count = static_cast<Index>(batch.size());
  if (loss_out) *loss_out = mean_loss(t, batch);

  // d(mean over batch of mean over 3 outputs of r^2) / d out
  MatrixXd d_out(b_count, kLabelDim);
  for (Index b = 0; b < b_count; ++b)
    d_out.row(b) = (t.out.row(b) - batch[static_cast<std::size_t>(b)]->y.transpose()) *
                   (2.0 / static_cast<double>(kLabelDim * b_count));

  GcnParams g;
  g.w_out.noalias() = t.pooled.transpose() * d_out;
  g.b_out = d_out.colwise().sum();
  const MatrixXd d_pooled = d_out * p.w_out.transpose();

  // Mean pooling spreads each graph's gradient evenly over its nodes.
  MatrixXd d_z2(t.z2.rows(), t.z2.cols());
  for (Index b = 0; b < b_count; ++b) {
    const Index start = t.offset[static_cast<std::size_t>(b)];
    const Index n = t.offset[static_cast<std::size_t>(b) + 1] - start;
    d_z2.middleRows(start, n) = d_pooled.row(b).replicate(n, 1) / static_cast<double>(n);
  }
  d_z2 = d_z2.cwiseProduct(relu_mask(t.z2));
  g.w2.noalias() = t.ah1.transpose() * d_z2;
  g.b2 = d_z2.colwise().sum();
  const MatrixXd d_ah1 = d_z2 * p.w2.transpose();

  MatrixXd d_z1(t.z1.rows(), t.z1.cols());
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const Index n = t.offset[b + 1] - t.offset[b];
    d_z1.middleRows(t.offset[b], n).noalias() =
        batch[b]->a_hat.transpose() * d_ah1.middleRows(t.offset[b], n);
  }
  d_z1 = d_z1.cwiseProduct(relu_mask(t.z1));
  g.w1.noalias() = t.ax.transpose() * d_z1;
  g.b1 = d_z1.colwise().sum();
  return g;
}

AdamOptimizer::AdamOptimizer(int hidden, double learning_rate, double beta1, double beta2,
                             double epsilon)
    : m_(GcnParams::zeros(hidden)),
      v_(GcnParams::zeros(hidden)),
      lr_(learning_rate),
      beta1_(beta1),
      beta2_(beta2),
      eps_(epsilon) {}

void AdamOptimizer::step(GcnParams& params, const GcnParams& grad) {
  ++t_;
  const double bias1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bias2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto update = [&](auto& w, auto& m, auto& v, const auto& g) {
    m = beta1_ * m + (1.0 - beta1_) * g;
    v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
    w.array() -= lr_ * (m.array() / bias1) / ((v.array() / bias2).sqrt() + eps_);
  };
  update(params.w1, m_.w1, v_.w1, grad.w1);
  update(params.b1, m_.b1, v_.b1, grad.b1);
  update(params.w2, m_.w2, v_.w2, grad.w2);
  update(params.b2, m_.b2, v_.b2, grad.b2);
  update(params.w_out, m_.w_out, v_.w_out, grad.w_out);
  update(params.b_out, m_.b_out, v_.b_out, grad.b_out);
}

TrainResult train(const Dataset& dataset, const TrainConfig& cfg,
                  const std::function<void(const LossPoint&)>& on_epoch) {
  cfg.validate();
  if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
  const std::size_t n = dataset.size();
  if (static_cast<double>(n) < static_cast<double>(cfg.batch_size) / (1.0 - cfg.val_fraction))
    throw std::invalid_argument("train: dataset smaller than batch_size / (1 - val_fraction)");

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order);
  const auto n_val = static_cast<std::size_t>(std::ceil(cfg.val_fraction * static_cast<double>(n)));
  const std::vector<std::size_t> train_idx(order.begin(), order.end() - static_cast<long>(n_val));
  const std::vector<std::size_t> val_idx(order.end() - static_cast<long>(n_val), order.end());

  std::vector<GraphSnapshot> train_snaps;
  std::vector<LabelVec> train_labels;
  for (std::size_t i : train_idx) {
    train_snaps.push_back(dataset[i].snapshot);
    train_labels.push_back(dataset[i].label);
  }

  TrainResult result;
  result.model = init_model(cfg.hidden, rng.below(UINT64_MAX));
  result.model.seed = cfg.seed;
  result.model.train_config = cfg;
  result.model.normalizer = Normalizer::fit(train_snaps, train_labels);

  const std::vector<PreparedExample> train_set = prepare_all(dataset, train_idx, result.model.normalizer);
  const std::vector<PreparedExample> val_set = prepare_all(dataset, val_idx, result.model.normalizer);

  AdamOptimizer adam(cfg.hidden, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon);
  std::vector<const PreparedExample*> batch;
  std::vector<std::size_t> epoch_order(train_set.size());
  for (std::size_t i = 0; i < epoch_order.size(); ++i) epoch_order[i] = i;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    rng.shuffle(epoch_order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < epoch_order.size(); start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(epoch_order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(&train_set[epoch_order[i]]);
      double batch_mean = 0.0;
      const GcnParams grad = backward(result.model.params, batch, &batch_mean);
      if (!std::isfinite(batch_mean)) throw TrainingDiverged(epoch);
      loss_sum += batch_mean * static_cast<double>(end - start);
      adam.step(result.model.params, grad);
    }
    LossPoint point{epoch, loss_sum / static_cast<double>(train_set.size()),
                    dataset_loss(result.model.params, val_set)};
    if (!std::isfinite(point.train_loss) || !std::isfinite(point.val_loss) ||
        !all_finite(result.model.params))
      throw TrainingDiverged(epoch);
    result.curve.push_back(point);
    if (on_epoch) on_epoch(point);
  }
  return result;
}

std::string bucket_name(std::size_t bucket) {
  static const char* names[] = {"[0,0.01)", "[0.01,0.1)", "[0.1,1]"};
  if (bucket >= 3) throw std::out_of_range("bucket_name");
  return names[bucket];
}

std::size_t bucket_of(double max_p) {
  if (max_p < kBucketEdges[1]) return 0;
  if (max_p < kBucketEdges[2]) return 1;
  return 2;
}

EvalReport evaluate(const GcnModel& model, const Dataset& dataset) {
  if (dataset.empty()) throw std::invalid_argument("evaluate: empty dataset");
  struct Acc {
    std::size_t count = 0;
    double sq_std = 0.0, sq_pos = 0.0, abs_a = 0.0;
    void add(double s, double p, double a) {
      ++count;
      sq_std += s;
      sq_pos += p;
      abs_a += a;
    }
    ErrorMetrics finish() const {
      const double c = static_cast<double>(count);
      return {count, sq_std / c, std::sqrt(sq_pos / c), abs_a / c};
    }
  };
  Acc overall;
  std::array<Acc, 3> buckets;
  for (const Sample& s : dataset) {
    const LabelVec pred_std = forward(model, standardize(s.snapshot, model.normalizer));
    const LabelVec pred = destandardize_label(pred_std, model.normalizer);
    const double sq_std = loss(pred_std, standardize_label(s.label, model.normalizer));
    const double sq_pos = (pred.head<2>() - s.label.head<2>()).squaredNorm();
    const double abs_a = std::abs(pred[2] - s.label[2]);
    overall.add(sq_std, sq_pos, abs_a);
    buckets[bucket_of(s.snapshot.features.col(4).maxCoeff())].add(sq_std, sq_pos, abs_a);
  }
  EvalReport report;
  report.overall = overall.finish();
  for (std::size_t b = 0; b < 3; ++b)
    if (buckets[b].count > 0) report.buckets[b] = buckets[b].finish();
  return report;
}

nlohmann::json to_json(const TrainConfig& cfg) {
  return {{"batch_size", cfg.batch_size}, {"learning_rate", cfg.learning_rate},
          {"epochs", cfg.epochs},         {"val_fraction", cfg.val_fraction},
          {"seed", cfg.seed},             {"hidden", cfg.hidden},
          {"beta1", cfg.beta1},           {"beta2", cfg.beta2},
          {"epsilon", cfg.epsilon}};
}

nlohmann::json to_json(const GcnModel& model) {
  const Normalizer& nz = model.normalizer;
  nlohmann::json doc;
  doc["arch"] = {{"hidden", model.hidden()}, {"layers", 2}};
  doc["normalizer"] = {{"feature_shift", vector_json(nz.feature_shift())},
                       {"feature_scale", vector_json(nz.feature_scale())},
                       {"label_shift", vector_json(nz.label_shift())},
                       {"label_scale", vector_json(nz.label_scale())}};
  doc["weights"] = {{"w1", matrix_json(model.params.w1)},       {"b1", vector_json(model.params.b1)},
                    {"w2", matrix_json(model.params.w2)},       {"b2", vector_json(model.params.b2)},
                    {"w_out", matrix_json(model.params.w_out)}, {"b_out", vector_json(model.params.b_out)}};
  doc["seed"] = model.seed;
  doc["train_config"] = to_json(model.train_config);
  return doc;
}

GcnModel model_from_json(const nlohmann::json& doc) {
  try {
    const int hidden = doc.at("arch").at("hidden").get<int>();
    if (doc.at("arch").at("layers").get<int>() != 2)
      throw std::invalid_argument("model: only 2-layer networks are supported");
    if (hidden < 1) throw std::invalid_argument("model: hidden width must be >= 1");
    const auto& nz = doc.at("normalizer");
    const auto& w = doc.at("weights");
    GcnModel m;
    m.normalizer = Normalizer(vector_from_json<FeatureVec>(nz.at("feature_shift"), kFeatureDim, "feature_shift"),
                              vector_from_json<FeatureVec>(nz.at("feature_scale"), kFeatureDim, "feature_scale"),
                              vector_from_json<LabelVec>(nz.at("label_shift"), kLabelDim, "label_shift"),
                              vector_from_json<LabelVec>(nz.at("label_scale"), kLabelDim, "label_scale"));
    m.params.w1 = matrix_from_json(w.at("w1"), kFeatureDim, hidden, "w1");
    m.params.b1 = vector_from_json<RowVectorXd>(w.at("b1"), hidden, "b1");
    m.params.w2 = matrix_from_json(w.at("w2"), hidden, hidden, "w2");
    m.params.b2 = vector_from_json<RowVectorXd>(w.at("b2"), hidden, "b2");
    m.params.w_out = matrix_from_json(w.at("w_out"), hidden, kLabelDim, "w_out");
    m.params.b_out = vector_from_json<RowVectorXd>(w.at("b_out"), kLabelDim, "b_out");
    m.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("train_config")) {
      const auto& tc = doc["train_config"];
      TrainConfig cfg;
      cfg.batch_size = tc.value("batch_size", cfg.batch_size);
      cfg.learning_rate = tc.value("learning_rate", cfg.learning_rate);
      cfg.epochs = tc.value("epochs", cfg.epochs);
      cfg.val_fraction = tc.value("val_fraction", cfg.val_fraction);
      cfg.seed = tc.value("seed", cfg.seed);
      cfg.hidden = hidden;
      cfg.beta1 = tc.value("beta1", cfg.beta1);
      cfg.beta2 = tc.value("beta2", cfg.beta2);
      cfg.epsilon = tc.value("epsilon", cfg.epsilon);
      m.train_config = cfg;
    }
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("model: ") + e.what());
  }
}

nlohmann::json to_json(const EvalReport& report) {
  auto metrics = [](const ErrorMetrics& m) {
    return nlohmann::json{{"count", m.count},
                          {"mse", m.mse},
                          {"position_rmse_m", m.position_rmse_m},
                          {"a_mae", m.a_mae}};
  };
  nlohmann::json doc;
  doc["mse_overall"] = report.overall.mse;
  doc["position_rmse_m"] = report.overall.position_rmse_m;
  doc["a_mae"] = report.overall.a_mae;
  doc["count"] = report.overall.count;
  nlohmann::json buckets = nlohmann::json::array();
  for (std::size_t b = 0; b < 3; ++b) {
    nlohmann::json entry{{"bucket", bucket_name(b)},
                         {"max_p_lo", kBucketEdges[b]},
                         {"max_p_hi", kBucketEdges[b + 1]}};
    if (report.buckets[b]) {
      entry["present"] = true;
      entry["metrics"] = metrics(*report.buckets[b]);
    } else {
      entry["present"] = false;
    }
    buckets.push_back(std::move(entry));
  }
  doc["buckets"] = std::move(buckets);
  return doc;
}

void save_model(const GcnModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open model file for writing: " + path);
  out << to_json(model).dump() << '\n';
  if (!out) throw IoError("failed writing model file: " + path);
}

GcnModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed model file " + path + ": " + e.what());
  }
  return model_from_json(doc);
}

void save_loss_csv(const std::vector<LossPoint>& curve, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open loss CSV for writing: " + path);
  out << "epoch,train_loss,val_loss\n" << std::setprecision(17);
  for (const LossPoint& p : curve) out << p.epoch << ',' << p.train_loss << ',' << p.val_loss << '\n';
  if (!out) throw IoError("failed writing loss CSV: " + path);
}

}  // namespace jamgcn
