#include "jamgcn/graph.hpp"

#include <cmath>
#include <stdexcept>

namespace jamgcn {

Normalizer::Normalizer()
    : feature_shift_(FeatureVec::Zero()),
      feature_scale_(FeatureVec::Ones()),
      label_shift_(LabelVec::Zero()),
      label_scale_(LabelVec::Ones()) {}

Normalizer::Normalizer(const FeatureVec& feature_shift, const FeatureVec& feature_scale,
                       const LabelVec& label_shift, const LabelVec& label_scale)
    : feature_shift_(feature_shift),
      feature_scale_(feature_scale),
      label_shift_(label_shift),
      label_scale_(label_scale) {
  for (int i = 0; i < kFeatureDim; ++i)
    if (!(feature_scale_[i] > 0.0) || !std::isfinite(feature_scale_[i]) ||
        !std::isfinite(feature_shift_[i]))
      throw std::invalid_argument("normalizer feature scale must be finite and positive");
  for (int i = 0; i < kLabelDim; ++i)
    if (!(label_scale_[i] > 0.0) || !std::isfinite(label_scale_[i]) ||
        !std::isfinite(label_shift_[i]))
      throw std::invalid_argument("normalizer label scale must be finite and positive");
}

Normalizer Normalizer::fit(std::span<const GraphSnapshot> snapshots,
                           std::span<const LabelVec> labels) {
  if (snapshots.empty() || labels.empty())
    throw std::invalid_argument("Normalizer::fit: empty input");

  FeatureVec f_sum = FeatureVec::Zero();
  double rows = 0.0;
  for (const GraphSnapshot& s : snapshots) {
    f_sum += s.features.colwise().sum().transpose();
    rows += static_cast<double>(s.features.rows());
  }
  const FeatureVec f_mean = f_sum / rows;
  FeatureVec f_var = FeatureVec::Zero();
  for (const GraphSnapshot& s : snapshots)
    f_var += (s.features.rowwise() - f_mean.transpose()).array().square().colwise().sum().matrix().transpose();
  FeatureVec f_std = (f_var / rows).array().sqrt();

  LabelVec l_sum = LabelVec::Zero();
  for (const LabelVec& l : labels) l_sum += l;
  const LabelVec l_mean = l_sum / static_cast<double>(labels.size());
  LabelVec l_var = LabelVec::Zero();
  for (const LabelVec& l : labels) l_var += (l - l_mean).array().square().matrix();
  LabelVec l_std = (l_var / static_cast<double>(labels.size())).array().sqrt();

  for (int i = 0; i < kFeatureDim; ++i)
    if (!(f_std[i] > 0.0)) f_std[i] = 1.0;
  for (int i = 0; i < kLabelDim; ++i)
    if (!(l_std[i] > 0.0)) l_std[i] = 1.0;
  return Normalizer(f_mean, f_std, l_mean, l_std);
}

Eigen::MatrixXd build_adjacency(std::span<const Vec2> positions, const std::vector<bool>& disrupted,
                                double d) {
  if (positions.empty()) throw std::invalid_argument("build_adjacency: no positions");
  if (disrupted.size() != positions.size())
    throw std::invalid_argument("build_adjacency: disrupted flags do not match positions");
  if (!(d > 0.0)) throw std::invalid_argument("build_adjacency: range must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(positions.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (disrupted[i]) continue;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (disrupted[j]) continue;
      if (distance(positions[i], positions[j]) < d) a(i, j) = a(j, i) = 1.0;
    }
  }
  return a;
}

Eigen::MatrixXd build_features(const Swarm& swarm, const JammerField& field) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(swarm.size()), kFeatureDim);
  for (std::size_t i = 0; i < swarm.size(); ++i) {
    const UavState& u = swarm[i];
    const auto r = static_cast<Eigen::Index>(i);
    x(r, 0) = u.pos.x();
    x(r, 1) = u.pos.y();
    x(r, 2) = u.vel.x();
    x(r, 3) = u.vel.y();
    x(r, 4) = probability(field, u.pos);
    x(r, 5) = u.disrupted ? 0.0 : probability_rate(field, u.pos, u.vel);
  }
  return x;
}

GraphSnapshot build_snapshot(const Swarm& swarm, const JammerField& field, double comm_range_d) {
  std::vector<Vec2> pos;
  std::vector<bool> frozen;
  pos.reserve(swarm.size());
  for (const UavState& u : swarm) {
    pos.push_back(u.pos);
    frozen.push_back(u.disrupted);
  }
  return {build_adjacency(pos, frozen, comm_range_d), build_features(swarm, field)};
}

Eigen::MatrixXd normalize_adjacency(const Eigen::MatrixXd& adjacency) {
  const Eigen::Index n = adjacency.rows();
  Eigen::MatrixXd a_hat = adjacency + Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXd inv_sqrt_deg = a_hat.rowwise().sum().array().rsqrt();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a_hat(i, j) *= inv_sqrt_deg[i] * inv_sqrt_deg[j];
  return a_hat;
}

GraphSnapshot standardize(const GraphSnapshot& snapshot, const Normalizer& normalizer) {
  if (snapshot.features.cols() != kFeatureDim)
    throw std::invalid_argument("standardize: feature matrix must have 6 columns");
  GraphSnapshot out = snapshot;
  for (int c = 0; c < kFeatureDim; ++c)
    out.features.col(c) = (snapshot.features.col(c).array() - normalizer.feature_shift()[c]) /
                          normalizer.feature_scale()[c];
  return out;
}

LabelVec standardize_label(const LabelVec& label, const Normalizer& normalizer) {
  return ((label - normalizer.label_shift()).array() / normalizer.label_scale().array()).matrix();
}

LabelVec destandardize_label(const LabelVec& standardized, const Normalizer& normalizer) {
  return (standardized.array() * normalizer.label_scale().array()).matrix() + normalizer.label_shift();
}

}  // namespace jamgcn
