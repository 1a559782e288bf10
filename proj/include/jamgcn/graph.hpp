#pragma once

#include "jamgcn/geometry.hpp"
#include "jamgcn/jamfield.hpp"
#include "jamgcn/swarm.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace jamgcn {

inline constexpr int kFeatureDim = 6;
inline constexpr int kLabelDim = 3;

using FeatureVec = Eigen::Matrix<double, kFeatureDim, 1>;
using LabelVec = Eigen::Vector3d;  // (x_j, y_j, A)

/// One instant of the swarm as GCN input. Feature columns are
/// x, y, v_x, v_y, P, dP/dt.
struct GraphSnapshot {
  Eigen::MatrixXd adjacency;  // N x N, entries 0 or 1
  Eigen::MatrixXd features;   // N x 6

  int nodes() const { return static_cast<int>(features.rows()); }
};

/// Per-column standardization constants for features and labels.
class Normalizer {
 public:
  Normalizer();
  /// Throws std::invalid_argument if any scale is not strictly positive.
  Normalizer(const FeatureVec& feature_shift, const FeatureVec& feature_scale,
             const LabelVec& label_shift, const LabelVec& label_scale);

  /// Mean and population standard deviation over all nodes (features) and all
  /// samples (labels). Zero-variance columns get scale 1.
  static Normalizer fit(std::span<const GraphSnapshot> snapshots, std::span<const LabelVec> labels);

  const FeatureVec& feature_shift() const { return feature_shift_; }
  const FeatureVec& feature_scale() const { return feature_scale_; }
  const LabelVec& label_shift() const { return label_shift_; }
  const LabelVec& label_scale() const { return label_scale_; }

 private:
  FeatureVec feature_shift_, feature_scale_;
  LabelVec label_shift_, label_scale_;
};

/// A_ij = 1 iff i != j, neither UAV disrupted, and the distance is strictly
/// below d.
Eigen::MatrixXd build_adjacency(std::span<const Vec2> positions, const std::vector<bool>& disrupted,
                                double d);

Eigen::MatrixXd build_features(const Swarm& swarm, const JammerField& field);

GraphSnapshot build_snapshot(const Swarm& swarm, const JammerField& field, double comm_range_d);

/// D^-1/2 (A + I) D^-1/2.
Eigen::MatrixXd normalize_adjacency(const Eigen::MatrixXd& adjacency);

GraphSnapshot standardize(const GraphSnapshot& snapshot, const Normalizer& normalizer);
LabelVec standardize_label(const LabelVec& label, const Normalizer& normalizer);
LabelVec destandardize_label(const LabelVec& standardized, const Normalizer& normalizer);

}  // namespace jamgcn
