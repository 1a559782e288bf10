#pragma once

#include "jamgcn/episode.hpp"
#include "jamgcn/gcn.hpp"

#include <string>
#include <vector>

namespace jamgcn {

/// Element classes used in the scene SVGs. Tests and downstream tooling
/// count elements by these.
namespace svg_class {
inline constexpr const char* kContour = "p-contour";
inline constexpr const char* kTrueDisk = "true-disk";
inline constexpr const char* kPredicted = "predicted-disk";
inline constexpr const char* kUav = "uav";
inline constexpr const char* kLink = "comm-link";
inline constexpr const char* kTarget = "target";
}  // namespace svg_class

/// One scene: P contours of the true field (P = 0.1 ... 0.9), the filled true
/// disruption disk, the predicted circle, communication links, UAVs and the
/// target. tick may be null for a log without tick records, in which case the
/// start positions from the log config are drawn.
std::string render_scene_svg(const TrajectoryLog& log, const TickRecord* tick);

/// Writes snapshot_<seconds>.svg for every tick whose time is a multiple of
/// snapshot_every. Returns the written paths in time order.
std::vector<std::string> plot_trajectory(const TrajectoryLog& log, const std::string& out_dir,
                                         double snapshot_every);

std::string render_loss_svg(const std::vector<LossPoint>& curve);

/// Parses the epoch,train_loss,val_loss CSV. Throws IoError when malformed.
std::vector<LossPoint> read_loss_csv(const std::string& path);

}  // namespace jamgcn
