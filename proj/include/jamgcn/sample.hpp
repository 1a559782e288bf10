#pragma once

#include "jamgcn/graph.hpp"

#include <cstdint>
#include <vector>

namespace jamgcn {

/// One labeled training record: raw (unstandardized) snapshot and the true
/// jammer parameters (x_j, y_j, A).
struct Sample {
  GraphSnapshot snapshot;
  LabelVec label = LabelVec::Zero();
  std::uint64_t scenario_seed = 0;
};

using Dataset = std::vector<Sample>;

}  // namespace jamgcn
