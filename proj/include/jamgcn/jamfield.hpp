#pragma once

#include "jamgcn/geometry.hpp"

namespace jamgcn {

/// Ground-truth jammer: disruption probability P = k * A^r at distance r
/// from (pos_x, pos_y).
struct JammerField {
  double pos_x = 0.0;
  double pos_y = 0.0;
  double k = 1.0;
  double decay_a = 0.9;

  Vec2 center() const { return {pos_x, pos_y}; }

  /// Throws std::domain_error unless 0 < k <= 1, 0 < decay_a < 1 and the
  /// center is finite.
  void validate() const;
};

struct DisruptionPolicy {
  double p_tau = 0.5;

  void validate() const;
};

double probability(const JammerField& field, const Vec2& pos);

/// Time derivative of P for a UAV at pos moving with vel. Throws
/// std::domain_error at the jammer center, where the radial direction is
/// undefined.
double probability_rate(const JammerField& field, const Vec2& pos, const Vec2& vel);

/// Radius of the disk where P >= p_tau. Throws ThresholdUnreachable when
/// p_tau >= k.
double critical_radius(const JammerField& field, const DisruptionPolicy& policy);

/// Boundary inclusive: a UAV exactly at the critical radius is disrupted.
bool is_disrupted(const JammerField& field, const DisruptionPolicy& policy, const Vec2& pos);

}  // namespace jamgcn
