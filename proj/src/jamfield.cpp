#include "jamgcn/jamfield.hpp"

#include "jamgcn/error.hpp"

#include <cmath>
#include <stdexcept>

namespace jamgcn {

void JammerField::validate() const {
  if (!std::isfinite(pos_x) || !std::isfinite(pos_y))
    throw std::domain_error("jammer position must be finite");
  if (!(k > 0.0 && k <= 1.0)) throw std::domain_error("jammer k must lie in (0, 1]");
  if (!(decay_a > 0.0 && decay_a < 1.0))
    throw std::domain_error("jammer decay constant A must lie in (0, 1)");
}

void DisruptionPolicy::validate() const {
  if (!(p_tau > 0.0 && p_tau < 1.0)) throw std::domain_error("p_tau must lie in (0, 1)");
}

double probability(const JammerField& field, const Vec2& pos) {
  if (!is_finite(pos)) throw std::domain_error("probability: non-finite position");
  const double r = distance(pos, field.center());
  return field.k * std::pow(field.decay_a, r);
}

double probability_rate(const JammerField& field, const Vec2& pos, const Vec2& vel) {
  if (!is_finite(pos) || !is_finite(vel))
    throw std::domain_error("probability_rate: non-finite input");
  const Vec2 delta = pos - field.center();
  const double r = std::hypot(delta.x(), delta.y());
  if (r == 0.0) throw std::domain_error("probability_rate: UAV at jammer center");
  // dP/dt = dP/dr * dr/dt, dr/dt = (delta . v) / r
  const double p = field.k * std::pow(field.decay_a, r);
  return p * std::log(field.decay_a) * delta.dot(vel) / r;
}

double critical_radius(const JammerField& field, const DisruptionPolicy& policy) {
  if (policy.p_tau >= field.k) throw ThresholdUnreachable();
  return std::log(policy.p_tau / field.k) / std::log(field.decay_a);
}

bool is_disrupted(const JammerField& field, const DisruptionPolicy& policy, const Vec2& pos) {
  const double p = probability(field, pos);
  if (p >= policy.p_tau) return true;
  if (policy.p_tau >= field.k) return false;
  // The distance comparison catches the boundary point where rounding in pow
  // leaves P one ulp below the threshold.
  return distance(pos, field.center()) <= critical_radius(field, policy);
}

}  // namespace jamgcn
