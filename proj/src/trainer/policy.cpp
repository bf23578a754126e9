#include "see/trainer/policy.hpp"

namespace see::trainer {

std::size_t behavior_action(std::span<const float> q, std::span<const float> delta,
                            double mixture) {
  if (!(mixture >= 0.0 && mixture <= 1.0)) throw ConfigError("mixture must lie in [0, 1]");
  if (q.size() != delta.size() || q.empty())
    throw InternalError("behavior_action: value vectors differ in length");
  std::size_t best = 0;
  double best_value = 0.0;
  for (std::size_t a = 0; a < q.size(); ++a) {
    const double v = (1.0 - mixture) * q[a] + mixture * delta[a];
    if (a == 0 || v > best_value) {
      best = a;
      best_value = v;
    }
  }
  return best;
}

}  // namespace see::trainer
