#pragma once

#include "leosb/airlink.hpp"
#include "leosb/channel.hpp"
#include "leosb/config.hpp"
#include "leosb/numerics.hpp"
#include "leosb/rng.hpp"

#include <algorithm>
#include <cmath>

namespace leosb::testing {

inline ComplexMatrix random_matrix(RandomStream& rng, std::size_t rows, std::size_t cols) {
  ComplexMatrix m(rows, cols);
  for (auto& v : m.values()) v = rng.complex_normal(2.0);
  return m;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  return worst;
}

inline double rel_frobenius(const ComplexMatrix& a, const ComplexMatrix& b) {
  return std::sqrt((a - b).frobenius_norm2() / b.frobenius_norm2());
}

/// Default scenario with every Doppler and delay term removed.
inline ChannelState static_scenario(RandomStream& rng, SystemConfig cfg = {}) {
  cfg.sat_doppler_bound_hz = 0.0;
  cfg.ut_doppler_bound_hz = 0.0;
  cfg.mp_delay_max_s = 0.0;
  ChannelState s = sample_scenario(rng, cfg);
  for (auto& f : s.fading) f.tau_los_s = 0.0;
  return s;
}

}  // namespace leosb::testing
