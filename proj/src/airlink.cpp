#include "leosb/airlink.hpp"

#include "leosb/channel.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <stdexcept>
#include <string>

namespace leosb {

namespace {

std::size_t gray_to_binary(std::size_t g) {
  std::size_t b = g;
  while (g >>= 1) b ^= g;
  return b;
}

ComplexMatrix noiseless_rx(const ComplexMatrix& h_eff, const ComplexMatrix& x, const ComplexMatrix& steering) {
  if (h_eff.rows() != x.rows() || h_eff.cols() != x.cols() || steering.rows() != x.rows()) {
    throw DimensionError("synthesize_rx: shapes disagree, h " + shape_of(h_eff) + ", x " + shape_of(x) +
                         ", steering " + shape_of(steering));
  }
  return matmul(hadamard_mul(h_eff, x).transpose(), steering);
}

ComplexMatrix add_noise(const ComplexMatrix& clean, double sigma2, RandomStream& rng) {
  ComplexMatrix noisy = clean;
  if (sigma2 > 0.0) {
    for (auto& v : noisy.values()) v += rng.complex_normal(sigma2);
  }
  return noisy;
}

}  // namespace

FrameTiming FrameTiming::from_spacing(std::size_t n_sc, std::size_t n_cp, double scs_hz, std::size_t subcarrier) {
  FrameTiming t;
  t.n_sc = n_sc;
  t.n_cp = n_cp;
  t.subcarrier = subcarrier;
  t.t_s = 1.0 / (static_cast<double>(n_sc) * scs_hz);
  return t;
}

Constellation::Constellation(std::size_t order) {
  const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(order))));
  if (order < 4 || side * side != order || (side & (side - 1)) != 0) {
    throw std::invalid_argument("Constellation: order must be a square power of two (4, 16, 64, ...), got " +
                                std::to_string(order));
  }
  const std::size_t bits_per_axis = static_cast<std::size_t>(std::countr_zero(side));
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(order - 1) / 3.0);
  const auto level = [&](std::size_t gray) {
    return scale * (2.0 * static_cast<double>(gray_to_binary(gray)) - static_cast<double>(side - 1));
  };
  points_.reserve(order);
  for (std::size_t label = 0; label < order; ++label) {
    points_.emplace_back(level(label >> bits_per_axis), level(label & (side - 1)));
  }
  min_distance_ = 2.0 * scale;
}

std::size_t Constellation::nearest(Complex z) const noexcept {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double d = std::norm(z - points_[i]);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

ComplexMatrix FrameSignals::rx_block(const FrameLayout& layout, std::size_t block) const {
  return rx_data.row_range(layout.data_offset(block), layout.d);
}

ComplexMatrix FrameSignals::data_block(const FrameLayout& layout, std::size_t block) const {
  return data.col_range(layout.data_offset(block), layout.d);
}

std::vector<Complex> zadoff_chu(std::size_t length, std::size_t root, std::size_t shift) {
  if (length == 0) throw std::invalid_argument("zadoff_chu: length must be positive");
  if (std::gcd(root, length) != 1) {
    throw std::invalid_argument("zadoff_chu: root " + std::to_string(root) + " is not coprime with length " +
                                std::to_string(length));
  }
  if (shift >= length) throw std::invalid_argument("zadoff_chu: shift must be below length");

  // Exponents are reduced modulo 2L in integers so the phase stays exact for long sequences.
  const std::uint64_t two_l = 2 * static_cast<std::uint64_t>(length);
  const std::uint64_t r = root % two_l;
  const bool odd = length % 2 == 1;
  std::vector<Complex> seq(length);
  for (std::size_t n = 0; n < length; ++n) {
    const std::uint64_t m = (n + shift) % length;
    const std::uint64_t q = odd ? (m * (m + 1)) % two_l : (m * m) % two_l;
    const std::uint64_t e = (r * q) % two_l;
    const double phase = -std::numbers::pi * static_cast<double>(e) / static_cast<double>(length);
    seq[n] = {std::cos(phase), std::sin(phase)};
  }
  return seq;
}

ComplexMatrix build_pilot_matrix(std::size_t k_users, std::size_t p, std::size_t root) {
  if (p < k_users) {
    throw std::invalid_argument("build_pilot_matrix: " + std::to_string(p) + " pilots cannot separate " +
                                std::to_string(k_users) + " users");
  }
  ComplexMatrix x(k_users, p);
  for (std::size_t k = 0; k < k_users; ++k) {
    const auto seq = zadoff_chu(p, root, k);
    std::copy(seq.begin(), seq.end(), x.row(k).begin());
  }
  return x;
}

ComplexMatrix map_symbols(RandomStream& rng, const Constellation& constellation, std::size_t k, std::size_t s,
                          std::vector<std::size_t>* indices) {
  ComplexMatrix x(k, s);
  if (indices) indices->resize(k * s);
  auto v = x.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::size_t idx = rng.index(constellation.order());
    v[i] = constellation.point(idx);
    if (indices) (*indices)[i] = idx;
  }
  return x;
}

ReceivedSignal synthesize_rx(const ComplexMatrix& h_eff, const ComplexMatrix& x, const ComplexMatrix& steering,
                             double sigma2, RandomStream& rng) {
  ReceivedSignal rx;
  rx.noiseless = noiseless_rx(h_eff, x, steering);
  rx.noisy = add_noise(rx.noiseless, sigma2, rng);
  return rx;
}

double calibrate_sigma2(double target_snr_db, const ComplexMatrix& noiseless) {
  const double energy = noiseless.frobenius_norm2();
  if (!(energy > 0.0)) throw std::invalid_argument("calibrate_sigma2: noiseless signal is all zero");
  if (std::isinf(target_snr_db) && target_snr_db > 0.0) return 0.0;
  const double per_entry = energy / static_cast<double>(noiseless.size());
  return per_entry / std::pow(10.0, target_snr_db / 10.0);
}

FrameSignals build_frame(const ChannelState& state, const FrameTiming& timing, const FrameLayout& layout,
                         const Constellation& constellation, std::size_t zc_root, double snr_db,
                         RandomStream& rng) {
  const std::size_t k = state.users();
  const std::size_t total = layout.total_symbols();

  FrameSignals frame;
  frame.pilots = build_pilot_matrix(k, layout.p, zc_root);
  frame.data = map_symbols(rng, constellation, k, layout.n_blocks * layout.d, &frame.data_index);
  const ComplexMatrix x = hstack(frame.pilots, frame.data);

  const ComplexMatrix h_eff = hadamard_mul(channel_matrix(state, timing, 0, total, true),
                                           sat_doppler_precompensation(state, timing, 0, total));
  const ComplexMatrix clean = noiseless_rx(h_eff, x, state.steering);
  frame.sigma2 = calibrate_sigma2(snr_db, clean);
  const ComplexMatrix noisy = add_noise(clean, frame.sigma2, rng);

  frame.noiseless_pilot = clean.row_range(0, layout.p);
  frame.noiseless_data = clean.row_range(layout.p, total - layout.p);
  frame.rx_pilot = noisy.row_range(0, layout.p);
  frame.rx_data = noisy.row_range(layout.p, total - layout.p);
  return frame;
}

}  // namespace leosb
