#pragma once

#include "leosb/numerics.hpp"
#include "leosb/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace leosb {

struct ChannelState;

/// OFDM numerology of the simulated subcarrier.
struct FrameTiming {
  double t_s = 1.0 / (4096.0 * 960e3);  // sampling period
  std::size_t n_sc = 4096;
  std::size_t n_cp = 288;
  std::size_t subcarrier = 0;

  static FrameTiming from_spacing(std::size_t n_sc, std::size_t n_cp, double scs_hz, std::size_t subcarrier);

  double t_sl() const noexcept { return static_cast<double>(n_sc) * t_s; }
  double t_cp() const noexcept { return static_cast<double>(n_cp) * t_s; }
  double symbol_period() const noexcept { return t_sl() + t_cp(); }
  /// Start time of OFDM symbol `s`.
  double symbol_time(std::size_t s) const noexcept { return static_cast<double>(s) * symbol_period(); }
  /// Baseband frequency c / T_sl of the simulated subcarrier.
  double subcarrier_hz() const noexcept { return static_cast<double>(subcarrier) / t_sl(); }
};

/// Block 0 carries `p` pilot symbols; blocks 1..n_blocks carry `d` data symbols each.
struct FrameLayout {
  std::size_t p = 15;
  std::size_t d = 15;
  std::size_t n_blocks = 50;
  std::size_t update_interval = 5;

  std::size_t total_symbols() const noexcept { return p + n_blocks * d; }
  /// First frame symbol of data block `block` (1-based).
  std::size_t block_start(std::size_t block) const noexcept { return p + (block - 1) * d; }
  /// First column of data block `block` inside the concatenated data matrix.
  std::size_t data_offset(std::size_t block) const noexcept { return (block - 1) * d; }
};

/// Square QAM with Gray-coded labels; point i carries label i.
class Constellation {
 public:
  explicit Constellation(std::size_t order);

  std::size_t order() const noexcept { return points_.size(); }
  const std::vector<Complex>& points() const noexcept { return points_; }
  const Complex& point(std::size_t i) const { return points_.at(i); }
  /// Smallest distance between two distinct points.
  double min_distance() const noexcept { return min_distance_; }
  /// Index of the nearest point; ties go to the lowest index.
  std::size_t nearest(Complex z) const noexcept;

 private:
  std::vector<Complex> points_;
  double min_distance_ = 0.0;
};

struct FrameSignals {
  ComplexMatrix pilots;             // K x P
  ComplexMatrix data;               // K x (N*D), blocks concatenated
  std::vector<std::size_t> data_index;  // constellation index of each data entry, row-major
  ComplexMatrix rx_pilot;           // P x M
  ComplexMatrix rx_data;            // (N*D) x M
  ComplexMatrix noiseless_pilot;
  ComplexMatrix noiseless_data;
  double sigma2 = 0.0;

  /// Received rows of data block `block` (1-based), D x M.
  ComplexMatrix rx_block(const FrameLayout& layout, std::size_t block) const;
  /// Transmitted symbols of data block `block`, K x D.
  ComplexMatrix data_block(const FrameLayout& layout, std::size_t block) const;
};

struct ReceivedSignal {
  ComplexMatrix noisy;      // S x M
  ComplexMatrix noiseless;  // S x M
};

std::vector<Complex> zadoff_chu(std::size_t length, std::size_t root, std::size_t shift);

/// Row k is the Zadoff-Chu sequence of length p cyclically shifted by k.
ComplexMatrix build_pilot_matrix(std::size_t k_users, std::size_t p, std::size_t root);

/// i.i.d. uniform constellation draws; `indices` receives the labels when given.
ComplexMatrix map_symbols(RandomStream& rng, const Constellation& constellation, std::size_t k, std::size_t s,
                          std::vector<std::size_t>* indices = nullptr);

/// Y = (H_eff (.) X)^T A + Z, with Z circular Gaussian of per-entry variance sigma2.
ReceivedSignal synthesize_rx(const ComplexMatrix& h_eff, const ComplexMatrix& x, const ComplexMatrix& steering,
                             double sigma2, RandomStream& rng);

/// Per-entry noise variance that puts `noiseless` at `target_snr_db`; +inf gives 0.
double calibrate_sigma2(double target_snr_db, const ComplexMatrix& noiseless);

/// Draws pilots, data and noise for one frame. The transmitted symbols are
/// pre-rotated against the satellite Doppler before passing the full channel.
FrameSignals build_frame(const ChannelState& state, const FrameTiming& timing, const FrameLayout& layout,
                         const Constellation& constellation, std::size_t zc_root, double snr_db,
                         RandomStream& rng);

}  // namespace leosb
