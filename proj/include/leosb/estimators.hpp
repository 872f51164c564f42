#pragma once

#include "leosb/airlink.hpp"
#include "leosb/channel.hpp"
#include "leosb/numerics.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace leosb {

enum class Method { PilotLs, DecisionDirected, ModifiedDecisionDirected, PilotBound, Genie, KnownData };

std::string_view method_label(Method m);

/// A channel estimate held constant over a window of symbols.
struct ChannelEstimate {
  ComplexMatrix values;      // K x width
  std::size_t first_symbol = 0;
  Method provenance = Method::PilotLs;

  std::size_t width() const noexcept { return values.cols(); }
};

struct DetectionResult {
  ComplexMatrix soft;                // K x D zero-forcing outputs
  ComplexMatrix hard;                // K x D constellation points
  std::vector<std::size_t> indices;  // labels of `hard`, row-major
};

/// Spatial separation: (Y A^+)^T, S x M -> K x S.
ComplexMatrix separate_users(const ComplexMatrix& rx, const ComplexMatrix& steering_pinv);

/// Per-symbol least-squares estimate from the pilot block, K x P.
ComplexMatrix pls_estimate(const ComplexMatrix& rx_pilot, const ComplexMatrix& pilots,
                           const ComplexMatrix& steering_pinv);

/// Row means of `raw`, repeated across `width` columns.
ComplexMatrix average_and_tile(const ComplexMatrix& raw, std::size_t width);

ComplexMatrix zf_equalize(const ComplexMatrix& rx_data, const ComplexMatrix& steering_pinv,
                          const ComplexMatrix& tiled_estimate);

DetectionResult detect(const ComplexMatrix& soft, const Constellation& constellation);

/// Semi-blind estimate over pilots and detected data, K x (P + D). An empty
/// data block reduces to pls_estimate.
ComplexMatrix ddsb_estimate(const ComplexMatrix& rx_pilot, const ComplexMatrix& rx_data, const ComplexMatrix& pilots,
                            const ComplexMatrix& detected, const ComplexMatrix& steering_pinv);

/// Re-estimate from one data block and the symbols believed to be in it, K x D.
ComplexMatrix data_block_estimate(const ComplexMatrix& rx_block, const ComplexMatrix& symbols,
                                  const ComplexMatrix& steering_pinv);

/// Blocks 1..N that trigger a re-estimate: every `interval`-th block.
/// Entry 0 (the pilot block) is always false.
std::vector<bool> update_schedule(const FrameLayout& layout);

struct MddsbBlock {
  std::size_t block = 0;
  bool updated = false;
  DetectionResult detection;  // detected with the estimate in force before this block
  ChannelEstimate estimate;   // estimate in force after this block
};

/// Block-by-block modified decision-directed loop. Every block is equalized
/// with the current estimate and detected; scheduled blocks then replace the
/// estimate with the row-mean of their own data-only re-estimate.
std::vector<MddsbBlock> mddsb_run(const FrameSignals& frame, const ChannelEstimate& initial,
                                  const ComplexMatrix& steering_pinv, const FrameLayout& layout,
                                  const Constellation& constellation, const std::vector<bool>& schedule);

std::vector<MddsbBlock> mddsb_run(const FrameSignals& frame, const ChannelEstimate& initial,
                                  const ComplexMatrix& steering_pinv, const FrameLayout& layout,
                                  const Constellation& constellation);

/// Exact reference channel averaged over the pilot positions, tiled to D.
ChannelEstimate pbound_estimate(const ChannelState& state, const FrameTiming& timing, const FrameLayout& layout);

/// Zero-forcing with the exact per-symbol reference channel of `block`.
DetectionResult genie_detect(const FrameSignals& frame, const ChannelState& state, const FrameTiming& timing,
                             const ComplexMatrix& steering_pinv, const Constellation& constellation,
                             const FrameLayout& layout, std::size_t block);

}  // namespace leosb
