#include "leosb/estimators.hpp"

#include <stdexcept>
#include <string>

namespace leosb {

std::string_view method_label(Method m) {
  switch (m) {
    case Method::PilotLs: return "P-LS";
    case Method::DecisionDirected: return "DD-SB";
    case Method::ModifiedDecisionDirected: return "MDD-SB";
    case Method::PilotBound: return "P-bound";
    case Method::Genie: return "GA";
    case Method::KnownData: return "MDD-SB-KD";
  }
  return "?";
}

ComplexMatrix separate_users(const ComplexMatrix& rx, const ComplexMatrix& steering_pinv) {
  return matmul(rx, steering_pinv).transpose();
}

ComplexMatrix pls_estimate(const ComplexMatrix& rx_pilot, const ComplexMatrix& pilots,
                           const ComplexMatrix& steering_pinv) {
  return hadamard_div(separate_users(rx_pilot, steering_pinv), pilots);
}

ComplexMatrix average_and_tile(const ComplexMatrix& raw, std::size_t width) {
  if (raw.cols() == 0) throw DimensionError("average_and_tile: nothing to average in " + shape_of(raw));
  if (width == 0) throw DimensionError("average_and_tile: width must be positive");
  ComplexMatrix out(raw.rows(), width);
  for (std::size_t k = 0; k < raw.rows(); ++k) {
    Complex sum{};
    for (const Complex v : raw.row(k)) sum += v;
    const Complex mean = sum / static_cast<double>(raw.cols());
    for (auto& v : out.row(k)) v = mean;
  }
  return out;
}

ComplexMatrix zf_equalize(const ComplexMatrix& rx_data, const ComplexMatrix& steering_pinv,
                          const ComplexMatrix& tiled_estimate) {
  return hadamard_div(separate_users(rx_data, steering_pinv), tiled_estimate);
}

DetectionResult detect(const ComplexMatrix& soft, const Constellation& constellation) {
  DetectionResult out;
  out.soft = soft;
  out.hard = ComplexMatrix(soft.rows(), soft.cols());
  out.indices.resize(soft.size());
  const auto in = soft.values();
  auto hard = out.hard.values();
  for (std::size_t i = 0; i < in.size(); ++i) {
    const std::size_t idx = constellation.nearest(in[i]);
    out.indices[i] = idx;
    hard[i] = constellation.point(idx);
  }
  return out;
}

ComplexMatrix ddsb_estimate(const ComplexMatrix& rx_pilot, const ComplexMatrix& rx_data, const ComplexMatrix& pilots,
                            const ComplexMatrix& detected, const ComplexMatrix& steering_pinv) {
  if (rx_data.rows() == 0) return pls_estimate(rx_pilot, pilots, steering_pinv);
  const ComplexMatrix rx = vstack(rx_pilot, rx_data);
  const ComplexMatrix symbols = hstack(pilots, detected);
  return hadamard_div(separate_users(rx, steering_pinv), symbols);
}

ComplexMatrix data_block_estimate(const ComplexMatrix& rx_block, const ComplexMatrix& symbols,
                                  const ComplexMatrix& steering_pinv) {
  return hadamard_div(separate_users(rx_block, steering_pinv), symbols);
}

std::vector<bool> update_schedule(const FrameLayout& layout) {
  std::vector<bool> schedule(layout.n_blocks + 1, false);
  if (layout.update_interval == 0) return schedule;
  for (std::size_t b = layout.update_interval; b <= layout.n_blocks; b += layout.update_interval) schedule[b] = true;
  return schedule;
}

std::vector<MddsbBlock> mddsb_run(const FrameSignals& frame, const ChannelEstimate& initial,
                                  const ComplexMatrix& steering_pinv, const FrameLayout& layout,
                                  const Constellation& constellation, const std::vector<bool>& schedule) {
  if (initial.width() != layout.d) {
    throw DimensionError("mddsb_run: initial estimate width " + std::to_string(initial.width()) +
                         " differs from block length " + std::to_string(layout.d));
  }
  if (schedule.size() != layout.n_blocks + 1) {
    throw std::invalid_argument("mddsb_run: schedule must have one entry per block including block 0");
  }

  std::vector<MddsbBlock> out;
  out.reserve(layout.n_blocks);
  ChannelEstimate current = initial;
  for (std::size_t b = 1; b <= layout.n_blocks; ++b) {
    MddsbBlock step;
    step.block = b;
    const ComplexMatrix rx = frame.rx_block(layout, b);
    step.detection = detect(zf_equalize(rx, steering_pinv, current.values), constellation);
    if (schedule[b]) {
      const ComplexMatrix fresh = data_block_estimate(rx, step.detection.hard, steering_pinv);
      current.values = average_and_tile(fresh, layout.d);
      current.first_symbol = layout.block_start(b);
      current.provenance = Method::ModifiedDecisionDirected;
      step.updated = true;
    }
    step.estimate = current;
    out.push_back(std::move(step));
  }
  return out;
}

std::vector<MddsbBlock> mddsb_run(const FrameSignals& frame, const ChannelEstimate& initial,
                                  const ComplexMatrix& steering_pinv, const FrameLayout& layout,
                                  const Constellation& constellation) {
  return mddsb_run(frame, initial, steering_pinv, layout, constellation, update_schedule(layout));
}

ChannelEstimate pbound_estimate(const ChannelState& state, const FrameTiming& timing, const FrameLayout& layout) {
  ChannelEstimate est;
  est.values = average_and_tile(reference_channel(state, timing, 0, layout.p), layout.d);
  est.first_symbol = 0;
  est.provenance = Method::PilotBound;
  return est;
}

DetectionResult genie_detect(const FrameSignals& frame, const ChannelState& state, const FrameTiming& timing,
                             const ComplexMatrix& steering_pinv, const Constellation& constellation,
                             const FrameLayout& layout, std::size_t block) {
  const ComplexMatrix truth = reference_channel(state, timing, layout.block_start(block), layout.d);
  return detect(zf_equalize(frame.rx_block(layout, block), steering_pinv, truth), constellation);
}

}  // namespace leosb
