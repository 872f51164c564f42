#include "leosb/campaign.hpp"

#include "leosb/metrics.hpp"
#include "leosb/rng.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <tuple>

namespace leosb {

namespace {

struct Cell {
  double nmse_sum = 0.0;
  double ser_sum = 0.0;
  bool has_nmse = false;
  bool has_ser = false;
};

using CellKey = std::pair<std::string, std::optional<std::size_t>>;

struct TrialOutcome {
  std::optional<TrialResult> result;
  std::string error;
};

TrialOutcome guarded_trial(const SystemConfig& cfg, std::size_t trial, double snr, Experiment experiment) {
  TrialOutcome out;
  try {
    out.result = run_trial(cfg, trial, snr, experiment);
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

CampaignResult fold(const SystemConfig& cfg, const std::vector<double>& snr_list,
                    const std::vector<TrialOutcome>& outcomes) {
  CampaignResult result;
  result.attempted = outcomes.size();
  for (std::size_t si = 0; si < snr_list.size(); ++si) {
    std::map<CellKey, Cell> cells;
    std::vector<CellKey> order;
    std::size_t ok = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialOutcome& o = outcomes[si * cfg.trials + t];
      if (!o.result) {
        ++result.skipped;
        char buf[64];
        std::snprintf(buf, sizeof buf, "snr %g trial %zu: ", snr_list[si], t);
        result.diagnostics.push_back(buf + o.error);
        continue;
      }
      ++ok;
      for (const TrialMetric& m : o.result->metrics) {
        CellKey key{std::string(method_label(m.method)), m.block};
        auto [it, inserted] = cells.try_emplace(key);
        if (inserted) order.push_back(key);
        if (m.nmse) {
          it->second.nmse_sum += *m.nmse;
          it->second.has_nmse = true;
        }
        if (m.ser) {
          it->second.ser_sum += *m.ser;
          it->second.has_ser = true;
        }
      }
    }
    if (ok == 0) continue;
    for (const CellKey& key : order) {
      const Cell& c = cells.at(key);
      MetricRecord r;
      r.method = key.first;
      r.snr_db = snr_list[si];
      r.block = key.second;
      if (c.has_nmse) r.nmse = c.nmse_sum / static_cast<double>(ok);
      if (c.has_ser) r.ser = c.ser_sum / static_cast<double>(ok);
      r.trials = ok;
      r.seed = cfg.master_seed;
      result.records.push_back(std::move(r));
    }
  }
  if (static_cast<double>(result.skipped) > 0.01 * static_cast<double>(result.attempted)) {
    std::string msg = "campaign: " + std::to_string(result.skipped) + " of " + std::to_string(result.attempted) +
                      " trials skipped";
    if (!result.diagnostics.empty()) msg += " (first: " + result.diagnostics.front() + ")";
    throw CampaignError(msg);
  }
  return result;
}

std::string fmt_real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

}  // namespace

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Fig2: return "fig2";
    case Experiment::Fig3: return "fig3";
    case Experiment::Fig4: return "fig4";
  }
  return "?";
}

Experiment parse_experiment(std::string_view name) {
  if (name == "fig2") return Experiment::Fig2;
  if (name == "fig3") return Experiment::Fig3;
  if (name == "fig4") return Experiment::Fig4;
  throw std::invalid_argument("unknown experiment '" + std::string(name) + "' (expected fig2, fig3 or fig4)");
}

const TrialMetric* TrialResult::find(Method method, std::optional<std::size_t> block) const {
  for (const auto& m : metrics)
    if (m.method == method && m.block == block) return &m;
  return nullptr;
}

std::uint64_t trial_seed(std::uint64_t master_seed, Experiment experiment, double snr_db, std::size_t trial_index) {
  return derive_seed({master_seed, static_cast<std::uint64_t>(experiment) + 1, std::bit_cast<std::uint64_t>(snr_db),
                      static_cast<std::uint64_t>(trial_index)});
}

FrameLayout experiment_layout(const SystemConfig& cfg, Experiment experiment) {
  FrameLayout layout = cfg.layout;
  switch (experiment) {
    case Experiment::Fig2: layout.n_blocks = 1; break;
    case Experiment::Fig3: break;
    case Experiment::Fig4:
      layout.n_blocks = *std::max_element(cfg.fig4_blocks.begin(), cfg.fig4_blocks.end());
      break;
  }
  return layout;
}

std::vector<double> default_snr_list(const SystemConfig& cfg, Experiment experiment) {
  return experiment == Experiment::Fig3 ? cfg.fig3_snr_grid_db : cfg.snr_grid_db;
}

TrialResult run_trial(const SystemConfig& cfg, std::size_t trial_index, double snr_db, Experiment experiment) {
  const auto started = std::chrono::steady_clock::now();
  TrialResult result;
  result.seed = trial_seed(cfg.master_seed, experiment, snr_db, trial_index);
  RandomStream rng(result.seed);

  const FrameTiming timing = cfg.timing();
  const FrameLayout layout = experiment_layout(cfg, experiment);
  const Constellation constellation(cfg.constellation_order);

  const ChannelState state = sample_scenario(rng, cfg);
  const ComplexMatrix pinv = right_pinv(state.steering);
  const FrameSignals frame = build_frame(state, timing, layout, constellation, cfg.zc_root, snr_db, rng);

  const ComplexMatrix raw_pilot = pls_estimate(frame.rx_pilot, frame.pilots, pinv);
  const ComplexMatrix pls_tile = average_and_tile(raw_pilot, layout.d);

  switch (experiment) {
    case Experiment::Fig2: {
      const ComplexMatrix rx1 = frame.rx_block(layout, 1);
      const DetectionResult det = detect(zf_equalize(rx1, pinv, pls_tile), constellation);
      const ComplexMatrix raw_sb = ddsb_estimate(frame.rx_pilot, rx1, frame.pilots, det.hard, pinv);
      const std::size_t window = layout.p + layout.d;
      const ComplexMatrix ref = reference_channel(state, timing, 0, window);
      result.metrics.push_back({Method::PilotLs, 1, nmse(ref, average_and_tile(raw_pilot, window)), std::nullopt});
      result.metrics.push_back(
          {Method::DecisionDirected, 1, nmse(ref, average_and_tile(raw_sb, window)), std::nullopt});
      break;
    }
    case Experiment::Fig3: {
      const ChannelEstimate initial{pls_tile, 0, Method::PilotLs};
      const auto mdd = mddsb_run(frame, initial, pinv, layout, constellation);
      const ChannelEstimate bound = pbound_estimate(state, timing, layout);
      const ComplexMatrix ref0 = reference_channel(state, timing, 0, layout.p);
      result.metrics.push_back({Method::PilotLs, 0, nmse(ref0, average_and_tile(raw_pilot, layout.p)), std::nullopt});
      for (const MddsbBlock& step : mdd) {
        if (!step.updated) continue;
        const std::size_t b = step.block;
        const ComplexMatrix ref = reference_channel(state, timing, layout.block_start(b), layout.d);
        const ComplexMatrix known =
            average_and_tile(data_block_estimate(frame.rx_block(layout, b), frame.data_block(layout, b), pinv), layout.d);
        result.metrics.push_back({Method::ModifiedDecisionDirected, b, nmse(ref, step.estimate.values), std::nullopt});
        result.metrics.push_back({Method::PilotBound, b, nmse(ref, bound.values), std::nullopt});
        result.metrics.push_back({Method::KnownData, b, nmse(ref, known), std::nullopt});
      }
      break;
    }
    case Experiment::Fig4: {
      const ChannelEstimate initial{pls_tile, 0, Method::PilotLs};
      const auto mdd = mddsb_run(frame, initial, pinv, layout, constellation);
      const ChannelEstimate bound = pbound_estimate(state, timing, layout);
      for (const std::size_t b : cfg.fig4_blocks) {
        const ComplexMatrix truth = frame.data_block(layout, b);
        const DetectionResult pb = detect(zf_equalize(frame.rx_block(layout, b), pinv, bound.values), constellation);
        const DetectionResult ga = genie_detect(frame, state, timing, pinv, constellation, layout, b);
        result.metrics.push_back({Method::ModifiedDecisionDirected, b, std::nullopt, ser(truth, mdd[b - 1].detection.hard)});
        result.metrics.push_back({Method::PilotBound, b, std::nullopt, ser(truth, pb.hard)});
        result.metrics.push_back({Method::Genie, b, std::nullopt, ser(truth, ga.hard)});
      }
      break;
    }
  }
  result.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

CampaignResult run_campaign(const SystemConfig& cfg, Experiment experiment, const std::vector<double>& snr_list,
                            int threads) {
  const std::size_t total = snr_list.size() * cfg.trials;
  std::vector<TrialOutcome> outcomes(total);
  const int workers = threads > 0 ? threads : omp_get_max_threads();

#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    outcomes[idx] = guarded_trial(cfg, idx % cfg.trials, snr_list[idx / cfg.trials], experiment);
  }
  return fold(cfg, snr_list, outcomes);
}

CampaignResult run_campaign_serial(const SystemConfig& cfg, Experiment experiment,
                                   const std::vector<double>& snr_list) {
  std::vector<TrialOutcome> outcomes;
  outcomes.reserve(snr_list.size() * cfg.trials);
  for (const double snr : snr_list)
    for (std::size_t t = 0; t < cfg.trials; ++t) outcomes.push_back(guarded_trial(cfg, t, snr, experiment));
  return fold(cfg, snr_list, outcomes);
}

std::string format_csv(std::vector<MetricRecord> records) {
  std::sort(records.begin(), records.end(), [](const MetricRecord& a, const MetricRecord& b) {
    return std::tie(a.method, a.snr_db, a.block) < std::tie(b.method, b.snr_db, b.block);
  });
  std::string out = "method,snr_db,block,nmse,ser,trials,seed\n";
  for (const auto& r : records) {
    out += r.method;
    out += ',' + fmt_real(r.snr_db) + ',';
    if (r.block) out += std::to_string(*r.block);
    out += ',';
    if (r.nmse) out += fmt_real(*r.nmse);
    out += ',';
    if (r.ser) out += fmt_real(*r.ser);
    out += ',' + std::to_string(r.trials) + ',' + std::to_string(r.seed) + '\n';
  }
  return out;
}

void write_csv(const std::vector<MetricRecord>& records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path.string() + "' for writing");
  out << format_csv(records);
  out.flush();
  if (!out) throw std::runtime_error("write_csv: write to '" + path.string() + "' failed");
}

}  // namespace leosb
