#pragma once

#include "leosb/config.hpp"
#include "leosb/estimators.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace leosb {

enum class Experiment { Fig2, Fig3, Fig4 };

std::string_view experiment_name(Experiment e);
/// "fig2" | "fig3" | "fig4"; throws std::invalid_argument otherwise.
Experiment parse_experiment(std::string_view name);

class CampaignError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrialMetric {
  Method method = Method::PilotLs;
  std::optional<std::size_t> block;
  std::optional<double> nmse;
  std::optional<double> ser;
};

struct TrialResult {
  std::uint64_t seed = 0;
  std::vector<TrialMetric> metrics;
  double elapsed_s = 0.0;

  /// First metric for (method, block), or nullptr.
  const TrialMetric* find(Method method, std::optional<std::size_t> block) const;
};

/// One aggregated output row.
struct MetricRecord {
  std::string method;
  double snr_db = 0.0;
  std::optional<std::size_t> block;
  std::optional<double> nmse;
  std::optional<double> ser;
  std::size_t trials = 0;
  std::uint64_t seed = 0;

  bool operator==(const MetricRecord&) const = default;
};

struct CampaignResult {
  std::vector<MetricRecord> records;
  std::size_t attempted = 0;
  std::size_t skipped = 0;
  std::vector<std::string> diagnostics;
};

/// Substream seed of one trial; a pure function of its arguments.
std::uint64_t trial_seed(std::uint64_t master_seed, Experiment experiment, double snr_db, std::size_t trial_index);

/// Frame layout an experiment actually reads (the frame is cut after its last used block).
FrameLayout experiment_layout(const SystemConfig& cfg, Experiment experiment);

/// SNR grid an experiment uses unless overridden: fig3 has its own grid.
std::vector<double> default_snr_list(const SystemConfig& cfg, Experiment experiment);

/// One Monte Carlo trial: scenario, frame, the experiment's estimators and metrics.
///
/// fig2 scores P-LS and DD-SB at block 1 over the pilot + block-1 window.
/// fig3 scores P-LS at block 0 and MDD-SB, P-bound and the known-data
/// benchmark at every scheduled block. fig4 records MDD-SB, P-bound and GA
/// symbol error rates at the configured blocks.
TrialResult run_trial(const SystemConfig& cfg, std::size_t trial_index, double snr_db, Experiment experiment);

/// Runs cfg.trials trials per SNR on `threads` OpenMP workers (0 = runtime
/// default) and folds them in trial-index order, so the records do not
/// depend on scheduling. More than 1% skipped trials raises CampaignError.
CampaignResult run_campaign(const SystemConfig& cfg, Experiment experiment, const std::vector<double>& snr_list,
                            int threads = 0);

/// Same contract as run_campaign, evaluated in a single plain loop.
CampaignResult run_campaign_serial(const SystemConfig& cfg, Experiment experiment,
                                   const std::vector<double>& snr_list);

/// Header plus one line per record, sorted by (method, snr_db, block).
std::string format_csv(std::vector<MetricRecord> records);
void write_csv(const std::vector<MetricRecord>& records, const std::filesystem::path& path);

}  // namespace leosb
