#include "leosb/campaign.hpp"
#include "leosb/channel.hpp"
#include "leosb/config.hpp"
#include "leosb/rng.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>

using namespace leosb;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kCampaign = 2;

std::string complex_text(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17e%+.17ej", z.real(), z.imag());
  return buf;
}

void print_matrix(std::ostream& os, const std::string& name, const ComplexMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    os << name << ',' << r;
    for (std::size_t c = 0; c < m.cols(); ++c) os << ',' << complex_text(m(r, c));
    os << '\n';
  }
}

SystemConfig load(const std::string& path) {
  SystemConfig cfg = path.empty() ? SystemConfig{} : parse_config(path);
  validate(cfg);
  return cfg;
}

int simulate(const std::string& exp_name, const std::string& config_path, std::optional<std::size_t> trials,
             std::optional<std::uint64_t> seed, const std::string& snr_list, std::string output, int threads) {
  Experiment experiment;
  SystemConfig cfg;
  std::vector<double> snrs;
  try {
    experiment = parse_experiment(exp_name);
    cfg = load(config_path);
    if (trials) cfg.trials = *trials;
    if (seed) cfg.master_seed = *seed;
    validate(cfg);
    snrs = snr_list.empty() ? default_snr_list(cfg, experiment) : parse_number_list(snr_list, "--snr-list");
    if (output.empty()) output = cfg.output_path;
    if (output.empty()) throw ConfigError("output_path", 0, "no --output given and output_path is unset");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }

  try {
    const auto started = std::chrono::steady_clock::now();
    const CampaignResult result = run_campaign(cfg, experiment, snrs, threads);
    write_csv(result.records, output);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::cerr << experiment_name(experiment) << ": " << result.records.size() << " records, "
              << result.attempted - result.skipped << "/" << result.attempted << " trials in " << secs << " s -> "
              << output << '\n';
    for (const auto& d : result.diagnostics) std::cerr << "skipped " << d << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCampaign;
  }
  return kOk;
}

int dump_channel(const std::string& config_path, std::uint64_t seed) {
  SystemConfig cfg;
  try {
    cfg = load(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  try {
    RandomStream rng(seed);
    const ChannelState state = sample_scenario(rng, cfg);
    const FrameTiming timing = cfg.timing();
    std::cout << "matrix,row,values\n";
    print_matrix(std::cout, "steering", state.steering);
    print_matrix(std::cout, "channel", reference_channel(state, timing, 0, cfg.layout.total_symbols()));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCampaign;
  }
  return kOk;
}

int bench(int threads) {
  SystemConfig cfg;
  cfg.trials = 20;
  const std::vector<double> snrs{20.0};
  std::printf("%-8s %-10s %12s %12s\n", "exp", "runner", "seconds", "ms/trial");
  for (Experiment e : {Experiment::Fig2, Experiment::Fig3, Experiment::Fig4}) {
    for (int mode = 0; mode < 2; ++mode) {
      const auto t0 = std::chrono::steady_clock::now();
      if (mode == 0)
        run_campaign_serial(cfg, e, snrs);
      else
        run_campaign(cfg, e, snrs, threads);
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::printf("%-8s %-10s %12.4f %12.3f\n", std::string(experiment_name(e)).c_str(),
                  mode == 0 ? "serial" : "openmp", s, 1e3 * s / static_cast<double>(cfg.trials));
    }
  }
  std::printf("openmp threads: %d\n", threads > 0 ? threads : omp_get_max_threads());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LEO multi-user uplink channel estimation simulator"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP workers (0 = runtime default)")->check(CLI::NonNegativeNumber);

  auto* sim = app.add_subcommand("simulate", "run one experiment campaign and write its CSV");
  std::string exp_name, config_path, snr_list, output;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  sim->add_option("experiment", exp_name, "fig2 | fig3 | fig4")->required();
  sim->add_option("--config", config_path, "key = value config file")->required();
  sim->add_option("--trials", trials, "override trials");
  sim->add_option("--seed", seed, "override master_seed");
  sim->add_option("--snr-list", snr_list, "comma-separated SNRs in dB");
  sim->add_option("--output", output, "CSV path (defaults to output_path)");

  auto* dump = app.add_subcommand("dump-channel", "print one scenario's steering matrix and channel");
  std::string dump_config;
  std::uint64_t dump_seed = 0;
  dump->add_option("--config", dump_config, "key = value config file")->required();
  dump->add_option("--seed", dump_seed, "scenario seed")->required();

  auto* bench_cmd = app.add_subcommand("bench", "time the serial and OpenMP campaign runners");
  auto* defaults = app.add_subcommand("print-defaults", "print every config key with its default");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  if (*sim) return simulate(exp_name, config_path, trials, seed, snr_list, output, threads);
  if (*dump) return dump_channel(dump_config, dump_seed);
  if (*bench_cmd) return bench(threads);
  if (*defaults) {
    std::cout << emit_config(SystemConfig{});
    return kOk;
  }
  return kValidation;
}
