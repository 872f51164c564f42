#pragma once

#include "leosb/airlink.hpp"
#include "leosb/channel.hpp"

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace leosb {

/// Raised for malformed files, unknown keys and out-of-range values.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, std::size_t line, const std::string& message);
  const std::string& key() const noexcept { return key_; }
  /// 1-based line number, 0 when the error is not tied to a line.
  std::size_t line() const noexcept { return line_; }
  /// The complaint without the key and line prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  std::string key_;
  std::size_t line_;
  std::string message_;
};

/// Scenario constants. Defaults reproduce the evaluated LEO uplink: 10x10
/// UPA, 10 terminals at 30 GHz from 600 km, 16-QAM, Rician 10 dB, up to
/// four NLoS paths, and a 15-pilot / 50 x 15-data frame.
struct SystemConfig {
  ArrayConfig array{};
  std::size_t k_users = 10;
  double fc_ghz = 30.0;
  double altitude_m = 600e3;
  double rician_kappa_db = 10.0;
  std::size_t max_paths = 4;
  bool random_paths = false;
  double sat_doppler_bound_hz = 788e3;
  double ut_doppler_bound_hz = 200.0;
  double mp_delay_max_s = 100e-9;

  std::size_t n_sc = 4096;
  std::size_t n_cp = 288;
  double scs_hz = 960e3;
  std::size_t subcarrier = 0;

  FrameLayout layout{};
  std::size_t zc_root = 1;
  std::size_t constellation_order = 16;

  std::vector<double> snr_grid_db{-10, -5, 0, 5, 10, 15, 20, 25, 30};
  std::vector<double> fig3_snr_grid_db{10, 20};
  std::vector<std::size_t> fig4_blocks{5, 10, 15, 20};
  double operating_snr_db = 19.0;

  std::size_t trials = 2000;
  std::uint64_t master_seed = 1;
  bool normalized_pathloss = false;
  std::string output_path;

  FrameTiming timing() const { return FrameTiming::from_spacing(n_sc, n_cp, scs_hz, subcarrier); }

  bool operator==(const SystemConfig&) const;
};

/// Throws ConfigError naming the first offending key.
void validate(const SystemConfig& cfg);

/// Flat `key = value` text, `#` starts a comment. Missing keys keep defaults.
SystemConfig parse_config_text(const std::string& text);
SystemConfig parse_config(const std::filesystem::path& path);

/// Every key with its current value; parse_config_text(emit_config(c)) == c.
std::string emit_config(const SystemConfig& cfg);

/// "a,b,c" -> values; accepts inf / +inf.
std::vector<double> parse_number_list(const std::string& text, const std::string& key = "list");

}  // namespace leosb
