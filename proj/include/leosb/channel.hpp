#pragma once

#include "leosb/numerics.hpp"
#include "leosb/rng.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace leosb {

struct SystemConfig;
struct FrameTiming;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kEarthRadiusM = 6371e3;

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Uniform planar array; half-wavelength spacing is implied by the phase model.
struct ArrayConfig {
  std::size_t m_x = 10;
  std::size_t m_y = 10;
  std::size_t elements() const noexcept { return m_x * m_y; }
};

struct UserGeometry {
  double theta_x = 0.0;  // rad
  double theta_y = 0.0;  // rad
  double distance_m = 0.0;
  double nu_sat_hz = 0.0;
  double elevation_rad = 0.0;
};

struct FadingState {
  double rician_kappa = 10.0;  // linear
  std::size_t path_count = 1;
  std::vector<Complex> gains;        // g_{k,p}
  double tau_los_s = 0.0;
  std::vector<double> tau_mp_s;      // excess delay per path
  double nu_ut_los_hz = 0.0;
  std::vector<double> nu_ut_nlos_hz; // per path
  double beta_linear = 1.0;
};

/// Everything needed to evaluate the uplink channel of every user at any (t, f).
struct ChannelState {
  std::vector<UserGeometry> geometry;
  std::vector<FadingState> fading;
  ArrayConfig array;
  ComplexMatrix steering;  // K x M, row k is the array response of user k

  std::size_t users() const noexcept { return geometry.size(); }
};

/// exp(-j*pi*i*dir) / sqrt(m_d), i = 0..m_d-1
std::vector<Complex> upa_axis_vector(double dir, std::size_t m_d);

/// v_x(sin(theta_y) cos(theta_x)) (x) v_y(cos(theta_y)); unit norm.
std::vector<Complex> array_response(double theta_x, double theta_y, const ArrayConfig& array);

/// Free-space path loss in dB with the carrier in GHz and the range in metres.
double path_loss_db(double fc_ghz, double d_m);

/// Slant range to a satellite at `altitude_m` seen at elevation `elevation_rad`.
double slant_range_m(double elevation_rad, double altitude_m);

ChannelState sample_scenario(RandomStream& rng, const SystemConfig& cfg);

/// Steering matrix built from the stored geometry.
ComplexMatrix steering_matrix(const std::vector<UserGeometry>& geometry, const ArrayConfig& array);

Complex scalar_channel(const ChannelState& state, std::size_t k, double t, double f, bool include_sat_doppler);

/// K x count matrix; entry (k, s) is user k at symbol first + s.
ComplexMatrix channel_matrix(const ChannelState& state, const FrameTiming& timing, std::size_t first,
                             std::size_t count, bool include_sat_doppler);

/// The channel left after satellite-Doppler pre-compensation at the terminal.
ComplexMatrix reference_channel(const ChannelState& state, const FrameTiming& timing, std::size_t first,
                                std::size_t count);

/// exp(-j 2 pi t_s nu_k^SAT) per (k, s): the terminal-side pre-compensation.
ComplexMatrix sat_doppler_precompensation(const ChannelState& state, const FrameTiming& timing,
                                          std::size_t first, std::size_t count);

}  // namespace leosb
