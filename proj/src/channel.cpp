#include "leosb/channel.hpp"

#include "leosb/airlink.hpp"
#include "leosb/config.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace leosb {

namespace {

constexpr double kMinSeparation = 0.05;       // direction-cosine distance between users
constexpr std::size_t kMaxPlacementAttempts = 100;
constexpr double kMaxGramCondition = 1e6;
constexpr double kMinElevationRad = std::numbers::pi / 6.0;
constexpr double kMaxElevationRad = std::numbers::pi / 2.0;

Complex cis(double phase) { return {std::cos(phase), std::sin(phase)}; }

struct DirectionCosines {
  double u;  // sin(theta_y) cos(theta_x)
  double w;  // cos(theta_y)
};

DirectionCosines draw_visible_direction(RandomStream& rng) {
  for (;;) {
    const double u = rng.uniform(-1.0, 1.0);
    const double w = rng.uniform(-1.0, 1.0);
    if (u * u + w * w <= 1.0) return {u, w};
  }
}

std::vector<UserGeometry> sample_geometry(RandomStream& rng, const SystemConfig& cfg) {
  std::vector<UserGeometry> users;
  std::vector<DirectionCosines> placed;
  users.reserve(cfg.k_users);
  for (std::size_t k = 0; k < cfg.k_users; ++k) {
    DirectionCosines dir{};
    bool ok = false;
    for (std::size_t attempt = 0; attempt < kMaxPlacementAttempts && !ok; ++attempt) {
      dir = draw_visible_direction(rng);
      ok = std::none_of(placed.begin(), placed.end(), [&](const DirectionCosines& p) {
        return std::hypot(p.u - dir.u, p.w - dir.w) < kMinSeparation;
      });
    }
    if (!ok) {
      throw ScenarioError("sample_scenario: could not place user " + std::to_string(k) + " after " +
                          std::to_string(kMaxPlacementAttempts) + " attempts");
    }
    placed.push_back(dir);

    UserGeometry g;
    g.theta_y = std::acos(dir.w);
    const double sin_y = std::sqrt(std::max(0.0, 1.0 - dir.w * dir.w));
    g.theta_x = sin_y > 0.0 ? std::acos(std::clamp(dir.u / sin_y, -1.0, 1.0)) : 0.0;
    g.elevation_rad = rng.uniform(kMinElevationRad, kMaxElevationRad);
    g.distance_m = slant_range_m(g.elevation_rad, cfg.altitude_m);
    g.nu_sat_hz = rng.uniform(-cfg.sat_doppler_bound_hz, cfg.sat_doppler_bound_hz);
    users.push_back(g);
  }
  return users;
}

FadingState sample_fading(RandomStream& rng, const SystemConfig& cfg, const UserGeometry& geo) {
  FadingState f;
  f.rician_kappa = std::pow(10.0, cfg.rician_kappa_db / 10.0);
  f.path_count = cfg.random_paths ? 1 + rng.index(cfg.max_paths) : cfg.max_paths;
  f.tau_los_s = geo.distance_m / kSpeedOfLight;
  f.nu_ut_los_hz = rng.uniform(-cfg.ut_doppler_bound_hz, cfg.ut_doppler_bound_hz);
  f.gains.reserve(f.path_count);
  for (std::size_t p = 0; p < f.path_count; ++p) {
    const double re = rng.normal();
    const double im = rng.normal();
    f.gains.emplace_back(re, im);
    // (0, max]
    f.tau_mp_s.push_back(cfg.mp_delay_max_s - rng.uniform(0.0, 1.0) * cfg.mp_delay_max_s);
    f.nu_ut_nlos_hz.push_back(rng.uniform(-cfg.ut_doppler_bound_hz, cfg.ut_doppler_bound_hz));
  }
  f.beta_linear =
      cfg.normalized_pathloss ? 1.0 : std::pow(10.0, -path_loss_db(cfg.fc_ghz, geo.distance_m) / 10.0);
  return f;
}

}  // namespace

std::vector<Complex> upa_axis_vector(double dir, std::size_t m_d) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(m_d));
  std::vector<Complex> v(m_d);
  for (std::size_t i = 0; i < m_d; ++i) v[i] = scale * cis(-std::numbers::pi * static_cast<double>(i) * dir);
  return v;
}

std::vector<Complex> array_response(double theta_x, double theta_y, const ArrayConfig& array) {
  const auto vx = upa_axis_vector(std::sin(theta_y) * std::cos(theta_x), array.m_x);
  const auto vy = upa_axis_vector(std::cos(theta_y), array.m_y);
  return kronecker(vx, vy);
}

double path_loss_db(double fc_ghz, double d_m) {
  if (!(fc_ghz > 0.0) || !(d_m > 0.0)) {
    throw std::invalid_argument("path_loss_db: carrier and distance must be positive");
  }
  return 32.45 + 20.0 * std::log10(fc_ghz) + 20.0 * std::log10(d_m);
}

double slant_range_m(double elevation_rad, double altitude_m) {
  const double re = kEarthRadiusM;
  const double s = std::sin(elevation_rad);
  return std::sqrt(re * re * s * s + altitude_m * altitude_m + 2.0 * re * altitude_m) - re * s;
}

ComplexMatrix steering_matrix(const std::vector<UserGeometry>& geometry, const ArrayConfig& array) {
  ComplexMatrix a(geometry.size(), array.elements());
  for (std::size_t k = 0; k < geometry.size(); ++k) {
    const auto row = array_response(geometry[k].theta_x, geometry[k].theta_y, array);
    std::copy(row.begin(), row.end(), a.row(k).begin());
  }
  return a;
}

ChannelState sample_scenario(RandomStream& rng, const SystemConfig& cfg) {
  ChannelState state;
  state.array = cfg.array;
  state.geometry = sample_geometry(rng, cfg);
  state.fading.reserve(cfg.k_users);
  for (const auto& g : state.geometry) state.fading.push_back(sample_fading(rng, cfg, g));
  state.steering = steering_matrix(state.geometry, state.array);

  const double cond = hermitian_condition(matmul(state.steering, state.steering.adjoint()));
  if (!(cond < kMaxGramCondition)) {
    throw ScenarioError("sample_scenario: steering Gram matrix condition " + std::to_string(cond) +
                        " exceeds guard");
  }
  return state;
}

Complex scalar_channel(const ChannelState& state, std::size_t k, double t, double f, bool include_sat_doppler) {
  const FadingState& fd = state.fading.at(k);
  constexpr double two_pi = 2.0 * std::numbers::pi;

  Complex los = std::sqrt(fd.rician_kappa) * cis(two_pi * (t * fd.nu_ut_los_hz - f * fd.tau_los_s));
  Complex nlos{};
  for (std::size_t p = 0; p < fd.path_count; ++p) {
    const double tau = fd.tau_los_s + fd.tau_mp_s[p];
    nlos += fd.gains[p] * cis(two_pi * (t * fd.nu_ut_nlos_hz[p] - f * tau));
  }
  nlos /= std::sqrt(static_cast<double>(fd.path_count));

  Complex h = std::sqrt(fd.beta_linear / (fd.rician_kappa + 1.0)) * (los + nlos);
  if (include_sat_doppler) h *= cis(two_pi * t * state.geometry[k].nu_sat_hz);
  return h;
}

ComplexMatrix channel_matrix(const ChannelState& state, const FrameTiming& timing, std::size_t first,
                             std::size_t count, bool include_sat_doppler) {
  if (count == 0) throw DimensionError("channel_matrix: empty symbol range");
  ComplexMatrix h(state.users(), count);
  const double f = timing.subcarrier_hz();
  for (std::size_t k = 0; k < state.users(); ++k)
    for (std::size_t s = 0; s < count; ++s)
      h(k, s) = scalar_channel(state, k, timing.symbol_time(first + s), f, include_sat_doppler);
  return h;
}

ComplexMatrix reference_channel(const ChannelState& state, const FrameTiming& timing, std::size_t first,
                                std::size_t count) {
  return channel_matrix(state, timing, first, count, false);
}

ComplexMatrix sat_doppler_precompensation(const ChannelState& state, const FrameTiming& timing,
                                          std::size_t first, std::size_t count) {
  ComplexMatrix out(state.users(), count);
  for (std::size_t k = 0; k < state.users(); ++k)
    for (std::size_t s = 0; s < count; ++s)
      out(k, s) = cis(-2.0 * std::numbers::pi * timing.symbol_time(first + s) * state.geometry[k].nu_sat_hz);
  return out;
}

}  // namespace leosb
