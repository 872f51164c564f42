#include "leosb/campaign.hpp"
#include "leosb/estimators.hpp"
#include "leosb/metrics.hpp"
#include "properties.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <map>
#include <string>

using namespace leosb;
using namespace leosb::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

/// (method, snr, block) -> record
using Table = std::map<std::tuple<std::string, double, std::size_t>, MetricRecord>;

Table tabulate(const CampaignResult& r) {
  Table t;
  for (const auto& rec : r.records) t[{rec.method, rec.snr_db, rec.block.value_or(0)}] = rec;
  return t;
}

double value(const Table& t, const std::string& method, double snr, std::size_t block, bool want_ser) {
  const auto it = t.find({method, snr, block});
  if (it == t.end()) return std::numeric_limits<double>::quiet_NaN();
  const auto& v = want_ser ? it->second.ser : it->second.nmse;
  return v.value_or(std::numeric_limits<double>::quiet_NaN());
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    for (std::size_t q = i; q <= j; ++q) r[order[q]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i] / n;
    my += ry[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

// 1. Noiseless oracle exactness.
Verdict criterion1() {
  const auto t0 = Clock::now();
  const double inf = std::numeric_limits<double>::infinity();
  SystemConfig cfg;
  const FrameTiming timing = cfg.timing();
  const FrameLayout layout = cfg.layout;
  const Constellation con(cfg.constellation_order);
  double worst_nmse = 0.0, worst_ser = 0.0;
  const int scenarios = 10;
  for (int i = 0; i < scenarios; ++i) {
    RandomStream rng(derive_seed({0xC1, static_cast<std::uint64_t>(i)}));
    const ChannelState state = static_scenario(rng, cfg);
    const ComplexMatrix pinv = right_pinv(state.steering);
    const FrameSignals frame = build_frame(state, timing, layout, con, cfg.zc_root, inf, rng);
    if (frame.sigma2 != 0.0) return {false, "sigma2 not zero at infinite SNR"};

    const ComplexMatrix raw = pls_estimate(frame.rx_pilot, frame.pilots, pinv);
    const ComplexMatrix tile = average_and_tile(raw, layout.d);
    worst_nmse = std::max(worst_nmse, nmse(reference_channel(state, timing, 0, layout.p), average_and_tile(raw, layout.p)));

    const ComplexMatrix rx1 = frame.rx_block(layout, 1);
    const DetectionResult d1 = detect(zf_equalize(rx1, pinv, tile), con);
    const ComplexMatrix sb = ddsb_estimate(frame.rx_pilot, rx1, frame.pilots, d1.hard, pinv);
    const std::size_t w = layout.p + layout.d;
    worst_nmse = std::max(worst_nmse, nmse(reference_channel(state, timing, 0, w), average_and_tile(sb, w)));

    const auto steps = mddsb_run(frame, {tile, 0, Method::PilotLs}, pinv, layout, con);
    for (const auto& st : steps) {
      const ComplexMatrix truth = frame.data_block(layout, st.block);
      const ComplexMatrix ref = reference_channel(state, timing, layout.block_start(st.block), layout.d);
      worst_nmse = std::max(worst_nmse, nmse(ref, st.estimate.values));
      worst_ser = std::max(worst_ser, ser(truth, st.detection.hard));
      worst_ser = std::max(worst_ser, ser(truth, detect(zf_equalize(frame.rx_block(layout, st.block), pinv, tile), con).hard));
    }
  }
  const double secs = seconds_since(t0);
  const bool pass = worst_nmse < 1e-20 && worst_ser == 0.0 && secs < 5.0;
  return {pass, fmt("max NMSE %.3e (< 1e-20), max SER %.3g (== 0), %d scenarios x 50 blocks, %.2f s (< 5 s)",
                    worst_nmse, worst_ser, scenarios, secs)};
}

// 2. Pseudo-inverse suite.
Verdict criterion2() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  auto check = [&](const ComplexMatrix& a) {
    const ComplexMatrix p = right_pinv(a);
    const ComplexMatrix ap = matmul(a, p), pa = matmul(p, a);
    worst = std::max({worst, rel_frobenius(matmul(ap, a), a), rel_frobenius(matmul(pa, p), p),
                      std::sqrt((ap - ap.adjoint()).frobenius_norm2() / ap.frobenius_norm2()),
                      std::sqrt((pa - pa.adjoint()).frobenius_norm2() / pa.frobenius_norm2())});
  };
  RandomStream rng(0xC2);
  for (int i = 0; i < 100; ++i) check(random_matrix(rng, 10, 100));
  const SystemConfig cfg;
  for (int i = 0; i < 100; ++i) check(sample_scenario(rng, cfg).steering);
  const double secs = seconds_since(t0);
  return {worst < 1e-10 && secs < 5.0,
          fmt("worst Moore-Penrose residual %.3e (< 1e-10) over 100 random 10x100 + 100 steering, %.2f s (< 5 s)", worst,
              secs)};
}

// 3. Noise calibration.
Verdict criterion3() {
  SystemConfig cfg;
  const Constellation con(cfg.constellation_order);
  RandomStream rng(0xC3);
  const ChannelState state = sample_scenario(rng, cfg);
  const FrameSignals frame =
      build_frame(state, cfg.timing(), cfg.layout, con, cfg.zc_root, std::numeric_limits<double>::infinity(), rng);
  const ComplexMatrix clean = vstack(frame.noiseless_pilot, frame.noiseless_data);
  const double signal = clean.frobenius_norm2() / static_cast<double>(clean.size());
  // A zero channel leaves only the noise in the synthesized output.
  const ComplexMatrix silent(state.users(), clean.rows());
  bool pass = true;
  std::string detail;
  for (double target : {-10.0, 0.0, 20.0}) {
    const double sigma2 = calibrate_sigma2(target, clean);
    double noise = 0.0;
    std::size_t samples = 0;
    while (samples < 1000000) {
      const ReceivedSignal rx = synthesize_rx(silent, silent, state.steering, sigma2, rng);
      noise += rx.noisy.frobenius_norm2();
      samples += rx.noisy.size();
    }
    const double measured = 10.0 * std::log10(signal / (noise / static_cast<double>(samples)));
    const double err = measured - target;
    pass = pass && std::abs(err) <= 0.1;
    detail += fmt("%s%g dB -> %.4f dB (%zu samples)", detail.empty() ? "" : "; ", target, measured, samples);
  }
  return {pass, detail + " (tolerance 0.1 dB)"};
}

struct Timed {
  CampaignResult result;
  double seconds;
};

Timed campaign(const SystemConfig& cfg, Experiment e, const std::vector<double>& snrs) {
  const auto t0 = Clock::now();
  CampaignResult r = run_campaign(cfg, e, snrs);
  return {std::move(r), seconds_since(t0)};
}

SystemConfig acceptance_config() {
  SystemConfig cfg;
  cfg.trials = 2000;
  return cfg;
}

// 4. fig2 trend.
Verdict criterion4() {
  const SystemConfig cfg = acceptance_config();
  const std::vector<double> grid{-10, -5, 0, 5, 10, 15, 20, 25, 30};
  const Timed run = campaign(cfg, Experiment::Fig2, grid);
  const Table t = tabulate(run.result);
  auto pls = [&](double s) { return value(t, "P-LS", s, 1, false); };
  auto dd = [&](double s) { return value(t, "DD-SB", s, 1, false); };

  bool pass = true;
  std::string detail;
  for (double s : {5.0, 10.0, 20.0}) pass = pass && dd(s) < pls(s);
  pass = pass && pls(-10) <= dd(-10);

  // Crossover: first grid interval where log(DD/P-LS) changes sign, interpolated linearly.
  double cross = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double a = std::log(dd(grid[i]) / pls(grid[i])), b = std::log(dd(grid[i + 1]) / pls(grid[i + 1]));
    if (a >= 0.0 && b < 0.0) {
      cross = grid[i] + (grid[i + 1] - grid[i]) * a / (a - b);
      break;
    }
  }
  pass = pass && cross >= -5.0 && cross <= 5.0;
  const double floor_pls = pls(20) / pls(30), floor_dd = dd(20) / dd(30);
  pass = pass && floor_pls < 3.0 && floor_dd < 3.0 && run.seconds < 180.0;

  detail = fmt("P-LS/DD-SB NMSE at -10: %.3e/%.3e, 5: %.3e/%.3e, 10: %.3e/%.3e, 20: %.3e/%.3e; crossover %.2f dB "
               "(in [-5,5]); floor ratios 20/30 dB P-LS %.2f DD-SB %.2f (< 3); %zu trials/SNR, %.1f s (< 180 s)",
               pls(-10), dd(-10), pls(5), dd(5), pls(10), dd(10), pls(20), dd(20), cross, floor_pls, floor_dd,
               cfg.trials, run.seconds);
  return {pass, detail};
}

// 5. fig3 trend.
Verdict criterion5() {
  const SystemConfig cfg = acceptance_config();
  const Timed run = campaign(cfg, Experiment::Fig3, {10.0, 20.0});
  const Table t = tabulate(run.result);

  bool below = true;
  std::string worst_gap;
  double worst_ratio = 0.0;
  for (std::size_t b = 10; b <= cfg.layout.n_blocks; b += 5) {
    const double m = value(t, "MDD-SB", 10.0, b, false), p = value(t, "P-bound", 10.0, b, false);
    if (!(m < p)) below = false;
    worst_ratio = std::max(worst_ratio, m / p);
  }
  std::vector<double> blocks, pb;
  for (std::size_t b = 5; b <= cfg.layout.n_blocks; b += 5) {
    blocks.push_back(static_cast<double>(b));
    pb.push_back(value(t, "P-bound", 10.0, b, false));
  }
  const double rho = spearman(blocks, pb);

  bool near_kd = true;
  double kd_worst = 0.0;
  std::size_t kd_worst_block = 0;
  for (std::size_t b = 5; b <= cfg.layout.n_blocks; b += 5) {
    const double r = value(t, "MDD-SB", 20.0, b, false) / value(t, "MDD-SB-KD", 20.0, b, false);
    if (!(r <= 3.0)) near_kd = false;
    if (r > kd_worst) {
      kd_worst = r;
      kd_worst_block = b;
    }
  }
  const bool pass = below && rho > 0.9 && near_kd && run.seconds < 300.0;
  return {pass, fmt("10 dB: MDD-SB < P-bound at blocks 10..50 %s (max MDD/PB %.3f); P-bound Spearman rho %.3f (> 0.9); "
                    "20 dB: max MDD-SB/known-data %.2f at block %zu (<= 3) %s, block 5 ratio %.2f; %.1f s (< 300 s)",
                    below ? "yes" : "NO", worst_ratio, rho, kd_worst, kd_worst_block, near_kd ? "ok" : "FAILS",
                    value(t, "MDD-SB", 20.0, 5, false) / value(t, "MDD-SB-KD", 20.0, 5, false), run.seconds)};
}

// 6. fig4 trend at the operating SNR.
Verdict criterion6() {
  const SystemConfig cfg = acceptance_config();
  const double snr = cfg.operating_snr_db;
  const Timed run = campaign(cfg, Experiment::Fig4, {snr});
  const Table t = tabulate(run.result);
  auto s = [&](const char* m, std::size_t b) { return value(t, m, snr, b, true); };

  const double ga20 = s("GA", 20), pb20 = s("P-bound", 20), mdd20 = s("MDD-SB", 20);
  const bool ga_ok = ga20 >= 5e-4 && ga20 <= 2e-3;
  const bool pb_ok = pb20 > 0.1;
  const bool near_ga = mdd20 < 3.0 * ga20;
  bool beats_pb = true;
  for (std::size_t b : {10u, 15u, 20u}) beats_pb = beats_pb && s("MDD-SB", b) < s("P-bound", b);
  const bool pass = ga_ok && pb_ok && near_ga && beats_pb && run.seconds < 300.0;
  return {pass, fmt("at %.1f dB: GA SER(20) %.3e (in [5e-4, 2e-3]) %s; P-bound SER(20) %.3e (> 0.1) %s; MDD-SB "
                    "SER(20) %.3e = %.2fx GA (< 3x) %s; MDD-SB < P-bound at 10/15/20: %.3e/%.3e %.3e/%.3e %.3e/%.3e %s; "
                    "%.1f s (< 300 s)",
                    snr, ga20, ga_ok ? "ok" : "FAILS", pb20, pb_ok ? "ok" : "FAILS", mdd20, mdd20 / ga20,
                    near_ga ? "ok" : "FAILS", s("MDD-SB", 10), s("P-bound", 10), s("MDD-SB", 15), s("P-bound", 15),
                    s("MDD-SB", 20), s("P-bound", 20), beats_pb ? "ok" : "FAILS", run.seconds)};
}

// 7. Determinism across runs and worker counts.
Verdict criterion7() {
  SystemConfig cfg;
  cfg.trials = 24;
  bool pass = true;
  std::string detail;
  for (Experiment e : {Experiment::Fig2, Experiment::Fig3, Experiment::Fig4}) {
    const std::vector<double> snrs = e == Experiment::Fig2 ? std::vector<double>{-10, 10, 30} : std::vector<double>{10, 20};
    const std::string serial = format_csv(run_campaign_serial(cfg, e, snrs).records);
    std::size_t variants = 1;
    bool same = true;
    for (int threads : {1, 2, 3, 8, 1}) {
      same = same && format_csv(run_campaign(cfg, e, snrs, threads).records) == serial;
      ++variants;
    }
    pass = pass && same;
    detail += fmt("%s%s %s over %zu runs", detail.empty() ? "" : "; ", std::string(experiment_name(e)).c_str(),
                  same ? "byte-identical" : "DIFFERS", variants);
  }
  return {pass, detail + " (serial, 1/2/3/8 workers, repeat)"};
}

// 8. Property suites.
Verdict criterion8() {
  const std::vector<PropertyOutcome> suites{hadamard_round_trip(1000, 0x81), zc_orthogonality(1000, 0x82),
                                            detector_idempotence_voronoi(1000, 0x83), nmse_scaling(1000, 0x84),
                                            sat_doppler_cancellation(1000, 0x85)};
  bool pass = true;
  std::string detail;
  for (const auto& s : suites) {
    pass = pass && s.ok() && s.cases == 1000;
    detail += fmt("%s%s %zu/%zu", detail.empty() ? "" : "; ", s.name.c_str(), s.cases - s.failures, s.cases);
    if (!s.ok()) detail += " (" + s.first_failure + ")";
  }
  return {pass, detail};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>> kCriteria{
    {"noiseless oracle exactness", criterion1},  {"pseudo-inverse suite", criterion2},
    {"noise calibration", criterion3},           {"fig2 trend", criterion4},
    {"fig3 trend", criterion5},                  {"fig4 trend", criterion6},
    {"determinism", criterion7},                 {"property suites", criterion8},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> which;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      which.push_back(static_cast<std::size_t>(std::stoul(argv[++i])));
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]...\n", argv[0]);
      return 2;
    }
  }
  if (which.empty())
    for (std::size_t n = 1; n <= kCriteria.size(); ++n) which.push_back(n);

  int failures = 0;
  for (std::size_t n : which) {
    if (n < 1 || n > kCriteria.size()) {
      std::fprintf(stderr, "no criterion %zu\n", n);
      return 2;
    }
    Verdict v;
    try {
      v = kCriteria[n - 1].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu [%s]: %s - %s\n", n, kCriteria[n - 1].first.c_str(), v.pass ? "PASS" : "FAIL",
                v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
