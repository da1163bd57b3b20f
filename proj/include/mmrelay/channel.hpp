#pragma once

// 60 GHz LOS link budget: sectored antenna gain, log-distance path loss with
// log-normal shadowing, hard (or finite) penetration blocking, SNR and
// Shannon capacity.

#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mmrelay {

struct ChannelParams {
  double tx_power_dbm = 18.0;
  double carrier_freq_hz = 60e9;
  double ref_dist_m = 1.0;
  double ple = 2.5;
  double shadow_sigma_db = 3.5;
  double bandwidth_hz = 20e6;
  double noise_density_dbm_hz = -174.0;
  double snr_threshold_db = 20.0;
  int antenna_m = 4;
  double sidelobe_gain = 0.1;
  double beamwidth_rad = 0.5235987755982988;  // 30 degrees
  /// Per-end gains used by the budget (links are assumed perfectly aligned).
  double tx_gain_db = 6.0;
  double rx_gain_db = 6.0;
  /// Infinite means a single blocker removes the link entirely.
  double penetration_loss_db = std::numeric_limits<double>::infinity();

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

/// Uses 10*log10(M^2) per end instead of the configured tx/rx gains.
ChannelParams with_array_gain(ChannelParams p);

struct LinkBudgetResult {
  double pl_component_mw = 0.0;
  double pp_component = 0.0;
  double rx_power_mw = 0.0;
  double snr_db = 0.0;
  double capacity_bps = 0.0;
};

class ZeroDistance : public std::domain_error {
 public:
  ZeroDistance() : std::domain_error("path loss evaluated at non-positive distance") {}
};

class Unreachable : public std::domain_error {
 public:
  Unreachable() : std::domain_error("SNR threshold not met even at the reference distance") {}
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double wavelength_m(const ChannelParams& p);

/// Main-lobe gain M^2 within half a beamwidth of boresight, side-lobe gain outside.
double antenna_gain(double theta_offset, const ChannelParams& p);

/// Received power (mW) from path loss and shadowing alone.
double path_loss_component(double dist_m, double shadow_db, const ChannelParams& p);

double noise_power_mw(const ChannelParams& p);

/// Received-power threshold matching the SNR threshold at the noise floor.
double default_gamma_mw(const ChannelParams& p);

LinkBudgetResult snr_and_capacity(double pl_mw, bool blocked, const ChannelParams& p);

inline double capacity_bps(double snr_linear, const ChannelParams& p) {
  return p.bandwidth_hz * std::log2(1.0 + snr_linear);
}

inline int pl_threshold_test(double pl_mw, double gamma_mw) { return pl_mw >= gamma_mw ? 1 : 0; }

/// Largest distance meeting the SNR threshold for the given shadowing,
/// by bisection to 1 cm. Throws Unreachable when not met at d0.
double max_los_range(const ChannelParams& p, double shadow_db);

/// Closed-form inversion of the same budget (no resolution limit).
double los_range_closed_form(const ChannelParams& p, double shadow_db);

/// Zero-mean log-normal shadowing (normal in dB) drawn from a caller-owned stream.
class ShadowingSampler {
 public:
  explicit ShadowingSampler(double sigma_db) : dist_(0.0, sigma_db), zero_(sigma_db == 0.0) {}

  template <typename Engine>
  double operator()(Engine& rng) {
    return zero_ ? 0.0 : dist_(rng);
  }
  /// Drops the cached second variate of the normal distribution.
  void reset() { dist_.reset(); }

 private:
  std::normal_distribution<double> dist_;
  bool zero_;
};

/// Per-link shadowing realization for one time step, symmetric in (i, j).
/// Draws fill the upper triangle in row-major order so the field depends only
/// on the engine state, never on which links are looked at.
class ShadowField {
 public:
  ShadowField() = default;
  explicit ShadowField(std::size_t n) : n_(n), values_(n * (n - (n > 0 ? 1 : 0)) / 2, 0.0) {}

  template <typename Engine>
  static ShadowField draw(std::size_t n, ShadowingSampler& sampler, Engine& rng) {
    ShadowField f(n);
    sampler.reset();
    for (auto& v : f.values_) v = sampler(rng);
    return f;
  }

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return values_[i * (2 * n_ - i - 1) / 2 + (j - i - 1)];
  }
  void set(std::size_t i, std::size_t j, double db) {
    if (i > j) std::swap(i, j);
    values_[i * (2 * n_ - i - 1) / 2 + (j - i - 1)] = db;
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

}  // namespace mmrelay
