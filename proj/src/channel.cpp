#include "mmrelay/channel.hpp"

#include <cmath>
#include <numbers>

namespace mmrelay {

namespace {
constexpr double kSpeedOfLight = 299792458.0;

// Power at the reference distance with zero shadowing, in dBm.
double power_at_ref_dbm(const ChannelParams& p) {
  const double fspl = 20.0 * std::log10(wavelength_m(p) / (4.0 * std::numbers::pi * p.ref_dist_m));
  return p.tx_power_dbm + p.tx_gain_db + p.rx_gain_db + fspl;
}

double threshold_dbm(const ChannelParams& p) {
  return linear_to_db(noise_power_mw(p)) + p.snr_threshold_db;
}
}  // namespace

void ChannelParams::validate() const {
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("channel: bandwidth must be > 0");
  if (!(ref_dist_m > 0.0)) throw std::invalid_argument("channel: ref_dist must be > 0");
  if (!(ple > 0.0)) throw std::invalid_argument("channel: ple must be > 0");
  if (antenna_m < 1) throw std::invalid_argument("channel: antenna_m must be >= 1");
  if (!(carrier_freq_hz > 0.0)) throw std::invalid_argument("channel: carrier frequency must be > 0");
  if (!(shadow_sigma_db >= 0.0)) throw std::invalid_argument("channel: shadow sigma must be >= 0");
  if (!(beamwidth_rad > 0.0)) throw std::invalid_argument("channel: beamwidth must be > 0");
  if (!(penetration_loss_db >= 0.0)) throw std::invalid_argument("channel: penetration loss must be >= 0");
}

ChannelParams with_array_gain(ChannelParams p) {
  const double g = linear_to_db(static_cast<double>(p.antenna_m) * p.antenna_m);
  p.tx_gain_db = g;
  p.rx_gain_db = g;
  return p;
}

double wavelength_m(const ChannelParams& p) { return kSpeedOfLight / p.carrier_freq_hz; }

double antenna_gain(double theta_offset, const ChannelParams& p) {
  if (std::abs(theta_offset) <= p.beamwidth_rad / 2.0) {
    return static_cast<double>(p.antenna_m) * p.antenna_m;
  }
  return p.sidelobe_gain;
}

double path_loss_component(double dist_m, double shadow_db, const ChannelParams& p) {
  if (!(dist_m > 0.0)) throw ZeroDistance{};
  const double dbm = power_at_ref_dbm(p) - 10.0 * p.ple * std::log10(dist_m / p.ref_dist_m) + shadow_db;
  return db_to_linear(dbm);
}

double noise_power_mw(const ChannelParams& p) {
  return db_to_linear(p.noise_density_dbm_hz + linear_to_db(p.bandwidth_hz));
}

double default_gamma_mw(const ChannelParams& p) { return db_to_linear(threshold_dbm(p)); }

LinkBudgetResult snr_and_capacity(double pl_mw, bool blocked, const ChannelParams& p) {
  LinkBudgetResult r;
  r.pl_component_mw = pl_mw;
  if (!blocked) {
    r.pp_component = 1.0;
  } else if (std::isinf(p.penetration_loss_db)) {
    r.pp_component = 0.0;
  } else {
    r.pp_component = db_to_linear(-p.penetration_loss_db);
  }
  r.rx_power_mw = r.pl_component_mw * r.pp_component;
  const double snr = r.rx_power_mw / noise_power_mw(p);
  r.snr_db = linear_to_db(snr);
  r.capacity_bps = capacity_bps(snr, p);
  return r;
}

double max_los_range(const ChannelParams& p, double shadow_db) {
  const double gamma = default_gamma_mw(p);
  auto meets = [&](double d) { return pl_threshold_test(path_loss_component(d, shadow_db, p), gamma) == 1; };
  if (!meets(p.ref_dist_m)) throw Unreachable{};

  double lo = p.ref_dist_m;
  double hi = 2.0 * lo;
  while (meets(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 0.01) {
    const double mid = 0.5 * (lo + hi);
    (meets(mid) ? lo : hi) = mid;
  }
  return lo;
}

double los_range_closed_form(const ChannelParams& p, double shadow_db) {
  const double margin_db = power_at_ref_dbm(p) + shadow_db - threshold_dbm(p);
  return p.ref_dist_m * std::pow(10.0, margin_db / (10.0 * p.ple));
}

}  // namespace mmrelay
