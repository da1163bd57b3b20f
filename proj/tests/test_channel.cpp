#include <doctest.h>

#include <numbers>

#include "gen.hpp"
#include "mmrelay/channel.hpp"

using namespace mmrelay;

TEST_CASE("antenna gain") {
  const ChannelParams p;
  CHECK(antenna_gain(0.0, p) == 16.0);
  CHECK(antenna_gain(std::numbers::pi, p) == 0.1);
  CHECK(antenna_gain(p.beamwidth_rad / 2.0, p) == 16.0);
}

TEST_CASE("path loss component") {
  const ChannelParams p;
  const double at_d0 = linear_to_db(path_loss_component(1.0, 0.0, p));
  CHECK(at_d0 == doctest::Approx(-38.011).epsilon(1e-4));
  CHECK(linear_to_db(path_loss_component(10.0, 0.0, p)) == doctest::Approx(at_d0 - 25.0));
  const double d = 17.0;
  CHECK(linear_to_db(path_loss_component(d, 3.5, p)) ==
        doctest::Approx(linear_to_db(path_loss_component(d, 0.0, p)) + 3.5));
  CHECK_THROWS_AS(path_loss_component(0.0, 0.0, p), ZeroDistance);
}

TEST_CASE("snr and capacity") {
  ChannelParams p;
  const double noise = noise_power_mw(p);
  CHECK(snr_and_capacity(noise * 100.0, false, p).capacity_bps == doctest::Approx(20e6 * std::log2(101.0)));
  CHECK(snr_and_capacity(noise * 100.0, false, p).capacity_bps == doctest::Approx(133.2e6).epsilon(1e-3));

  const auto blocked = snr_and_capacity(noise * 1e6, true, p);
  CHECK(blocked.capacity_bps == 0.0);
  CHECK(blocked.rx_power_mw == 0.0);

  CHECK(snr_and_capacity(noise, false, p).capacity_bps == doctest::Approx(p.bandwidth_hz));

  SUBCASE("finite penetration loss attenuates") {
    p.penetration_loss_db = 10.0;
    const auto r = snr_and_capacity(noise * 1000.0, true, p);
    CHECK(r.pp_component == doctest::Approx(0.1));
    CHECK(r.capacity_bps > 0.0);
  }
}

TEST_CASE("threshold test is inclusive") {
  CHECK(pl_threshold_test(2.0, 2.0) == 1);
  CHECK(pl_threshold_test(1.0, 2.0) == 0);
  CHECK(pl_threshold_test(4.0, 2.0) == 1);
}

TEST_CASE("maximum LOS range") {
  ChannelParams p;
  CHECK(max_los_range(p, 0.0) == doctest::Approx(52.5).epsilon(0.5 / 52.5));
  CHECK(los_range_closed_form(p, 0.0) == doctest::Approx(52.3788).epsilon(1e-5));
  CHECK(std::abs(max_los_range(p, 0.0) - los_range_closed_form(p, 0.0)) <= 0.01);

  ChannelParams zero = p;
  zero.snr_threshold_db = 0.0;
  CHECK(max_los_range(zero, 0.0) == doctest::Approx(331.0).epsilon(0.01));

  ChannelParams weak = p;
  weak.tx_power_dbm -= 25.0;
  CHECK(los_range_closed_form(weak, 0.0) == doctest::Approx(los_range_closed_form(p, 0.0) / 10.0));

  ChannelParams hopeless = p;
  hopeless.tx_power_dbm = -100.0;
  CHECK_THROWS_AS(max_los_range(hopeless, 0.0), Unreachable);
}

TEST_CASE("array gain preset") {
  const ChannelParams p = with_array_gain(ChannelParams{});
  CHECK(p.tx_gain_db == doctest::Approx(10.0 * std::log10(16.0)));
  CHECK(los_range_closed_form(p, 0.0) > los_range_closed_form(ChannelParams{}, 0.0));
}

TEST_CASE("parameter validation") {
  ChannelParams p;
  p.bandwidth_hz = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.shadow_sigma_db = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("shadow field is symmetric and independent of lookup order") {
  ShadowingSampler s(3.5);
  auto r1 = gen::rng(31);
  auto r2 = gen::rng(31);
  const auto a = ShadowField::draw(6, s, r1);
  const auto b = ShadowField::draw(6, s, r2);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(a.at(i, i) == 0.0);
    for (std::size_t j = 0; j < 6; ++j) {
      CHECK(a.at(i, j) == a.at(j, i));
      CHECK(a.at(i, j) == b.at(i, j));
    }
  }
}

TEST_CASE("property: monotone in distance and SNR") {
  const ChannelParams p;
  auto r = gen::rng(32);
  for (int n = 0; n < 2000; ++n) {
    const double d1 = gen::uniform(r, 0.1, 300);
    const double d2 = d1 * gen::uniform(r, 1.001, 3);
    const double sh = gen::uniform(r, -10, 10);
    CHECK(path_loss_component(d1, sh, p) > path_loss_component(d2, sh, p));
    const double s1 = gen::uniform(r, 0, 1e4);
    CHECK(capacity_bps(s1, p) < capacity_bps(s1 * 1.01 + 1e-6, p));
  }
}

TEST_CASE("property: received power factorizes and converts between dB and linear") {
  ChannelParams p;
  p.penetration_loss_db = 7.0;
  auto r = gen::rng(33);
  for (int n = 0; n < 2000; ++n) {
    const double pl = path_loss_component(gen::uniform(r, 1, 200), gen::uniform(r, -10, 10), p);
    const bool blocked = r() % 2 == 0;
    const auto res = snr_and_capacity(pl, blocked, p);
    CHECK(res.rx_power_mw == res.pl_component_mw * res.pp_component);
    CHECK(db_to_linear(linear_to_db(res.rx_power_mw)) == doctest::Approx(res.rx_power_mw).epsilon(1e-9));
    CHECK(res.capacity_bps >= 0.0);
  }
  p.penetration_loss_db = std::numeric_limits<double>::infinity();
  CHECK(snr_and_capacity(1.0, true, p).capacity_bps == 0.0);
  CHECK(snr_and_capacity(1.0, false, p).capacity_bps > 0.0);
}

TEST_CASE("shadowing draws have the configured spread") {
  ShadowingSampler s(3.5);
  auto r = gen::rng(34);
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < n; ++k) {
    const double x = s(r);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(mean) <= 0.05);
  CHECK(sd == doctest::Approx(3.5).epsilon(0.02));

  ShadowingSampler off(0.0);
  CHECK(off(r) == 0.0);
}
