#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "blackstart/kernels/kernels.hpp"
#include "blackstart/measure/limits.hpp"
#include "blackstart/measure/signal.hpp"

using namespace blackstart::measure;
using blackstart::circuit::Channel;
using blackstart::circuit::TimeSeries;
namespace kernels = blackstart::kernels;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDt = 50e-6;

std::vector<double> sampled(std::size_t n, double dt, auto&& f) {
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = f(static_cast<double>(k) * dt);
  }
  return out;
}

std::array<double, 3> balanced(double amp, double phi) {
  return {amp * std::cos(phi), amp * std::cos(phi - 2 * kPi / 3), amp * std::cos(phi + 2 * kPi / 3)};
}

}  // namespace

TEST_CASE("one-cycle rms") {
  CHECK(cycle_samples(kDt) == 400);
  const auto w = 2 * kPi * 50;
  const auto sine = sampled(400, kDt, [&](double t) { return std::sin(w * t + 0.3); });
  CHECK(rms_one_cycle(sine, kDt) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-4));
  CHECK(rms_one_cycle(std::vector<double>(400, 1.0), kDt) == doctest::Approx(1.0));
  const auto distorted = sampled(400, kDt, [&](double t) { return std::sin(w * t) + 0.1 * std::sin(5 * w * t); });
  // Parseval: each sinusoid contributes amp^2 / 2.
  CHECK(rms_one_cycle(distorted, kDt) == doctest::Approx(std::sqrt(0.5 + 0.005)).epsilon(1e-6));
  CHECK(rms_one_cycle(sine, kDt, 2.0) == doctest::Approx(std::sqrt(0.5) / 2.0));
  CHECK_THROWS_AS(rms_one_cycle(std::span(sine).first(399), kDt), MeasureError);

  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const auto noise = sampled(400, kDt, [&](double) { return u(rng); });
  for (const double k : {0.0, 0.5, 2.0, 1e3}) {
    std::vector<double> scaled(noise);
    for (auto& x : scaled) {
      x *= k;
    }
    CHECK(rms_one_cycle(scaled, kDt) == doctest::Approx(k * rms_one_cycle(noise, kDt)).epsilon(1e-12));
  }
}

TEST_CASE("streaming averages") {
  SlidingMean m(4);
  for (const double x : {1.0, 2.0, 3.0, 4.0}) {
    m.push(x);
  }
  CHECK(m.value() == doctest::Approx(2.5));
  m.push(10.0);
  CHECK(m.value() == doctest::Approx((2.0 + 3.0 + 4.0 + 10.0) / 4.0));

  SlidingRms3 rms(400);
  for (int k = 0; k < 1000; ++k) {
    rms.push(balanced(2.0, 2 * kPi * 50 * k * kDt));
  }
  CHECK(rms.value() == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(SlidingMean(0), MeasureError);
}

TEST_CASE("instantaneous power") {
  const double w = 2 * kPi * 50;
  const auto averaged = [&](double v_amp, double i_amp, double lag) {
    PqAverager avg(400);
    PowerPair last;
    for (int k = 0; k < 800; ++k) {
      const double th = w * k * kDt;
      last = avg.push(instantaneous_pq(balanced(v_amp, th), balanced(i_amp, th - lag)));
    }
    return last;
  };
  // Rated peak voltage and current: S = 3/2 V I.
  const auto in_phase = averaged(1.0, 1.0, 0.0);
  CHECK(in_phase.p == doctest::Approx(1.5));
  CHECK(std::abs(in_phase.q) < 1e-12);
  const auto lagging = averaged(1.0, 1.0, kPi / 2);
  CHECK(std::abs(lagging.p) < 1e-12);
  CHECK(lagging.q == doctest::Approx(1.5));
  for (const double phi : {-2.5, -0.8, 0.3, 1.1, 2.9}) {
    const auto s = averaged(2.0, 0.7, phi);
    const double mag = 1.5 * 2.0 * 0.7;
    CHECK(s.p == doctest::Approx(mag * std::cos(phi)).epsilon(1e-3));
    CHECK(s.q == doctest::Approx(mag * std::sin(phi)).epsilon(1e-3));
  }

  // S^2 >= p^2 + q^2 for any waveform, S = 3 V_rms I_rms (per-phase rms).
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    PqAverager avg(400);
    SlidingRms3 vr(400);
    SlidingRms3 ir(400);
    const double h = 1.0 + std::floor(5.0 * std::abs(u(rng)));
    const std::array<double, 6> a{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    for (int k = 0; k < 400; ++k) {
      const double th = w * k * kDt;
      std::array<double, 3> v = balanced(1.0, th);
      std::array<double, 3> i = balanced(a[0], th + a[1]);
      for (std::size_t p = 0; p < 3; ++p) {
        v[p] += a[2] * std::cos(h * th + a[3] * static_cast<double>(p)) + 0.2 * u(rng);
        i[p] += a[4] * std::sin(h * th) + a[5] * static_cast<double>(p) + 0.2 * u(rng);
      }
      avg.push(instantaneous_pq(v, i));
      vr.push(v);
      ir.push(i);
    }
    const double s = 3.0 * vr.value() * ir.value();
    const auto pq = avg.value();
    CHECK(s * s >= pq.p * pq.p + pq.q * pq.q - 1e-9);
  }
}

TEST_CASE("zero-crossing frequency") {
  for (const auto& [f, tol] : std::vector<std::pair<double, double>>{{50.0, 1e-3}, {50.006, 2e-3}, {47.0, 2e-3}}) {
    const auto x = sampled(4000, kDt, [&](double t) { return std::sin(2 * kPi * f * t + 0.4); });
    CHECK(std::abs(estimate_frequency(x, kDt) - f) < tol);
  }
  CHECK_THROWS_AS(estimate_frequency(std::vector<double>(1000, 1.0), kDt), MeasureError);

  ZeroCrossingFrequency z(kDt);
  CHECK(z.value() == 50.0);
  for (int k = 0; k < 4000; ++k) {
    z.push(std::sin(2 * kPi * 49.5 * k * kDt));
  }
  CHECK(z.value() == doctest::Approx(49.5).epsilon(1e-5));

  // a 5-period window spreads a phase step over five periods
  ZeroCrossingFrequency one(kDt);
  ZeroCrossingFrequency five(kDt, 50.0, 5);
  double worst_one = 0.0;
  double worst_five = 0.0;
  for (int k = 0; k < 8000; ++k) {
    const double t = k * kDt;
    const double phase = t >= 0.2 ? 0.05 : 0.0;
    one.push(std::sin(2 * kPi * 50.0 * t - phase));
    five.push(std::sin(2 * kPi * 50.0 * t - phase));
    if (k == 400) {
      CHECK(five.value() == 50.0);  // fewer than six crossings so far
    }
    worst_one = std::max(worst_one, std::abs(one.value() - 50.0));
    worst_five = std::max(worst_five, std::abs(five.value() - 50.0));
  }
  CHECK(worst_five == doctest::Approx(worst_one / 5.0).epsilon(0.02));
  CHECK(five.value() == doctest::Approx(50.0).epsilon(1e-6));
  CHECK_THROWS_AS(ZeroCrossingFrequency(kDt, 50.0, 0), MeasureError);
}

TEST_CASE("total harmonic distortion") {
  const double w = 2 * kPi * 50;
  const std::size_t n = 2000;  // five cycles
  const auto pure = sampled(n, kDt, [&](double t) { return std::sin(w * t); });
  CHECK(thd(pure, kDt) < 1e-9);
  const auto fifth = sampled(n, kDt, [&](double t) { return std::sin(w * t) + 0.1 * std::sin(5 * w * t); });
  CHECK(std::abs(thd(fifth, kDt) - 0.1) < 1e-3);
  const auto mixed = sampled(n, kDt, [&](double t) {
    return std::sin(w * t) + 0.05 * std::sin(3 * w * t + 1.0) + 0.05 * std::cos(7 * w * t);
  });
  CHECK(std::abs(thd(mixed, kDt) - std::hypot(0.05, 0.05)) < 1e-3);

  const double base = thd(mixed, kDt);
  for (const double scale : {0.01, 3.0, 1e4}) {
    for (const double phase : {0.5, 2.0}) {
      const auto x = sampled(n, kDt, [&](double t) {
        return scale * (std::sin(w * t + phase) + 0.05 * std::sin(3 * (w * t + phase) + 1.0) +
                        0.05 * std::cos(7 * (w * t + phase)));
      });
      CHECK(thd(x, kDt) == doctest::Approx(base).epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(thd(std::span(pure).first(1900), kDt), MeasureError);
}

namespace {

TimeSeries series_of(const std::vector<std::pair<std::string, std::vector<double>>>& channels, double h) {
  std::vector<Channel> defs;
  for (const auto& [name, values] : channels) {
    defs.push_back({name, "pu", ""});
  }
  TimeSeries ts(defs);
  const std::size_t n = channels.front().second.size();
  std::vector<double> row(channels.size());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t c = 0; c < channels.size(); ++c) {
      row[c] = channels[c].second[k];
    }
    ts.append(static_cast<double>(k) * h, row);
  }
  return ts;
}

LimitEnvelope poc_envelope() {
  LimitEnvelope env;
  env.voltage_channels = {"v"};
  env.frequency_channels = {"f"};
  env.current_channels = {"i"};
  return env;
}

}  // namespace

TEST_CASE("limit checking") {
  const double h = 1e-3;
  const std::size_t n = 2000;
  std::vector<double> v(n, 1.0);
  std::vector<double> f(n, 50.0);
  std::vector<double> i(n, 0.5);

  SUBCASE("nominal signals comply") {
    CHECK(check_limits(series_of({{"v", v}, {"f", f}, {"i", i}}, h), poc_envelope(), {}).empty());
  }
  SUBCASE("a 0.1 s overvoltage") {
    for (std::size_t k = 500; k < 600; ++k) {
      v[k] = 1.11;
    }
    const StageLog stages{{0.0, "WindFarmPowerIsland"}, {1.0, "BlackStartPowerIsland"}};
    const auto r = check_limits(series_of({{"v", v}, {"f", f}, {"i", i}}, h), poc_envelope(), stages);
    REQUIRE(r.count() == 1);
    const auto& x = r.violations[0];
    CHECK(x.signal == "v");
    CHECK(x.kind == LimitKind::Voltage);
    CHECK(x.worst == doctest::Approx(1.11));
    CHECK(x.limit == 1.1);
    CHECK(x.start == doctest::Approx(0.5));
    CHECK(x.end == doctest::Approx(0.599));
    CHECK(x.duration_s == doctest::Approx(0.1));
    CHECK(x.stage == "WindFarmPowerIsland");
  }
  SUBCASE("spikes shorter than a cycle are ignored") {
    for (std::size_t k = 500; k < 510; ++k) {
      v[k] = 1.5;
      i[k] = 3.0;
    }
    CHECK(check_limits(series_of({{"v", v}, {"f", f}, {"i", i}}, h), poc_envelope(), {}).empty());
  }
  SUBCASE("monitoring starts late") {
    for (std::size_t k = 0; k < 300; ++k) {
      v[k] = 0.2;
    }
    auto env = poc_envelope();
    CHECK(check_limits(series_of({{"v", v}, {"f", f}, {"i", i}}, h), env, {}).count() == 1);
    env.monitor_from_s = 0.3;
    CHECK(check_limits(series_of({{"v", v}, {"f", f}, {"i", i}}, h), env, {}).empty());
  }
  SUBCASE("stage attribution and ordering") {
    for (std::size_t k = 1200; k < 1300; ++k) {
      f[k] = 46.0;
      i[k] = 1.2;
    }
    for (std::size_t k = 100; k < 200; ++k) {
      v[k] = 0.85;
    }
    const StageLog stages{{0.0, "A"}, {1.0, "B"}};
    const auto r = check_limits(series_of({{"v", v}, {"f", f}, {"i", i}}, h), poc_envelope(), stages);
    REQUIRE(r.count() == 3);
    CHECK(r.violations[0].signal == "v");
    CHECK(r.violations[0].stage == "A");
    CHECK(r.violations[0].limit == 0.9);
    CHECK(r.violations[1].signal == "f");
    CHECK(r.violations[1].stage == "B");
    CHECK(r.violations[2].signal == "i");
    CHECK(r.violations[2].kind == LimitKind::Current);
  }
  SUBCASE("missing channel") {
    auto env = poc_envelope();
    env.voltage_channels.push_back("nope");
    CHECK_THROWS_AS(check_limits(series_of({{"v", v}, {"f", f}, {"i", i}}, h), env, {}), MeasureError);
  }
  SUBCASE("inverted band") {
    auto env = poc_envelope();
    env.v_min_pu = 1.2;
    CHECK_THROWS_AS(check_limits(series_of({{"v", v}, {"f", f}, {"i", i}}, h), env, {}), MeasureError);
  }
}

TEST_CASE("widening a band never adds violations") {
  std::mt19937 rng(21);
  std::normal_distribution<double> step(0.0, 0.01);
  const StageLog stages{{0.0, "A"}, {0.7, "B"}, {1.4, "C"}};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> v(2000);
    std::vector<double> f(2000);
    std::vector<double> i(2000);
    double a = 1.0;
    double b = 50.0;
    double c = 0.8;
    for (std::size_t k = 0; k < v.size(); ++k) {
      a += step(rng) - 0.01 * (a - 1.0);
      b += 20.0 * step(rng) - 0.01 * (b - 50.0);
      c += 5.0 * step(rng) - 0.01 * (c - 0.8);
      v[k] = a;
      f[k] = b;
      i[k] = c;
    }
    const auto ts = series_of({{"v", v}, {"f", f}, {"i", i}}, 1e-3);
    const auto narrow = poc_envelope();
    const auto base = check_limits(ts, narrow, stages);
    for (int w = 1; w <= 5; ++w) {
      auto wide = narrow;
      wide.v_min_pu -= 0.01 * w;
      wide.v_max_pu += 0.005 * w * (trial % 2);
      wide.f_min_hz -= 0.3 * w * ((trial / 2) % 2);
      wide.f_max_hz += 0.2 * w;
      wide.current_cap_pu += 0.02 * w;
      const auto r = check_limits(ts, wide, stages);
      CHECK(r.count() <= base.count());
      for (const auto& x : r.violations) {
        const bool found = std::any_of(base.violations.begin(), base.violations.end(), [&](const Violation& y) {
          return y.signal == x.signal && y.stage == x.stage && y.duration_s >= x.duration_s - 1e-12;
        });
        CHECK(found);
      }
    }
  }
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  std::mt19937 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> x(50000);
  for (auto& v : x) {
    v = g(rng);
  }
  const auto a = kernels::serial::sliding_rms(x, 400);
  const auto b = kernels::omp::sliding_rms(x, 400);
  CHECK(a == b);
  // against a direct evaluation
  for (const std::size_t k : {0UL, 10UL, 399UL, 400UL, 4095UL, 4096UL, 4097UL, 49999UL}) {
    double s = 0.0;
    for (std::size_t j = k >= 399 ? k - 399 : 0; j <= k; ++j) {
      s += x[j] * x[j];
    }
    CHECK(a[k] == doctest::Approx(std::sqrt(s / 400.0)).epsilon(1e-12));
  }

  std::vector<std::vector<double>> data(7);
  std::vector<std::span<const double>> views;
  for (std::size_t c = 0; c < data.size(); ++c) {
    data[c].resize(1000 + 300 * c);
    for (auto& v : data[c]) {
      v = g(rng) + static_cast<double>(c);
    }
    views.emplace_back(data[c]);
  }
  const auto sa = kernels::serial::channel_stats(views);
  CHECK(sa == kernels::omp::channel_stats(views));
  CHECK(sa[3].min == *std::min_element(data[3].begin(), data[3].end()));

  const auto ha = kernels::serial::harmonic_magnitudes(std::span(x).first(4000), 10, 50);
  CHECK(ha == kernels::omp::harmonic_magnitudes(std::span(x).first(4000), 10, 50));
  CHECK_THROWS(kernels::serial::harmonic_magnitudes(std::span(x).first(400), 1, 200));
}
