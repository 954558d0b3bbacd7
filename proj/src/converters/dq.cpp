#include "blackstart/converters/dq.hpp"

#include <cmath>

namespace blackstart::converters {
namespace {
constexpr double kShift = 2.0 * std::numbers::pi / 3.0;
}

Dq park(const Abc& abc, double theta) {
  const double ca = std::cos(theta);
  const double cb = std::cos(theta - kShift);
  const double cc = std::cos(theta + kShift);
  const double sa = std::sin(theta);
  const double sb = std::sin(theta - kShift);
  const double sc = std::sin(theta + kShift);
  return {(2.0 / 3.0) * (abc[0] * ca + abc[1] * cb + abc[2] * cc),
          -(2.0 / 3.0) * (abc[0] * sa + abc[1] * sb + abc[2] * sc)};
}

Abc inverse_park(const Dq& dq, double theta) {
  return {dq.d * std::cos(theta) - dq.q * std::sin(theta),
          dq.d * std::cos(theta - kShift) - dq.q * std::sin(theta - kShift),
          dq.d * std::cos(theta + kShift) - dq.q * std::sin(theta + kShift)};
}

double magnitude(const Dq& dq) { return std::hypot(dq.d, dq.q); }

double wrap_angle(double theta) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double out = std::fmod(theta, kTwoPi);
  if (out < 0.0) {
    out += kTwoPi;
  }
  return out >= kTwoPi ? 0.0 : out;
}

double lowpass_step(double y, double x, double omega_c, double dt) {
  const double alpha = 1.0 - std::exp(-omega_c * dt);
  return y + alpha * (x - y);
}

double PerUnitBase::v_peak() const { return v_kv * 1e3 * std::sqrt(2.0 / 3.0); }

double PerUnitBase::i_peak() const { return std::sqrt(2.0) * s_mva * 1e6 / (std::sqrt(3.0) * v_kv * 1e3); }

}  // namespace blackstart::converters
