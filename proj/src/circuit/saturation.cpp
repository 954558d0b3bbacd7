#include "blackstart/circuit/saturation.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace blackstart::circuit {

SaturationCurve::SaturationCurve(std::vector<FluxCurrentPoint> knots, double air_core_inductance_pu)
    : knots_(std::move(knots)), air_core_inductance_pu_(air_core_inductance_pu) {
  if (knots_.size() < 2) {
    throw std::invalid_argument("saturation curve needs at least two knots");
  }
  if (knots_.front().flux_pu != 0.0 || knots_.front().current_pu != 0.0) {
    throw std::invalid_argument("saturation curve must pass through the origin");
  }
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    if (!(knots_[k].flux_pu > knots_[k - 1].flux_pu) ||
        !(knots_[k].current_pu > knots_[k - 1].current_pu)) {
      throw std::invalid_argument("saturation curve knots must be strictly increasing");
    }
  }
  if (!(air_core_inductance_pu_ > 0.0)) {
    throw std::invalid_argument("air-core inductance must be positive");
  }
}

double SaturationCurve::unsaturated_inductance_pu() const {
  return knots_[1].flux_pu / knots_[1].current_pu;
}

int SaturationCurve::segment_of(double flux_pu) const {
  const double magnitude = std::abs(flux_pu);
  int index = max_segment();
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    if (magnitude <= knots_[k].flux_pu) {
      index = static_cast<int>(k) - 1;
      break;
    }
  }
  return flux_pu < 0.0 ? -index : index;
}

CurveSegment SaturationCurve::segment(int index) const {
  const int magnitude = std::abs(index);
  if (magnitude > max_segment()) {
    throw std::out_of_range("saturation segment index");
  }
  CurveSegment seg;
  const auto& start = knots_[static_cast<std::size_t>(magnitude)];
  seg.flux0 = start.flux_pu;
  seg.current0 = start.current_pu;
  if (magnitude == max_segment()) {
    seg.inductance = air_core_inductance_pu_;
  } else {
    const auto& end = knots_[static_cast<std::size_t>(magnitude) + 1];
    seg.inductance = (end.flux_pu - start.flux_pu) / (end.current_pu - start.current_pu);
  }
  if (index < 0) {
    seg.flux0 = -seg.flux0;
    seg.current0 = -seg.current0;
  }
  return seg;
}

double SaturationCurve::current(double flux_pu) const {
  const CurveSegment seg = segment(segment_of(flux_pu));
  return seg.current0 + (flux_pu - seg.flux0) / seg.inductance;
}

double magnetizing_current(double flux_pu, const SaturationCurve& curve) {
  return curve.current(flux_pu);
}

SaturationCurve default_saturation_curve() {
  constexpr double knee = 1.15;
  constexpr double unsaturated = 500.0;
  // One transition knot rounds the knee so the segment search does not
  // jump straight from 500 pu to the air-core slope.
  return SaturationCurve({{0.0, 0.0}, {knee, knee / unsaturated}, {1.30, 0.05}}, 0.3);
}

}  // namespace blackstart::circuit
