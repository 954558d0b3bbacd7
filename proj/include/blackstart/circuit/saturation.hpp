#pragma once

#include <vector>

namespace blackstart::circuit {

/// One knot of a flux-linkage / magnetizing-current characteristic, both in
/// per unit of the transformer's own rating (1 pu flux = rated peak flux).
struct FluxCurrentPoint {
  double flux_pu = 0.0;
  double current_pu = 0.0;

  friend bool operator==(const FluxCurrentPoint&, const FluxCurrentPoint&) = default;
};

/// Straight-line piece of the characteristic: i = current0 + (flux - flux0) / inductance.
struct CurveSegment {
  double flux0 = 0.0;
  double current0 = 0.0;
  double inductance = 0.0;
};

/// Piecewise-linear, odd-symmetric saturation characteristic.
///
/// Knots cover the positive half; the curve is mirrored through the origin
/// for negative flux and continued beyond the last knot with the air-core
/// inductance. Segments are addressed by a signed index: 0 is the segment
/// through the origin, +k/-k the k-th segment on either side, and
/// +/-(knot_count - 1) the air-core extrapolation.
class SaturationCurve {
 public:
  SaturationCurve(std::vector<FluxCurrentPoint> knots, double air_core_inductance_pu);

  const std::vector<FluxCurrentPoint>& knots() const { return knots_; }
  double air_core_inductance_pu() const { return air_core_inductance_pu_; }
  double unsaturated_inductance_pu() const;

  int segment_of(double flux_pu) const;
  CurveSegment segment(int index) const;
  int max_segment() const { return static_cast<int>(knots_.size()) - 1; }

  double current(double flux_pu) const;

  friend bool operator==(const SaturationCurve&, const SaturationCurve&) = default;

 private:
  std::vector<FluxCurrentPoint> knots_;
  double air_core_inductance_pu_;
};

double magnetizing_current(double flux_pu, const SaturationCurve& curve);

/// Knee at 1.15 pu flux, 500 pu unsaturated magnetizing reactance,
/// 0.3 pu air-core inductance.
SaturationCurve default_saturation_curve();

}  // namespace blackstart::circuit
