#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace blackstart::measure {

inline constexpr double kFundamentalHz = 50.0;

class MeasureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Samples per fundamental cycle at step `dt`.
std::size_t cycle_samples(double dt, double fundamental_hz = kFundamentalHz);

/// RMS of the last full cycle in `samples`, divided by `base`.
double rms_one_cycle(std::span<const double> samples, double dt, double base = 1.0);

/// Moving average over a fixed number of samples. The running sum is
/// recomputed from the buffer once per window to stop drift.
class SlidingMean {
 public:
  explicit SlidingMean(std::size_t window);

  double push(double x);
  double value() const { return sum_ / static_cast<double>(buffer_.size()); }
  std::size_t window() const { return buffer_.size(); }

 private:
  std::vector<double> buffer_;
  std::size_t next_ = 0;
  double sum_ = 0.0;
};

/// One-cycle RMS of a three-phase quantity: sqrt(mean(a^2 + b^2 + c^2) / 3),
/// i.e. the phase RMS for a balanced set.
class SlidingRms3 {
 public:
  explicit SlidingRms3(std::size_t window) : mean_(window) {}
  double push(const std::array<double, 3>& abc);
  double value() const;

 private:
  SlidingMean mean_;
};

struct PowerPair {
  double p = 0.0;
  double q = 0.0;
};

/// p = sum v i, q = [(vb - vc) ia + (vc - va) ib + (va - vb) ic] / sqrt(3).
PowerPair instantaneous_pq(const std::array<double, 3>& v, const std::array<double, 3>& i);

/// One-cycle averages of instantaneous p and q.
class PqAverager {
 public:
  explicit PqAverager(std::size_t window) : p_(window), q_(window) {}
  PowerPair push(const PowerPair& s);
  PowerPair value() const { return {p_.value(), q_.value()}; }

 private:
  SlidingMean p_;
  SlidingMean q_;
};

/// Mean frequency between the first and last rising zero crossings, located
/// by linear interpolation.
double estimate_frequency(std::span<const double> signal, double dt);

/// Streaming version: the mean frequency over the last `periods` full
/// periods, held between rising crossings. Reports `initial_hz` until
/// enough crossings have been seen.
class ZeroCrossingFrequency {
 public:
  explicit ZeroCrossingFrequency(double dt, double initial_hz = kFundamentalHz, std::size_t periods = 1);
  double push(double x);
  double value() const { return value_; }

 private:
  double dt_;
  double value_;
  std::size_t periods_;
  double prev_ = 0.0;
  std::vector<double> crossings_;  // ring of the last periods + 1 crossing times
  std::size_t seen_ = 0;
  std::size_t n_ = 0;
};

/// sqrt(sum of harmonic powers 2..max) / fundamental over a record holding a
/// whole number of fundamental cycles.
double thd(std::span<const double> signal, double dt, double fundamental_hz = kFundamentalHz,
           std::size_t max_harmonic = 50);

}  // namespace blackstart::measure
