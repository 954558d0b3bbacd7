#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Post-processing kernels over recorded channels. `serial` is the reference;
// `omp` splits the same arithmetic across threads (per block, channel or
// harmonic) so both return bit-identical results.
namespace blackstart::kernels {

struct ChannelStats {
  double min = 0.0;
  double max = 0.0;
  double peak_abs = 0.0;
  double mean = 0.0;

  friend bool operator==(const ChannelStats&, const ChannelStats&) = default;
};

// Running sums are re-seeded from scratch every this many samples, which
// bounds round-off drift and gives the parallel version its block size.
inline constexpr std::size_t kResumBlock = 4096;

namespace serial {
/// RMS over the trailing `window` samples (zero before the record starts).
std::vector<double> sliding_rms(std::span<const double> x, std::size_t window);
std::vector<ChannelStats> channel_stats(std::span<const std::span<const double>> channels);
/// Peak amplitudes of harmonics 0..max_harmonic of a record holding exactly
/// `cycles` fundamental periods. Index 0 is the mean.
std::vector<double> harmonic_magnitudes(std::span<const double> x, std::size_t cycles,
                                        std::size_t max_harmonic);
}  // namespace serial

namespace omp {
std::vector<double> sliding_rms(std::span<const double> x, std::size_t window);
std::vector<ChannelStats> channel_stats(std::span<const std::span<const double>> channels);
std::vector<double> harmonic_magnitudes(std::span<const double> x, std::size_t cycles,
                                        std::size_t max_harmonic);
}  // namespace omp

}  // namespace blackstart::kernels
