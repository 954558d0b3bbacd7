#include <stdexcept>

#include "detail.hpp"

namespace blackstart::kernels::omp {

std::vector<double> sliding_rms(std::span<const double> x, std::size_t window) {
  if (window == 0) {
    throw std::invalid_argument("rms window must be at least one sample");
  }
  std::vector<double> out(x.size());
  const auto blocks = static_cast<std::ptrdiff_t>((x.size() + kResumBlock - 1) / kResumBlock);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::size_t first = static_cast<std::size_t>(b) * kResumBlock;
    detail::sliding_rms_block(x, window, first, std::min(first + kResumBlock, x.size()), out);
  }
  return out;
}

std::vector<ChannelStats> channel_stats(std::span<const std::span<const double>> channels) {
  std::vector<ChannelStats> out(channels.size());
  const auto n = static_cast<std::ptrdiff_t>(channels.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < n; ++c) {
    out[static_cast<std::size_t>(c)] = detail::stats_of(channels[static_cast<std::size_t>(c)]);
  }
  return out;
}

std::vector<double> harmonic_magnitudes(std::span<const double> x, std::size_t cycles,
                                        std::size_t max_harmonic) {
  detail::check_harmonic_args(x, cycles, max_harmonic);
  std::vector<double> out(max_harmonic + 1);
  const auto n = static_cast<std::ptrdiff_t>(max_harmonic + 1);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t h = 0; h < n; ++h) {
    out[static_cast<std::size_t>(h)] = detail::harmonic(x, cycles, static_cast<std::size_t>(h));
  }
  return out;
}

}  // namespace blackstart::kernels::omp
