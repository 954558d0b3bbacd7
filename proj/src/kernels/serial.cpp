#include <stdexcept>

#include "detail.hpp"

namespace blackstart::kernels {

void detail::check_harmonic_args(std::span<const double> x, std::size_t cycles, std::size_t max_harmonic) {
  if (cycles == 0 || x.empty()) {
    throw std::invalid_argument("harmonic analysis needs at least one full cycle");
  }
  if (2 * max_harmonic * cycles >= x.size()) {
    throw std::invalid_argument("sampling too coarse for the requested harmonic order");
  }
}

namespace serial {

std::vector<double> sliding_rms(std::span<const double> x, std::size_t window) {
  if (window == 0) {
    throw std::invalid_argument("rms window must be at least one sample");
  }
  std::vector<double> out(x.size());
  for (std::size_t first = 0; first < x.size(); first += kResumBlock) {
    detail::sliding_rms_block(x, window, first, std::min(first + kResumBlock, x.size()), out);
  }
  return out;
}

std::vector<ChannelStats> channel_stats(std::span<const std::span<const double>> channels) {
  std::vector<ChannelStats> out(channels.size());
  for (std::size_t c = 0; c < channels.size(); ++c) {
    out[c] = detail::stats_of(channels[c]);
  }
  return out;
}

std::vector<double> harmonic_magnitudes(std::span<const double> x, std::size_t cycles,
                                        std::size_t max_harmonic) {
  detail::check_harmonic_args(x, cycles, max_harmonic);
  std::vector<double> out(max_harmonic + 1);
  for (std::size_t h = 0; h <= max_harmonic; ++h) {
    out[h] = detail::harmonic(x, cycles, h);
  }
  return out;
}

}  // namespace serial
}  // namespace blackstart::kernels
