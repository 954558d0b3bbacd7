#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blackstart/kernels/kernels.hpp"

namespace blackstart::kernels::detail {

inline double window_sum_sq(std::span<const double> x, std::size_t end, std::size_t window) {
  const std::size_t begin = end >= window ? end - window : 0;
  double s = 0.0;
  for (std::size_t k = begin; k < end; ++k) {
    s += x[k] * x[k];
  }
  return s;
}

// Fills out[first, last) where `first` is a multiple of kResumBlock.
inline void sliding_rms_block(std::span<const double> x, std::size_t window, std::size_t first,
                              std::size_t last, std::vector<double>& out) {
  double s = window_sum_sq(x, first + 1, window);
  out[first] = std::sqrt(std::max(s, 0.0) / static_cast<double>(window));
  for (std::size_t k = first + 1; k < last; ++k) {
    s += x[k] * x[k];
    if (k >= window) {
      s -= x[k - window] * x[k - window];
    }
    out[k] = std::sqrt(std::max(s, 0.0) / static_cast<double>(window));
  }
}

inline ChannelStats stats_of(std::span<const double> x) {
  ChannelStats st;
  if (x.empty()) {
    return st;
  }
  st.min = x[0];
  st.max = x[0];
  double sum = 0.0;
  for (const double v : x) {
    st.min = std::min(st.min, v);
    st.max = std::max(st.max, v);
    st.peak_abs = std::max(st.peak_abs, std::abs(v));
    sum += v;
  }
  st.mean = sum / static_cast<double>(x.size());
  return st;
}

inline double harmonic(std::span<const double> x, std::size_t cycles, std::size_t h) {
  const double n = static_cast<double>(x.size());
  const double w = 2.0 * std::numbers::pi * static_cast<double>(h * cycles) / n;
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = w * static_cast<double>(k);
    re += x[k] * std::cos(a);
    im -= x[k] * std::sin(a);
  }
  const double mag = std::hypot(re, im) / n;
  return h == 0 ? re / n : 2.0 * mag;
}

void check_harmonic_args(std::span<const double> x, std::size_t cycles, std::size_t max_harmonic);

}  // namespace blackstart::kernels::detail
