#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blackstart::circuit {

/// Metadata of one sampled signal. `reference` names the node or element
/// the signal was taken from (empty for derived signals).
struct Channel {
  std::string name;
  std::string unit;
  std::string reference;
};

/// Column-major buffer of sampled signals on a common time axis.
class TimeSeries {
 public:
  TimeSeries() = default;
  explicit TimeSeries(std::vector<Channel> channels);

  std::size_t add_channel(Channel channel);
  const std::vector<Channel>& channels() const { return channels_; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index(std::string_view name) const;  // throws std::out_of_range

  /// Appends one sample row; `values` holds one entry per channel.
  void append(double time, const std::vector<double>& values);

  std::size_t size() const { return time_.size(); }
  const std::vector<double>& time() const { return time_; }
  const std::vector<double>& values(std::size_t channel) const { return data_.at(channel); }
  const std::vector<double>& values(std::string_view name) const { return data_.at(index(name)); }

  /// Sample interval of the buffer (0 when fewer than two samples).
  double sample_interval() const;

  bool operator==(const TimeSeries&) const;

 private:
  std::vector<Channel> channels_;
  std::vector<double> time_;
  std::vector<std::vector<double>> data_;
};

}  // namespace blackstart::circuit
