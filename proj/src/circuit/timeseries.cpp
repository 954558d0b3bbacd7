#include "blackstart/circuit/timeseries.hpp"

#include <stdexcept>

namespace blackstart::circuit {

TimeSeries::TimeSeries(std::vector<Channel> channels)
    : channels_(std::move(channels)), data_(channels_.size()) {}

std::size_t TimeSeries::add_channel(Channel channel) {
  if (!time_.empty()) {
    throw std::logic_error("channels must be declared before the first sample");
  }
  channels_.push_back(std::move(channel));
  data_.emplace_back();
  return channels_.size() - 1;
}

std::optional<std::size_t> TimeSeries::find(std::string_view name) const {
  for (std::size_t k = 0; k < channels_.size(); ++k) {
    if (channels_[k].name == name) {
      return k;
    }
  }
  return std::nullopt;
}

std::size_t TimeSeries::index(std::string_view name) const {
  if (auto k = find(name)) {
    return *k;
  }
  throw std::out_of_range("no channel named '" + std::string(name) + "'");
}

void TimeSeries::append(double time, const std::vector<double>& values) {
  if (values.size() != channels_.size()) {
    throw std::invalid_argument("sample row width does not match channel count");
  }
  time_.push_back(time);
  for (std::size_t k = 0; k < values.size(); ++k) {
    data_[k].push_back(values[k]);
  }
}

double TimeSeries::sample_interval() const {
  if (time_.size() < 2) {
    return 0.0;
  }
  return (time_.back() - time_.front()) / static_cast<double>(time_.size() - 1);
}

bool TimeSeries::operator==(const TimeSeries& other) const {
  if (channels_.size() != other.channels_.size()) {
    return false;
  }
  for (std::size_t k = 0; k < channels_.size(); ++k) {
    if (channels_[k].name != other.channels_[k].name || channels_[k].unit != other.channels_[k].unit) {
      return false;
    }
  }
  return time_ == other.time_ && data_ == other.data_;
}

}  // namespace blackstart::circuit
