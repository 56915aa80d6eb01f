#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace suplab {

// One day at 1 Hz.
inline constexpr std::size_t kDaySamples = 86'400;
inline constexpr double kSampleRateHz = 1.0;

// Dense 1 Hz power readings in watts. `origin` is the day sample index of the
// first element, so slices keep their position within the day.
struct PowerSeries {
  std::vector<double> samples;
  std::size_t origin = 0;

  PowerSeries() = default;
  explicit PowerSeries(std::vector<double> values, std::size_t origin_index = 0)
      : samples(std::move(values)), origin(origin_index) {}

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  double operator[](std::size_t i) const { return samples[i]; }
  std::span<const double> view() const noexcept { return samples; }

  // Samples [first, first + count) as a new series positioned in the day.
  PowerSeries slice(std::size_t first, std::size_t count) const;

  friend bool operator==(const PowerSeries&, const PowerSeries&) = default;
};

// Throws Error(InvalidInput) when any sample is negative or not finite.
void validate_samples(std::span<const double> samples);

// Centered running median; windows are shrunk symmetrically at the edges so
// no padding value is ever invented. `window` must be odd and <= length.
PowerSeries median_smooth(const PowerSeries& series, std::size_t window);

double series_max(std::span<const double> values);
inline double series_max(const PowerSeries& series) { return series_max(series.view()); }

// Population standard deviation (divides by N).
double std_dev(std::span<const double> values);

// Median of an arbitrary sample; even counts average the two middle values.
double median(std::span<const double> values);

}  // namespace suplab
