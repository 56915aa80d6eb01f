#include "suplab/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "suplab/error.hpp"
#include "suplab/kernels.hpp"

namespace suplab {

PowerSeries PowerSeries::slice(std::size_t first, std::size_t count) const {
  if (first > samples.size() || count > samples.size() - first) {
    fail(ErrorKind::InvalidInput, "slice [" + std::to_string(first) + ", " +
                                      std::to_string(first + count) + ") outside series of length " +
                                      std::to_string(samples.size()));
  }
  const auto begin = samples.begin() + static_cast<std::ptrdiff_t>(first);
  return PowerSeries(std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(count)),
                     origin + first);
}

void validate_samples(std::span<const double> samples) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i]) || samples[i] < 0.0) {
      fail(ErrorKind::InvalidInput,
           "sample " + std::to_string(i) + " is not a finite non-negative power value");
    }
  }
}

PowerSeries median_smooth(const PowerSeries& series, std::size_t window) {
  if (window == 0 || window % 2 == 0) {
    fail(ErrorKind::InvalidParameter,
         "smoother window must be a positive odd sample count, got " + std::to_string(window));
  }
  if (window > series.size()) {
    fail(ErrorKind::InvalidParameter, "smoother window " + std::to_string(window) +
                                          " exceeds series length " + std::to_string(series.size()));
  }
  PowerSeries out;
  out.origin = series.origin;
  out.samples.resize(series.size());
  kernels::parallel::running_median(series.view(), window / 2, out.samples);
  return out;
}

double series_max(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::InvalidInput, "series_max of an empty series");
  return *std::max_element(values.begin(), values.end());
}

double std_dev(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::InvalidInput, "std_dev of an empty sequence");
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double sum_sq = 0.0;
  for (double v : values) sum_sq += (v - mean) * (v - mean);
  return std::sqrt(sum_sq / n);
}

double median(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::InvalidInput, "median of an empty sequence");
  std::vector<double> buffer(values.begin(), values.end());
  const std::size_t mid = buffer.size() / 2;
  std::nth_element(buffer.begin(), buffer.begin() + static_cast<std::ptrdiff_t>(mid), buffer.end());
  const double upper = buffer[mid];
  if (buffer.size() % 2 == 1) return upper;
  const double lower = *std::max_element(buffer.begin(), buffer.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace suplab
