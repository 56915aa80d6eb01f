#include "suplab/detection.hpp"

#include <cmath>
#include <string>

#include "suplab/error.hpp"
#include "suplab/kernels.hpp"
#include "suplab/simulator.hpp"

namespace suplab {

ReferencePattern make_reference_pattern(const Supro& supro, std::size_t n, std::size_t smoother_window) {
  if (n < 1 || n > kDaySamples) {
    fail(ErrorKind::InvalidParameter, "reference pattern size must lie in [1, 86400], got " + std::to_string(n));
  }
  PowerSeries ssup = canonical_ssup(supro, smoother_window);
  ssup.samples.resize(n, 0.0);
  return {std::move(ssup), supro.mode};
}

void DetectionConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) {
    fail(ErrorKind::InvalidParameter, "delta must lie in (0, 1), got " + std::to_string(delta));
  }
}

namespace {

double average_max(const ReferencePattern& ref, const PowerSeries& day) {
  return 0.5 * (series_max(ref.series) + series_max(day));
}

}  // namespace

std::vector<double> xcorr(const ReferencePattern& ref, const PowerSeries& day) {
  if (ref.series.empty() || day.empty()) fail(ErrorKind::InvalidInput, "xcorr of an empty series");
  if (ref.size() > day.size()) {
    fail(ErrorKind::InvalidInput, "reference pattern (" + std::to_string(ref.size()) +
                                      " samples) is longer than the day (" + std::to_string(day.size()) + ")");
  }
  std::vector<double> out(day.size() - ref.size() + 1);
  kernels::parallel::abs_diff_correlation(ref.series.view(), day.view(), average_max(ref, day), out);
  return out;
}

Residue residue(std::span<const double> x, const ReferencePattern& ref, const PowerSeries& day,
                const DetectionConfig& cfg) {
  Residue out;
  out.threshold = cfg.delta * average_max(ref, day);
  out.values.resize(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) out.values[t] = x[t] - out.threshold;
  return out;
}

std::vector<std::size_t> extract_turn_ons(std::span<const double> residue) {
  std::vector<std::size_t> peaks;
  std::size_t t = 0;
  while (t < residue.size()) {
    if (!(residue[t] > 0.0)) {
      ++t;
      continue;
    }
    std::size_t best = t;
    for (; t < residue.size() && residue[t] > 0.0; ++t) {
      if (residue[t] > residue[best]) best = t;
    }
    peaks.push_back(best);
  }
  return peaks;
}

DetectionResult detect(const ReferencePattern& ref, const PowerSeries& day, const DetectionConfig& cfg) {
  cfg.validate();
  auto x = xcorr(ref, day);
  auto res = residue(x, ref, day, cfg);
  DetectionResult result;
  result.threshold = res.threshold;
  result.turn_ons = extract_turn_ons(res.values);
  for (auto& t : result.turn_ons) t += day.origin;
  if (cfg.keep_trace) result.trace = DetectionTrace{std::move(x), std::move(res.values)};
  return result;
}

}  // namespace suplab
