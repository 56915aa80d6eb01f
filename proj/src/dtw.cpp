#include "suplab/dtw.hpp"

#include <algorithm>

#include "suplab/error.hpp"
#include "suplab/io.hpp"
#include "suplab/kernels.hpp"
#include "suplab/simulator.hpp"

namespace suplab {

ModeReferenceSet ModeReferenceSet::from_library(const SuproLibrary& library, std::string_view appliance,
                                                std::size_t smoother_window) {
  ModeReferenceSet refs;
  for (auto mode : kModes) refs.set(mode, canonical_ssup(library.get(appliance, mode), smoother_window));
  return refs;
}

namespace {

std::filesystem::path pattern_file(const std::filesystem::path& dir, std::string_view appliance,
                                   OperationMode mode) {
  return dir / (std::string(appliance) + "_" + std::string(to_string(mode)) + ".csv");
}

}  // namespace

ModeReferenceSet ModeReferenceSet::load_directory(const std::filesystem::path& dir, std::string_view appliance) {
  ModeReferenceSet refs;
  for (auto mode : kModes) {
    auto pattern = io::read_series_csv(pattern_file(dir, appliance, mode));
    pattern.origin = 0;
    refs.set(mode, std::move(pattern));
  }
  return refs;
}

void ModeReferenceSet::write_directory(const std::filesystem::path& dir, std::string_view appliance) const {
  for (auto mode : kModes) io::write_series_csv(pattern_file(dir, appliance, mode), pattern(mode));
}

void ModeReferenceSet::set(OperationMode mode, PowerSeries pattern) {
  if (pattern.empty()) fail(ErrorKind::InvalidInput, "reference pattern must not be empty");
  patterns_[index_of(mode)] = std::move(pattern);
}

const PowerSeries& ModeReferenceSet::pattern(OperationMode mode) const {
  const auto& slot = patterns_[index_of(mode)];
  if (!slot) fail(ErrorKind::InvalidState, "no reference pattern for mode " + std::string(to_string(mode)));
  return *slot;
}

bool ModeReferenceSet::complete() const {
  return std::all_of(patterns_.begin(), patterns_.end(), [](const auto& p) { return p.has_value(); });
}

PowerSeries segment(const PowerSeries& day, std::size_t t_on, std::size_t size) {
  if (t_on >= day.size() || size > day.size() - 1 - t_on) {
    fail(ErrorKind::InvalidInput, "segment [" + std::to_string(t_on) + ", " + std::to_string(t_on + size) +
                                      "] exceeds the " + std::to_string(day.size()) + " available samples");
  }
  return day.slice(t_on, size + 1);
}

double dtw_distance(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) fail(ErrorKind::InvalidInput, "dtw_distance of an empty sequence");
  return kernels::serial::dtw(x, y);
}

DtwResult choose_mode(const std::array<double, kModeCount>& distances) {
  DtwResult result;
  result.distances = distances;
  std::size_t best = 0;
  for (std::size_t i = 1; i < kModeCount; ++i) {
    if (distances[i] < distances[best]) best = i;
  }
  result.chosen_mode = kModes[best];
  result.chosen_distance = distances[best];
  return result;
}

DtwResult classify_dtw(const PowerSeries& day, std::size_t t_on, const ModeReferenceSet& refs) {
  if (t_on >= day.size()) {
    fail(ErrorKind::InvalidInput, "turn-on index " + std::to_string(t_on) + " outside day of " +
                                      std::to_string(day.size()) + " samples");
  }
  std::array<double, kModeCount> distances{};
  for (auto mode : kModes) {
    const std::size_t size = std::min(refs.segment_size(mode), day.size() - 1 - t_on);
    const PowerSeries seg = segment(day, t_on, size);
    distances[index_of(mode)] = dtw_distance(refs.pattern(mode), seg);
  }
  return choose_mode(distances);
}

}  // namespace suplab
