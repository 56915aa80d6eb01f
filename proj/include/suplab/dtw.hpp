#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "suplab/mode.hpp"
#include "suplab/series.hpp"
#include "suplab/supro.hpp"

namespace suplab {

// Per-mode reference patterns P^m and their segment sizes k^m for one appliance.
class ModeReferenceSet {
 public:
  // Canonical noise-free SSUP per mode; the segment size is the pattern length.
  static ModeReferenceSet from_library(const SuproLibrary& library, std::string_view appliance,
                                       std::size_t smoother_window = 5);
  // Directory of `<appliance>_<mode>.csv` pattern files.
  static ModeReferenceSet load_directory(const std::filesystem::path& dir, std::string_view appliance);

  void set(OperationMode mode, PowerSeries pattern);
  const PowerSeries& pattern(OperationMode mode) const;
  std::size_t segment_size(OperationMode mode) const { return pattern(mode).size(); }
  bool complete() const;

  void write_directory(const std::filesystem::path& dir, std::string_view appliance) const;

 private:
  std::array<std::optional<PowerSeries>, kModeCount> patterns_;
};

// Samples [t_on, t_on + size] of the day (size + 1 samples, closed interval).
PowerSeries segment(const PowerSeries& day, std::size_t t_on, std::size_t size);

double dtw_distance(std::span<const double> x, std::span<const double> y);
inline double dtw_distance(const PowerSeries& x, const PowerSeries& y) {
  return dtw_distance(x.view(), y.view());
}

struct DtwResult {
  std::array<double, kModeCount> distances{};
  OperationMode chosen_mode = OperationMode::Light;
  double chosen_distance = 0.0;
};

// Argmin over modes; ties go to the earlier mode in Light, Medium, Heavy order.
DtwResult choose_mode(const std::array<double, kModeCount>& distances);

// Segments running past the end of the day are truncated to the day end.
DtwResult classify_dtw(const PowerSeries& day, std::size_t t_on, const ModeReferenceSet& refs);

}  // namespace suplab
