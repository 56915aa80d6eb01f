#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "suplab/mode.hpp"
#include "suplab/series.hpp"
#include "suplab/supro.hpp"

namespace suplab {

// The first n samples of a SUP, used as the template for turn-on detection.
struct ReferencePattern {
  PowerSeries series;
  OperationMode source_mode = OperationMode::Light;

  std::size_t size() const noexcept { return series.size(); }
};

// First `n` samples of the mode's canonical noise-free SSUP. When n exceeds
// the SSUP the pattern continues with zero power (the appliance is off).
ReferencePattern make_reference_pattern(const Supro& supro, std::size_t n, std::size_t smoother_window = 5);

struct DetectionConfig {
  double delta = 0.90;  // low amplitude canceling coefficient, in (0, 1)
  bool keep_trace = false;

  void validate() const;
};

struct DetectionTrace {
  std::vector<double> x;
  std::vector<double> residue;
};

struct DetectionResult {
  std::vector<std::size_t> turn_ons;  // day sample indices, strictly increasing
  double threshold = 0.0;             // watts
  std::optional<DetectionTrace> trace;
};

// X(t) = (max S + max D)/2 - mean_k |S(k) - D(t + k)| for t = 0 .. m - n.
std::vector<double> xcorr(const ReferencePattern& ref, const PowerSeries& day);

struct Residue {
  std::vector<double> values;  // X(t) - tau
  double threshold = 0.0;      // tau = delta * (max S + max D)/2
};

Residue residue(std::span<const double> x, const ReferencePattern& ref, const PowerSeries& day,
                const DetectionConfig& cfg);

// Index of the maximum (earliest on ties) of every maximal positive run.
std::vector<std::size_t> extract_turn_ons(std::span<const double> residue);

DetectionResult detect(const ReferencePattern& ref, const PowerSeries& day, const DetectionConfig& cfg);

}  // namespace suplab
