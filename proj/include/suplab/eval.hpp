#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "suplab/detection.hpp"
#include "suplab/dtw.hpp"
#include "suplab/mode.hpp"
#include "suplab/omicc.hpp"
#include "suplab/simulator.hpp"

namespace suplab {

// counts[true][predicted], Light/Medium/Heavy order.
struct ConfusionMatrix {
  std::array<std::array<std::size_t, kModeCount>, kModeCount> counts{};

  void add(OperationMode truth, OperationMode predicted) { ++counts[index_of(truth)][index_of(predicted)]; }
  std::size_t total() const;
  std::size_t row_total(OperationMode truth) const;
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct ModeScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct ModeMetrics {
  std::array<ModeScore, kModeCount> per_mode{};
  ModeScore macro;
};

// One-vs-rest scores; any zero denominator yields 0. Empty matrix is an error.
ModeMetrics metrics(const ConfusionMatrix& cm);

struct MethodOutcome {
  ConfusionMatrix overall;
  std::array<ConfusionMatrix, 3> by_intensity{};
  std::map<std::string, ConfusionMatrix> by_appliance;
  std::size_t errors = 0;
};

struct SweepRow {
  std::size_t reference_size = 0;
  double mean_detections = 0.0;
  std::size_t days = 0;
};

struct ExperimentReport {
  std::size_t events = 0;
  MethodOutcome dtw;
  MethodOutcome omicc;
  std::vector<SweepRow> sweep;
};

struct EvalParams {
  OmiccParams omicc;
  std::size_t smoother_window = 5;  // reference pattern shaping
};

// Both classifiers on every event of `test`, each fed the ground-truth t_on.
// Events whose appliance lacks references or training data are an error;
// per-event pipeline failures are counted per method and excluded from the
// matrices.
ExperimentReport compare_methods(const DaySource& test, const std::map<std::string, ModeReferenceSet>& refs,
                                 const std::map<std::string, TrainingSet>& training, const EvalParams& params);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Per appliance, the first round(train_frac * count) events of `source` in
// source order go to training and the rest to testing. train_frac in (0, 1).
SplitIndices split_by_fraction(const DaySource& source, double train_frac);

struct Evaluation {
  ExperimentReport report;
  std::map<std::string, TrainingSet> training;
  std::size_t training_skipped = 0;
};

// Splits each dataset separately (so every household contributes to both
// sides), builds the OMICC training sets from the pooled training events and
// runs compare_methods on the pooled test events.
Evaluation evaluate_split(const std::vector<const DaySource*>& datasets,
                          const std::map<std::string, ModeReferenceSet>& refs, double train_frac,
                          const EvalParams& params);

struct SweepSetup {
  SuproLibrary library;
  ApplianceSetup appliance;
  SimTuning tuning;
  DetectionConfig detection;
  std::size_t smoother_window = 5;
};

// The mode whose canonical SSUP the sweep cuts its references from.
OperationMode sweep_reference_mode(const SweepSetup& setup, std::uint64_t seed);

// For each reference size, mean number of detected turn-ons over `days`
// seeded single-SUP days. The reference is cut from the canonical SSUP of a
// mode drawn once per sweep from the appliance's intensity distribution.
std::vector<SweepRow> detection_sweep(const SweepSetup& setup, const std::vector<std::size_t>& sizes,
                                      std::size_t days, std::uint64_t seed);

nlohmann::json to_json(const ConfusionMatrix& cm);
nlohmann::json to_json(const ModeMetrics& m);
nlohmann::json to_json(const ExperimentReport& report);
std::string to_text(const ExperimentReport& report);

// Per-figure CSVs: metrics by intensity and mode, per-method per-mode
// metrics, and the detection sweep.
void write_plot_data(const ExperimentReport& report, const std::filesystem::path& dir);

}  // namespace suplab
