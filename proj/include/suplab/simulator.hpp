#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "suplab/mode.hpp"
#include "suplab/random.hpp"
#include "suplab/series.hpp"
#include "suplab/supro.hpp"

namespace suplab {

inline constexpr std::size_t kHoursPerDay = 24;
inline constexpr std::size_t kSecondsPerHour = 3600;

// Discrete turn-on probability over the 24 hourly partitions of a day.
class TurnOnDistribution {
 public:
  // `weights` must be 24 non-negative values with a positive sum; they are
  // normalised into a pdf.
  static TurnOnDistribution from_weights(std::span<const double> weights);
  static TurnOnDistribution uniform();

  const std::array<double, kHoursPerDay>& pdf() const noexcept { return pdf_; }
  const std::array<double, kHoursPerDay>& cdf() const noexcept { return cdf_; }

  // Inverse CDF: the first hour whose cumulative probability reaches u.
  std::size_t hour_for(double u) const;

 private:
  std::array<double, kHoursPerDay> pdf_{};
  std::array<double, kHoursPerDay> cdf_{};
};

// Multinomial over operation modes: the major mode gets 60 %, each minor 20 %.
class IntensityDistribution {
 public:
  static IntensityDistribution of(Intensity intensity);
  // Arbitrary probabilities in Light, Medium, Heavy order (sum 1 within 1e-9).
  static IntensityDistribution from_probabilities(Intensity label, std::array<double, kModeCount> probs);

  Intensity intensity() const noexcept { return intensity_; }
  const std::array<double, kModeCount>& probabilities() const noexcept { return probs_; }
  OperationMode mode_for(double u) const;

 private:
  Intensity intensity_ = Intensity::Medium;
  std::array<double, kModeCount> probs_{};
};

struct SimTuning {
  double alpha_sigma = 0.2;        // per-sample power variation
  double beta_sigma = 0.2;         // per-cycle duration variation
  double gamma = 40.0;             // idle noise ceiling, watts
  std::size_t smoother_window = 5;

  // Throws Error(InvalidParameter) unless alpha/beta > 0, 0 < gamma <= 40
  // and the window is odd.
  void validate() const;

  // Noise-free settings used to build reference patterns (and by tests).
  static SimTuning zero_variation();
};

struct LabelEvent {
  std::string day_file;
  std::size_t t_on = 0;
  std::string appliance;
  OperationMode mode = OperationMode::Light;
  std::size_t ssup_length = 0;

  friend bool operator==(const LabelEvent&, const LabelEvent&) = default;
};

struct SyntheticDay {
  PowerSeries series;
  std::vector<LabelEvent> labels;
};

// Turn-on time as a day sample index: hour by CDF inversion, then a uniform
// second within that hour.
std::size_t sample_turn_on(const TurnOnDistribution& dist, RandomSource& rng);
OperationMode sample_mode(const IntensityDistribution& dist, RandomSource& rng);

// One synthetic single usage profile, median-smoothed.
PowerSeries generate_ssup(const Supro& supro, const SimTuning& tuning, RandomSource& rng);

// Noise-free SSUP of the canonical (midpoint-repeat) shape.
PowerSeries canonical_ssup(const Supro& supro, std::size_t smoother_window);

// Maximum attempts at placing an SSUP inside the day before giving up.
inline constexpr int kPlacementAttempts = 1000;

// One day holding a single SSUP of a sampled mode at a sampled turn-on time,
// surrounded by uniform idle noise on [0, gamma).
SyntheticDay generate_day(const SuproLibrary& library, std::string_view appliance,
                          const TurnOnDistribution& turn_on, const IntensityDistribution& intensity,
                          const SimTuning& tuning, RandomSource& rng);

struct ApplianceSetup {
  std::string name;
  TurnOnDistribution turn_on = TurnOnDistribution::uniform();
  Intensity intensity = Intensity::Medium;
};

// Everything needed to regenerate any day of a dataset independently.
struct DatasetSpec {
  SuproLibrary library;
  std::vector<ApplianceSetup> appliances;
  std::size_t days = 1;
  SimTuning tuning;
  std::uint64_t seed = 42;
};

std::string day_file_name(std::string_view appliance, std::size_t day_index);

// Ground truth plus the household intensity of the event's dataset.
struct DayRecord {
  LabelEvent label;
  Intensity intensity = Intensity::Medium;
  PowerSeries series;
};

// Random access to labelled days. Implementations may keep days in memory,
// read them from disk, or regenerate them on demand; `day` must be callable
// concurrently.
class DaySource {
 public:
  virtual ~DaySource() = default;
  virtual std::size_t size() const = 0;
  virtual const LabelEvent& label(std::size_t i) const = 0;
  virtual Intensity intensity(std::size_t i) const = 0;
  virtual PowerSeries series(std::size_t i) const = 0;

  DayRecord record(std::size_t i) const { return {label(i), intensity(i), series(i)}; }
};

struct LabeledDataset final : DaySource {
  std::vector<DayRecord> records;

  std::size_t size() const override { return records.size(); }
  const LabelEvent& label(std::size_t i) const override { return records.at(i).label; }
  Intensity intensity(std::size_t i) const override { return records.at(i).intensity; }
  PowerSeries series(std::size_t i) const override { return records.at(i).series; }
};

// Days are regenerated from (seed, appliance index, day index) on each access,
// so memory stays bounded for large corpora. Labels are computed eagerly.
class SimulatedDataset final : public DaySource {
 public:
  explicit SimulatedDataset(DatasetSpec spec);

  std::size_t size() const override { return labels_.size(); }
  const LabelEvent& label(std::size_t i) const override { return labels_.at(i); }
  Intensity intensity(std::size_t i) const override;
  PowerSeries series(std::size_t i) const override;

  const DatasetSpec& spec() const noexcept { return spec_; }

 private:
  SyntheticDay generate(std::size_t i) const;

  DatasetSpec spec_;
  std::vector<LabelEvent> labels_;
};

SyntheticDay generate_dataset_day(const DatasetSpec& spec, std::size_t appliance_index,
                                  std::size_t day_index);

// Fully materialised dataset, appliance-major order.
LabeledDataset generate_dataset(const DatasetSpec& spec);

// Dataset directory layout: one `<appliance>_<day>.csv` per day, `labels.csv`
// and a `manifest.json` recording per-appliance intensity and the generator
// configuration.
void write_dataset(const DatasetSpec& spec, const std::filesystem::path& dir);

class DatasetDirectory final : public DaySource {
 public:
  explicit DatasetDirectory(std::filesystem::path dir);

  std::size_t size() const override { return labels_.size(); }
  const LabelEvent& label(std::size_t i) const override { return labels_.at(i); }
  Intensity intensity(std::size_t i) const override { return intensities_.at(i); }
  PowerSeries series(std::size_t i) const override;

  const std::filesystem::path& path() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<LabelEvent> labels_;
  std::vector<Intensity> intensities_;
};

// Concatenation of several sources (e.g. one dataset per household).
class CombinedSource final : public DaySource {
 public:
  void add(const DaySource& source);

  std::size_t size() const override;
  const LabelEvent& label(std::size_t i) const override;
  Intensity intensity(std::size_t i) const override;
  PowerSeries series(std::size_t i) const override;

 private:
  std::pair<const DaySource*, std::size_t> locate(std::size_t i) const;
  std::vector<const DaySource*> sources_;
};

// The events of `base` at the listed indices, in that order.
class SubsetSource final : public DaySource {
 public:
  SubsetSource(const DaySource& base, std::vector<std::size_t> indices);

  std::size_t size() const override { return indices_.size(); }
  const LabelEvent& label(std::size_t i) const override { return base_->label(indices_.at(i)); }
  Intensity intensity(std::size_t i) const override { return base_->intensity(indices_.at(i)); }
  PowerSeries series(std::size_t i) const override { return base_->series(indices_.at(i)); }

 private:
  const DaySource* base_;
  std::vector<std::size_t> indices_;
};

}  // namespace suplab
