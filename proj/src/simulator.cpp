#include "suplab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <json.hpp>

#include "suplab/error.hpp"
#include "suplab/io.hpp"

namespace suplab {

namespace {

// CDF lookups tolerate accumulated rounding in partial sums (1/24 is not
// representable, so twelve of them need not reach exactly 0.5).
constexpr double kCdfSlack = 1e-12;

double quantize(double watts) { return std::round(watts * 100.0) / 100.0; }

std::size_t fit_window(std::size_t window, std::size_t length) {
  if (window <= length) return window;
  return length % 2 == 1 ? length : length - 1;
}

}  // namespace

TurnOnDistribution TurnOnDistribution::from_weights(std::span<const double> weights) {
  if (weights.size() != kHoursPerDay) {
    fail(ErrorKind::InvalidParameter,
         "turn-on distribution needs 24 hourly values, got " + std::to_string(weights.size()));
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      fail(ErrorKind::InvalidParameter, "turn-on probabilities must be finite and >= 0");
    }
    total += w;
  }
  if (!(total > 0.0)) fail(ErrorKind::InvalidParameter, "turn-on probabilities sum to zero");
  TurnOnDistribution dist;
  double running = 0.0;
  for (std::size_t h = 0; h < kHoursPerDay; ++h) {
    dist.pdf_[h] = weights[h] / total;
    running += dist.pdf_[h];
    dist.cdf_[h] = running;
  }
  dist.cdf_.back() = 1.0;
  return dist;
}

TurnOnDistribution TurnOnDistribution::uniform() {
  std::array<double, kHoursPerDay> flat;
  flat.fill(1.0);
  return from_weights(flat);
}

std::size_t TurnOnDistribution::hour_for(double u) const {
  for (std::size_t h = 0; h < kHoursPerDay; ++h) {
    if (cdf_[h] + kCdfSlack >= u && pdf_[h] > 0.0) return h;
  }
  return kHoursPerDay - 1;
}

IntensityDistribution IntensityDistribution::of(Intensity intensity) {
  std::array<double, kModeCount> probs;
  probs.fill(0.2);
  probs[index_of(major_mode(intensity))] = 0.6;
  return from_probabilities(intensity, probs);
}

IntensityDistribution IntensityDistribution::from_probabilities(Intensity label,
                                                                std::array<double, kModeCount> probs) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) fail(ErrorKind::InvalidParameter, "mode probabilities must be >= 0");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(ErrorKind::InvalidParameter, "mode probabilities must sum to 1");
  IntensityDistribution dist;
  dist.intensity_ = label;
  dist.probs_ = probs;
  return dist;
}

OperationMode IntensityDistribution::mode_for(double u) const {
  double running = 0.0;
  for (auto mode : kModes) {
    running += probs_[index_of(mode)];
    if (running + kCdfSlack >= u && probs_[index_of(mode)] > 0.0) return mode;
  }
  for (auto it = kModes.rbegin(); it != kModes.rend(); ++it) {
    if (probs_[index_of(*it)] > 0.0) return *it;
  }
  return kModes.back();
}

void SimTuning::validate() const {
  if (!(alpha_sigma > 0.0) || !std::isfinite(alpha_sigma)) {
    fail(ErrorKind::InvalidParameter, "alpha sigma must be > 0");
  }
  if (!(beta_sigma > 0.0) || !std::isfinite(beta_sigma)) {
    fail(ErrorKind::InvalidParameter, "beta sigma must be > 0");
  }
  if (!(gamma > 0.0 && gamma <= 40.0)) fail(ErrorKind::InvalidParameter, "gamma must lie in (0, 40] W");
  if (smoother_window == 0 || smoother_window % 2 == 0) {
    fail(ErrorKind::InvalidParameter, "smoother window must be a positive odd sample count");
  }
}

SimTuning SimTuning::zero_variation() {
  SimTuning tuning;
  tuning.alpha_sigma = 0.0;
  tuning.beta_sigma = 0.0;
  tuning.gamma = 0.0;
  return tuning;
}

std::size_t sample_turn_on(const TurnOnDistribution& dist, RandomSource& rng) {
  const std::size_t hour = dist.hour_for(rng.uniform());
  const auto second = static_cast<std::size_t>(rng.uniform_int(0, kSecondsPerHour - 1));
  return hour * kSecondsPerHour + second;
}

OperationMode sample_mode(const IntensityDistribution& dist, RandomSource& rng) {
  return dist.mode_for(rng.uniform());
}

PowerSeries generate_ssup(const Supro& supro, const SimTuning& tuning, RandomSource& rng) {
  std::vector<double> power;
  for (const auto& phase : supro.phases) {
    const auto repeats = rng.uniform_int(phase.repeat_min, phase.repeat_max);
    for (std::int64_t r = 0; r < repeats; ++r) {
      for (const auto& cycle : phase.cycles) {
        double beta = 0.0;
        if (tuning.beta_sigma > 0.0) beta = std::clamp(rng.normal(0.0, tuning.beta_sigma), -0.95, 1.0);
        const auto duration = std::max<long>(1, std::lround(static_cast<double>(cycle.duration) * (1.0 + beta)));
        for (long s = 0; s < duration; ++s) {
          double alpha = 0.0;
          if (tuning.alpha_sigma > 0.0) alpha = std::clamp(rng.normal(0.0, tuning.alpha_sigma), -1.0, 1.0);
          power.push_back(std::max(0.0, cycle.power * (1.0 + alpha)));
        }
      }
    }
  }
  PowerSeries raw(std::move(power));
  PowerSeries smoothed = median_smooth(raw, fit_window(tuning.smoother_window, raw.size()));
  for (double& v : smoothed.samples) v = quantize(v);
  return smoothed;
}

PowerSeries canonical_ssup(const Supro& supro, std::size_t smoother_window) {
  SimTuning tuning = SimTuning::zero_variation();
  tuning.smoother_window = smoother_window;
  RandomSource unused(0);
  return generate_ssup(with_midpoint_repeats(supro), tuning, unused);
}

SyntheticDay generate_day(const SuproLibrary& library, std::string_view appliance,
                          const TurnOnDistribution& turn_on, const IntensityDistribution& intensity,
                          const SimTuning& tuning, RandomSource& rng) {
  std::size_t t_on = sample_turn_on(turn_on, rng);
  const OperationMode mode = sample_mode(intensity, rng);
  const PowerSeries ssup = generate_ssup(library.get(appliance, mode), tuning, rng);
  if (ssup.size() > kDaySamples) {
    fail(ErrorKind::Generation, "SSUP of " + std::to_string(ssup.size()) + " samples is longer than a day");
  }
  int attempts = 1;
  while (t_on + ssup.size() > kDaySamples) {
    if (attempts >= kPlacementAttempts) {
      fail(ErrorKind::Generation, "could not place a " + std::to_string(ssup.size()) +
                                      "-sample SSUP inside the day after " +
                                      std::to_string(kPlacementAttempts) + " turn-on draws");
    }
    t_on = sample_turn_on(turn_on, rng);
    ++attempts;
  }

  // Idle readings are truncated to centiwatts so they stay strictly below gamma.
  const double idle_cap = tuning.gamma > 0.0 ? std::floor(std::nextafter(tuning.gamma, 0.0) * 100.0) / 100.0 : 0.0;
  auto idle = [&] { return std::min(idle_cap, std::floor(rng.uniform(0.0, tuning.gamma) * 100.0) / 100.0); };

  SyntheticDay day;
  day.series.samples.resize(kDaySamples);
  auto& samples = day.series.samples;
  for (std::size_t i = 0; i < t_on; ++i) samples[i] = idle();
  std::copy(ssup.samples.begin(), ssup.samples.end(), samples.begin() + static_cast<std::ptrdiff_t>(t_on));
  for (std::size_t i = t_on + ssup.size(); i < kDaySamples; ++i) samples[i] = idle();
  day.labels.push_back({"", t_on, std::string(appliance), mode, ssup.size()});
  return day;
}

std::string day_file_name(std::string_view appliance, std::size_t day_index) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "_%04zu.csv", day_index);
  return std::string(appliance) + buffer;
}

SyntheticDay generate_dataset_day(const DatasetSpec& spec, std::size_t appliance_index,
                                  std::size_t day_index) {
  const auto& setup = spec.appliances.at(appliance_index);
  // The intensity is part of the stream key so datasets that differ only in
  // household intensity do not replay the same turn-on times.
  RandomSource rng = RandomSource::derive(spec.seed, (appliance_index << 2) | index_of(setup.intensity), day_index);
  SyntheticDay day = generate_day(spec.library, setup.name, setup.turn_on,
                                  IntensityDistribution::of(setup.intensity), spec.tuning, rng);
  for (auto& label : day.labels) label.day_file = day_file_name(setup.name, day_index);
  return day;
}

SimulatedDataset::SimulatedDataset(DatasetSpec spec) : spec_(std::move(spec)) {
  if (spec_.days < 1) fail(ErrorKind::InvalidParameter, "dataset needs at least one day");
  labels_.resize(spec_.appliances.size() * spec_.days);
  const auto count = static_cast<std::ptrdiff_t>(labels_.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const auto idx = static_cast<std::size_t>(i);
      labels_[idx] = generate(idx).labels.front();
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

Intensity SimulatedDataset::intensity(std::size_t i) const {
  return spec_.appliances.at(i / spec_.days).intensity;
}

PowerSeries SimulatedDataset::series(std::size_t i) const { return generate(i).series; }

SyntheticDay SimulatedDataset::generate(std::size_t i) const {
  return generate_dataset_day(spec_, i / spec_.days, i % spec_.days);
}

LabeledDataset generate_dataset(const DatasetSpec& spec) {
  if (spec.days < 1) fail(ErrorKind::InvalidParameter, "dataset needs at least one day");
  LabeledDataset dataset;
  dataset.records.resize(spec.appliances.size() * spec.days);
  const auto count = static_cast<std::ptrdiff_t>(dataset.records.size());
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const auto idx = static_cast<std::size_t>(i);
      const std::size_t a = idx / spec.days;
      auto day = generate_dataset_day(spec, a, idx % spec.days);
      dataset.records[idx] = {day.labels.front(), spec.appliances[a].intensity, std::move(day.series)};
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return dataset;
}

namespace {

nlohmann::json manifest_json(const DatasetSpec& spec) {
  nlohmann::json doc;
  doc["seed"] = spec.seed;
  doc["days"] = spec.days;
  doc["tuning"] = {{"alphaSigma", spec.tuning.alpha_sigma},
                   {"betaSigma", spec.tuning.beta_sigma},
                   {"gamma", spec.tuning.gamma},
                   {"smootherWindow", spec.tuning.smoother_window}};
  doc["appliances"] = nlohmann::json::array();
  for (const auto& setup : spec.appliances) {
    doc["appliances"].push_back({{"name", setup.name},
                                 {"intensity", std::string(to_string(setup.intensity))},
                                 {"turnOnPdf", setup.turn_on.pdf()}});
  }
  return doc;
}

}  // namespace

void write_dataset(const DatasetSpec& spec, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::size_t count = spec.appliances.size() * spec.days;
  std::vector<LabelEvent> labels(count);
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    try {
      const auto idx = static_cast<std::size_t>(i);
      auto day = generate_dataset_day(spec, idx / spec.days, idx % spec.days);
      labels[idx] = day.labels.front();
      io::write_series_csv(dir / labels[idx].day_file, day.series);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  io::write_labels_csv(dir / "labels.csv", labels);
  io::write_text(dir / "manifest.json", manifest_json(spec).dump(2) + "\n");
}

DatasetDirectory::DatasetDirectory(std::filesystem::path dir) : dir_(std::move(dir)) {
  labels_ = io::read_labels_csv(dir_ / "labels.csv");
  std::map<std::string, Intensity> by_appliance;
  const auto manifest_path = dir_ / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    try {
      const auto doc = nlohmann::json::parse(io::read_text(manifest_path));
      for (const auto& entry : doc.at("appliances")) {
        by_appliance[entry.at("name").get<std::string>()] =
            parse_intensity(entry.at("intensity").get<std::string>());
      }
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Parse, manifest_path.string() + ": " + e.what());
    }
  }
  intensities_.reserve(labels_.size());
  for (const auto& label : labels_) {
    const auto it = by_appliance.find(label.appliance);
    intensities_.push_back(it == by_appliance.end() ? Intensity::Medium : it->second);
  }
}

PowerSeries DatasetDirectory::series(std::size_t i) const {
  return io::read_series_csv(dir_ / labels_.at(i).day_file);
}

void CombinedSource::add(const DaySource& source) { sources_.push_back(&source); }

std::size_t CombinedSource::size() const {
  std::size_t total = 0;
  for (const auto* s : sources_) total += s->size();
  return total;
}

std::pair<const DaySource*, std::size_t> CombinedSource::locate(std::size_t i) const {
  for (const auto* s : sources_) {
    if (i < s->size()) return {s, i};
    i -= s->size();
  }
  fail(ErrorKind::InvalidInput, "day index out of range");
}

const LabelEvent& CombinedSource::label(std::size_t i) const {
  const auto [source, local] = locate(i);
  return source->label(local);
}

Intensity CombinedSource::intensity(std::size_t i) const {
  const auto [source, local] = locate(i);
  return source->intensity(local);
}

PowerSeries CombinedSource::series(std::size_t i) const {
  const auto [source, local] = locate(i);
  return source->series(local);
}

SubsetSource::SubsetSource(const DaySource& base, std::vector<std::size_t> indices)
    : base_(&base), indices_(std::move(indices)) {
  for (auto i : indices_) {
    if (i >= base.size()) fail(ErrorKind::InvalidInput, "subset index out of range");
  }
}

}  // namespace suplab
