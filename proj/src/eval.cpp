#include "suplab/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <optional>
#include <sstream>

#include "suplab/error.hpp"
#include "suplab/io.hpp"

namespace suplab {

std::size_t ConfusionMatrix::total() const {
  std::size_t sum = 0;
  for (const auto& row : counts) {
    for (auto c : row) sum += c;
  }
  return sum;
}

std::size_t ConfusionMatrix::row_total(OperationMode truth) const {
  std::size_t sum = 0;
  for (auto c : counts[index_of(truth)]) sum += c;
  return sum;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  for (std::size_t i = 0; i < kModeCount; ++i) {
    for (std::size_t j = 0; j < kModeCount; ++j) counts[i][j] += other.counts[i][j];
  }
  return *this;
}

ModeMetrics metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) fail(ErrorKind::InvalidInput, "metrics of an empty confusion matrix");
  ModeMetrics out;
  for (std::size_t m = 0; m < kModeCount; ++m) {
    std::size_t predicted = 0;
    std::size_t actual = 0;
    for (std::size_t o = 0; o < kModeCount; ++o) {
      predicted += cm.counts[o][m];
      actual += cm.counts[m][o];
    }
    const double tp = static_cast<double>(cm.counts[m][m]);
    auto& s = out.per_mode[m];
    s.precision = predicted == 0 ? 0.0 : tp / static_cast<double>(predicted);
    s.recall = actual == 0 ? 0.0 : tp / static_cast<double>(actual);
    s.f1 = s.precision + s.recall == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    out.macro.precision += s.precision / kModeCount;
    out.macro.recall += s.recall / kModeCount;
    out.macro.f1 += s.f1 / kModeCount;
  }
  return out;
}

ExperimentReport compare_methods(const DaySource& test, const std::map<std::string, ModeReferenceSet>& refs,
                                 const std::map<std::string, TrainingSet>& training, const EvalParams& params) {
  params.omicc.validate();
  const std::size_t n = test.size();
  if (n == 0) fail(ErrorKind::InvalidInput, "evaluation dataset is empty");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& appliance = test.label(i).appliance;
    if (refs.count(appliance) == 0) fail(ErrorKind::InvalidInput, "no DTW reference patterns for '" + appliance + "'");
    if (training.count(appliance) == 0) fail(ErrorKind::InvalidInput, "no OMICC training set for '" + appliance + "'");
  }

  std::vector<std::optional<OperationMode>> dtw_pred(n), omicc_pred(n);
  std::exception_ptr fatal;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(n); ++e) {
    const auto i = static_cast<std::size_t>(e);
    try {
      const auto& label = test.label(i);
      const PowerSeries day = test.series(i);
      try {
        dtw_pred[i] = classify_dtw(day, label.t_on, refs.at(label.appliance)).chosen_mode;
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::Io) throw;
      }
      try {
        omicc_pred[i] = omicc_classify(day, label.t_on, training.at(label.appliance), params.omicc);
      } catch (const Error& err) {
        if (err.kind() == ErrorKind::Io) throw;
      }
    } catch (...) {
#pragma omp critical
      if (!fatal) fatal = std::current_exception();
    }
  }
  if (fatal) std::rethrow_exception(fatal);

  ExperimentReport report;
  report.events = n;
  auto tally = [&](MethodOutcome& outcome, const std::vector<std::optional<OperationMode>>& pred) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!pred[i]) {
        ++outcome.errors;
        continue;
      }
      const auto& label = test.label(i);
      outcome.overall.add(label.mode, *pred[i]);
      outcome.by_intensity[index_of(test.intensity(i))].add(label.mode, *pred[i]);
      outcome.by_appliance[label.appliance].add(label.mode, *pred[i]);
    }
  };
  tally(report.dtw, dtw_pred);
  tally(report.omicc, omicc_pred);
  return report;
}

SplitIndices split_by_fraction(const DaySource& source, double train_frac) {
  if (!(train_frac > 0.0 && train_frac < 1.0)) {
    fail(ErrorKind::InvalidParameter, "train fraction must lie in (0, 1), got " + std::to_string(train_frac));
  }
  std::map<std::string, std::vector<std::size_t>> by_appliance;
  for (std::size_t i = 0; i < source.size(); ++i) by_appliance[source.label(i).appliance].push_back(i);

  SplitIndices split;
  for (const auto& [appliance, events] : by_appliance) {
    const auto n_train = static_cast<std::size_t>(std::llround(train_frac * static_cast<double>(events.size())));
    for (std::size_t k = 0; k < events.size(); ++k) (k < n_train ? split.train : split.test).push_back(events[k]);
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

Evaluation evaluate_split(const std::vector<const DaySource*>& datasets,
                          const std::map<std::string, ModeReferenceSet>& refs, double train_frac,
                          const EvalParams& params) {
  if (datasets.empty()) fail(ErrorKind::InvalidInput, "no datasets to evaluate");
  std::vector<SubsetSource> train_parts, test_parts;
  train_parts.reserve(datasets.size());
  test_parts.reserve(datasets.size());
  for (const auto* ds : datasets) {
    auto split = split_by_fraction(*ds, train_frac);
    train_parts.emplace_back(*ds, std::move(split.train));
    test_parts.emplace_back(*ds, std::move(split.test));
  }
  CombinedSource train, test;
  for (const auto& part : train_parts) train.add(part);
  for (const auto& part : test_parts) test.add(part);

  std::set<std::string> appliances;
  for (std::size_t i = 0; i < train.size(); ++i) appliances.insert(train.label(i).appliance);

  Evaluation out;
  for (const auto& appliance : appliances) {
    auto built = build_training_set(train, appliance, params.omicc);
    out.training_skipped += built.skipped;
    out.training.emplace(appliance, std::move(built.training));
  }
  out.report = compare_methods(test, refs, out.training, params);
  return out;
}

OperationMode sweep_reference_mode(const SweepSetup& setup, std::uint64_t seed) {
  RandomSource pick = RandomSource::derive(seed, 0xCAFE, 0);
  return sample_mode(IntensityDistribution::of(setup.appliance.intensity), pick);
}

std::vector<SweepRow> detection_sweep(const SweepSetup& setup, const std::vector<std::size_t>& sizes,
                                      std::size_t days, std::uint64_t seed) {
  if (days < 1) fail(ErrorKind::InvalidParameter, "sweep needs at least one day");
  setup.detection.validate();
  for (auto n : sizes) {
    if (n < 1) fail(ErrorKind::InvalidParameter, "reference sizes must be >= 1");
  }
  const auto intensity = IntensityDistribution::of(setup.appliance.intensity);
  const OperationMode ref_mode = sweep_reference_mode(setup, seed);
  const Supro& ref_supro = setup.library.get(setup.appliance.name, ref_mode);

  std::vector<ReferencePattern> refs;
  refs.reserve(sizes.size());
  for (auto n : sizes) refs.push_back(make_reference_pattern(ref_supro, n, setup.smoother_window));

  std::vector<std::vector<std::size_t>> counts(days, std::vector<std::size_t>(sizes.size(), 0));
  std::exception_ptr fatal;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t d = 0; d < static_cast<std::ptrdiff_t>(days); ++d) {
    try {
      RandomSource rng = RandomSource::derive(seed, 1, static_cast<std::uint64_t>(d));
      const auto day = generate_day(setup.library, setup.appliance.name, setup.appliance.turn_on, intensity,
                                    setup.tuning, rng);
      for (std::size_t s = 0; s < sizes.size(); ++s) {
        counts[static_cast<std::size_t>(d)][s] = detect(refs[s], day.series, setup.detection).turn_ons.size();
      }
    } catch (...) {
#pragma omp critical
      if (!fatal) fatal = std::current_exception();
    }
  }
  if (fatal) std::rethrow_exception(fatal);

  std::vector<SweepRow> rows;
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    std::size_t total = 0;
    for (std::size_t d = 0; d < days; ++d) total += counts[d][s];
    rows.push_back({sizes[s], static_cast<double>(total) / static_cast<double>(days), days});
  }
  return rows;
}

nlohmann::json to_json(const ConfusionMatrix& cm) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : cm.counts) rows.push_back(row);
  return rows;
}

namespace {

nlohmann::json score_json(const ModeScore& s) {
  return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

nlohmann::json matrix_with_metrics(const ConfusionMatrix& cm) {
  nlohmann::json out;
  out["confusion"] = to_json(cm);
  out["total"] = cm.total();
  if (cm.total() > 0) out["metrics"] = to_json(metrics(cm));
  return out;
}

nlohmann::json outcome_json(const MethodOutcome& outcome) {
  nlohmann::json out = matrix_with_metrics(outcome.overall);
  out["errors"] = outcome.errors;
  nlohmann::json by_intensity = nlohmann::json::object();
  for (auto intensity : kIntensities) {
    const auto& cm = outcome.by_intensity[index_of(intensity)];
    if (cm.total() > 0) by_intensity[std::string(to_string(intensity))] = matrix_with_metrics(cm);
  }
  out["byIntensity"] = by_intensity;
  nlohmann::json by_appliance = nlohmann::json::object();
  for (const auto& [name, cm] : outcome.by_appliance) by_appliance[name] = matrix_with_metrics(cm);
  out["byAppliance"] = by_appliance;
  return out;
}

std::string fixed(double v, int digits = 3) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.*f", digits, v);
  return buffer;
}

}  // namespace

nlohmann::json to_json(const ModeMetrics& m) {
  nlohmann::json out;
  for (auto mode : kModes) out["perMode"][std::string(to_string(mode))] = score_json(m.per_mode[index_of(mode)]);
  out["macro"] = score_json(m.macro);
  return out;
}

nlohmann::json to_json(const ExperimentReport& report) {
  nlohmann::json out;
  out["events"] = report.events;
  out["modeOrder"] = {"Light", "Medium", "Heavy"};
  out["methods"]["dtw"] = outcome_json(report.dtw);
  out["methods"]["omicc"] = outcome_json(report.omicc);
  if (!report.sweep.empty()) {
    out["detectionSweep"] = nlohmann::json::array();
    for (const auto& row : report.sweep) {
      out["detectionSweep"].push_back(
          {{"referenceSize", row.reference_size}, {"meanDetections", row.mean_detections}, {"days", row.days}});
    }
  }
  return out;
}

std::string to_text(const ExperimentReport& report) {
  std::ostringstream os;
  os << "events: " << report.events << "\n\n";
  os << "method  precision  recall  f1      errors\n";
  for (const auto& [name, outcome] : {std::pair<const char*, const MethodOutcome*>{"DTW", &report.dtw},
                                      std::pair<const char*, const MethodOutcome*>{"OMICC", &report.omicc}}) {
    char line[128];
    if (outcome->overall.total() == 0) {
      std::snprintf(line, sizeof line, "%-7s %-10s %-7s %-7s %zu\n", name, "-", "-", "-", outcome->errors);
    } else {
      const auto m = metrics(outcome->overall);
      std::snprintf(line, sizeof line, "%-7s %-10s %-7s %-7s %zu\n", name, fixed(m.macro.precision).c_str(),
                    fixed(m.macro.recall).c_str(), fixed(m.macro.f1).c_str(), outcome->errors);
    }
    os << line;
  }
  os << "\nper intensity (precision/recall/f1 by mode)\n";
  for (const auto& [name, outcome] : {std::pair<const char*, const MethodOutcome*>{"DTW", &report.dtw},
                                      std::pair<const char*, const MethodOutcome*>{"OMICC", &report.omicc}}) {
    for (auto intensity : kIntensities) {
      const auto& cm = outcome->by_intensity[index_of(intensity)];
      if (cm.total() == 0) continue;
      const auto m = metrics(cm);
      char head[64];
      std::snprintf(head, sizeof head, "%-6s %-7s", name, std::string(to_string(intensity)).c_str());
      os << head;
      for (auto mode : kModes) {
        const auto& s = m.per_mode[index_of(mode)];
        char cell[64];
        std::snprintf(cell, sizeof cell, "  %-6s %s/%s/%s", std::string(to_string(mode)).c_str(),
                      fixed(s.precision, 2).c_str(), fixed(s.recall, 2).c_str(), fixed(s.f1, 2).c_str());
        os << cell;
      }
      os << '\n';
    }
  }
  if (!report.sweep.empty()) {
    os << "\nreference size  mean detections  days\n";
    for (const auto& row : report.sweep) {
      char line[96];
      std::snprintf(line, sizeof line, "%-15zu %-16s %zu\n", row.reference_size, fixed(row.mean_detections).c_str(),
                    row.days);
      os << line;
    }
  }
  return os.str();
}

void write_plot_data(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::string intensity_csv = "method,intensity,mode,precision,recall,f1\n";
  std::string mode_csv = "method,mode,precision,recall,f1\n";
  for (const auto& [name, outcome] : {std::pair<const char*, const MethodOutcome*>{"dtw", &report.dtw},
                                      std::pair<const char*, const MethodOutcome*>{"omicc", &report.omicc}}) {
    for (auto intensity : kIntensities) {
      const auto& cm = outcome->by_intensity[index_of(intensity)];
      if (cm.total() == 0) continue;
      const auto m = metrics(cm);
      for (auto mode : kModes) {
        const auto& s = m.per_mode[index_of(mode)];
        intensity_csv += std::string(name) + "," + std::string(to_string(intensity)) + "," +
                         std::string(to_string(mode)) + "," + fixed(s.precision, 6) + "," + fixed(s.recall, 6) +
                         "," + fixed(s.f1, 6) + "\n";
      }
    }
    if (outcome->overall.total() > 0) {
      const auto m = metrics(outcome->overall);
      for (auto mode : kModes) {
        const auto& s = m.per_mode[index_of(mode)];
        mode_csv += std::string(name) + "," + std::string(to_string(mode)) + "," + fixed(s.precision, 6) + "," +
                    fixed(s.recall, 6) + "," + fixed(s.f1, 6) + "\n";
      }
    }
  }
  io::write_text(dir / "metrics_by_intensity.csv", intensity_csv);
  io::write_text(dir / "metrics_by_mode.csv", mode_csv);
  if (!report.sweep.empty()) {
    std::string sweep_csv = "reference_size,mean_detections,days\n";
    for (const auto& row : report.sweep) {
      sweep_csv += std::to_string(row.reference_size) + "," + fixed(row.mean_detections, 6) + "," +
                   std::to_string(row.days) + "\n";
    }
    io::write_text(dir / "detection_sweep.csv", sweep_csv);
  }
}

}  // namespace suplab
