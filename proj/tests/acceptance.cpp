// Acceptance run: one PASS/FAIL line per criterion. Criterion 8 is reported
// but does not affect the exit status.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "suplab/cli.hpp"
#include "suplab/config.hpp"
#include "suplab/detection.hpp"
#include "suplab/error.hpp"
#include "suplab/eval.hpp"
#include "suplab/io.hpp"

using namespace suplab;
namespace fs = std::filesystem;

namespace {

const fs::path kData = SUPLAB_DATA_DIR;
constexpr std::uint64_t kSeed = 42;

struct Line {
  bool pass;
  std::string detail;
};

int g_failures = 0;

void report(int id, const char* name, const Line& line, bool gated = true) {
  std::printf("[%s] %d %s: %s%s\n", line.pass ? "PASS" : "FAIL", id, name, line.detail.c_str(),
              gated ? "" : " (soft, not gated)");
  std::fflush(stdout);
  if (gated && !line.pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol + 1e-12; }

// ---------------------------------------------------------------------------

ExperimentReport g_headline;
bool g_headline_ready = false;

Line headline() {
  const auto start = std::chrono::steady_clock::now();
  const auto library = SuproLibrary::load_directory(kData / "supro");
  const auto config = load_simulation_config(kData / "config.json");

  std::vector<SimulatedDataset> datasets;
  for (auto intensity : kIntensities) {
    DatasetSpec spec;
    spec.library = library;
    spec.appliances = resolve_appliances(config, library, intensity);
    spec.days = 100;
    spec.tuning = config.tuning;
    spec.seed = kSeed;
    datasets.emplace_back(std::move(spec));
  }
  std::vector<const DaySource*> sources;
  for (const auto& d : datasets) sources.push_back(&d);

  std::map<std::string, ModeReferenceSet> refs;
  for (const auto& name : library.appliances()) refs.emplace(name, ModeReferenceSet::from_library(library, name));

  const auto eval = evaluate_split(sources, refs, 0.67, EvalParams{});
  g_headline = eval.report;
  g_headline_ready = true;
  const double elapsed = seconds_since(start);

  const auto dtw = metrics(eval.report.dtw.overall).macro;
  const auto omicc = metrics(eval.report.omicc.overall).macro;
  std::size_t train = 0;
  for (const auto& [name, t] : eval.training) train += t.observations.size();
  const bool pass = within(dtw.precision, 0.81, 0.08) && within(dtw.recall, 0.81, 0.08) &&
                    within(omicc.precision, 0.84, 0.08) && within(omicc.recall, 0.85, 0.08) &&
                    omicc.f1 >= dtw.f1 && elapsed < 300.0;
  return {pass, fmt("DTW P/R/F1 %.3f/%.3f/%.3f, OMICC P/R/F1 %.3f/%.3f/%.3f; %zu train obs (%zu skipped), "
                    "%zu test events (errors dtw %zu, omicc %zu); %.1f s",
                    dtw.precision, dtw.recall, dtw.f1, omicc.precision, omicc.recall, omicc.f1, train,
                    eval.training_skipped, eval.report.events, eval.report.dtw.errors, eval.report.omicc.errors,
                    elapsed)};
}

// ---------------------------------------------------------------------------

SweepSetup sweep_setup(const SuproLibrary& library, const SimulationConfig& config, const std::string& appliance) {
  SweepSetup setup;
  setup.library = library;
  for (const auto& a : resolve_appliances(config, library, config.intensity.value_or(Intensity::Medium))) {
    if (a.name == appliance) setup.appliance = a;
  }
  setup.tuning = config.tuning;
  return setup;
}

Line sweep() {
  const auto start = std::chrono::steady_clock::now();
  const auto library = SuproLibrary::load_directory(kData / "supro");
  const auto config = load_simulation_config(kData / "config.json");
  const auto dryer = sweep_setup(library, config, "dryer");
  const auto dishwasher = sweep_setup(library, config, "dishwasher");

  const auto ref_mode = sweep_reference_mode(dryer, kSeed);
  const std::size_t ref_length = canonical_ssup(library.get("dryer", ref_mode), dryer.smoother_window).size();
  const std::vector<std::size_t> sizes{600, 800, 1000, ref_length + 50, ref_length + 250};
  const auto rows = detection_sweep(dryer, sizes, 50, kSeed);
  const auto small = detection_sweep(dishwasher, {50}, 50, kSeed);
  const double elapsed = seconds_since(start);

  bool pass = elapsed < 180.0 && small[0].mean_detections > 1.0;
  std::string detail = "dryer ref " + std::string(to_string(ref_mode)) + " (" + std::to_string(ref_length) + " s):";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double want = i < 3 ? 1.0 : 0.0;
    pass = pass && within(rows[i].mean_detections, want, i < 3 ? 0.1 : 0.0);
    detail += fmt(" n=%zu->%.2f", rows[i].reference_size, rows[i].mean_detections);
  }
  detail += fmt("; dishwasher n=50->%.2f; %.1f s", small[0].mean_detections, elapsed);
  return {pass, detail};
}

// ---------------------------------------------------------------------------

Line dtw_oracle() {
  RandomSource rng(kSeed);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> x(static_cast<std::size_t>(rng.uniform_int(1, 6)));
    std::vector<int> y(static_cast<std::size_t>(rng.uniform_int(1, 6)));
    for (auto& v : x) v = static_cast<int>(rng.uniform_int(0, 9));
    for (auto& v : y) v = static_cast<int>(rng.uniform_int(0, 9));
    const std::vector<double> xd(x.begin(), x.end()), yd(y.begin(), y.end());
    if (dtw_distance(xd, yd) != static_cast<double>(oracle::dtw_min_path_cost(x, y))) ++mismatches;
  }
  return {mismatches == 0, fmt("%zu/1000 pairs differ from the exhaustive path minimum", mismatches)};
}

// ---------------------------------------------------------------------------

// Disjoint, covering, and each value no farther from its own centroid than
// from any other; centroids are taken as exact rationals sum/count.
bool partition_holds(const std::vector<int>& values, const ClusterModel& model) {
  if (model.assignment.size() != values.size()) return false;
  std::vector<std::int64_t> sums(model.k, 0), counts(model.k, 0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (model.assignment[i] >= model.k) return false;
    sums[model.assignment[i]] += values[i];
    ++counts[model.assignment[i]];
  }
  for (std::size_t c = 0; c < model.k; ++c) {
    if (counts[c] == 0) return false;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto a = model.assignment[i];
    const std::int64_t own = std::llabs(values[i] * counts[a] - sums[a]);
    for (std::size_t c = 0; c < model.k; ++c) {
      const std::int64_t other = std::llabs(values[i] * counts[c] - sums[c]);
      if (own * counts[c] > other * counts[a]) return false;
    }
  }
  return true;
}

Line kmeans_oracle() {
  RandomSource rng(kSeed + 1);
  std::size_t suboptimal = 0, broken = 0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<int> values;
    do {
      values.assign(static_cast<std::size_t>(rng.uniform_int(3, 8)), 0);
      for (auto& v : values) v = static_cast<int>(rng.uniform_int(0, 50));
    } while (std::set<int>(values.begin(), values.end()).size() < 3);
    const std::vector<double> as_double(values.begin(), values.end());
    const auto model = cluster_values(as_double, 3);
    if (oracle::wcss_times_840(values, model.assignment, 3) != oracle::optimal_wcss_times_840(values, 3)) {
      ++suboptimal;
    }
    if (!partition_holds(values, model)) ++broken;
  }
  return {suboptimal == 0 && broken == 0,
          fmt("%zu/500 above the exhaustive optimum, %zu/500 violate the partition property", suboptimal, broken)};
}

// ---------------------------------------------------------------------------

Line sampler() {
  const auto config = load_simulation_config(kData / "config.json");
  bool pass = true;
  std::string detail;
  std::uint64_t stream = 0;
  for (const auto& entry : config.appliances) {
    const auto& dist = *entry.turn_on;
    RandomSource rng = RandomSource::derive(kSeed, 0x5A, stream++);
    std::vector<std::size_t> counts(kHoursPerDay, 0);
    for (int i = 0; i < 10000; ++i) ++counts[sample_turn_on(dist, rng) / kSecondsPerHour];
    const double stat = oracle::chi_square(counts, {dist.pdf().begin(), dist.pdf().end()});
    pass = pass && stat < oracle::kChiSquare23At001;
    detail += fmt("%s chi2=%.2f; ", entry.name.c_str(), stat);
  }
  double worst = 0.0;
  for (auto intensity : kIntensities) {
    const auto dist = IntensityDistribution::of(intensity);
    RandomSource rng = RandomSource::derive(kSeed, 0x5B, index_of(intensity));
    std::array<std::size_t, kModeCount> counts{};
    for (int i = 0; i < 10000; ++i) ++counts[index_of(sample_mode(dist, rng))];
    for (auto m : kModes) {
      const double want = m == major_mode(intensity) ? 0.6 : 0.2;
      worst = std::max(worst, std::abs(static_cast<double>(counts[index_of(m)]) / 10000.0 - want));
    }
  }
  pass = pass && worst <= 0.02;
  detail += fmt("critical %.3f at 23 dof; largest mode frequency deviation %.4f", oracle::kChiSquare23At001, worst);
  return {pass, detail};
}

// ---------------------------------------------------------------------------

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "suplab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str()};
}

std::map<std::string, std::string> files_of(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).string()] = io::read_text(entry.path());
  }
  return files;
}

Line determinism() {
  const auto root = fs::temp_directory_path() / "suplab_acceptance_determinism";
  fs::remove_all(root);
  const std::string config = (kData / "config.json").string();
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    const std::string jobs = std::string(run) == "a" ? "1" : "3";
    std::string datasets;
    for (const char* intensity : {"low", "high"}) {
      const auto data = (dir / "data" / intensity).string();
      if (cli({"--jobs", jobs, "simulate", "--config", config, "--days", "4", "--intensity", intensity, "--seed",
               "42", "--out", data})
              .code != 0) {
        return {false, std::string("simulate failed in run ") + run};
      }
    }
    const auto eval = cli({"--jobs", jobs, "evaluate", "--dataset", (dir / "data" / "low").string(), "--dataset",
                           (dir / "data" / "high").string(), "--report", (dir / "report.json").string(),
                           "--plot-data", (dir / "plots").string()});
    if (eval.code != 0) return {false, std::string("evaluate failed in run ") + run};
    io::write_text(dir / "stdout.txt", eval.out);
  }
  const auto a = files_of(root / "a");
  const auto b = files_of(root / "b");
  std::size_t bytes = 0;
  for (const auto& [name, text] : a) bytes += text.size();
  const bool same = a == b;
  fs::remove_all(root);
  return {same, fmt("%zu files, %zu bytes, %s (jobs 1 vs 3)", a.size(), bytes,
                    same ? "byte-identical" : "DIFFERENT")};
}

// ---------------------------------------------------------------------------

struct Property {
  const char* name;
  std::function<bool()> holds;
};

Line properties() {
  const auto library = SuproLibrary::load_directory(kData / "supro");
  RandomSource rng(kSeed + 7);

  std::vector<Property> suite;
  suite.push_back({"constant indicator", [&] {
    for (int t = 0; t < 200; ++t) {
      const double level = std::floor(rng.uniform(0, 5000));
      const PowerSeries s(std::vector<double>(static_cast<std::size_t>(rng.uniform_int(60, 400)), level));
      for (double v : indicator(s, static_cast<std::size_t>(rng.uniform_int(1, 25)))) {
        if (v != 0.0) return false;
      }
    }
    return true;
  }});
  suite.push_back({"thick edges vs zeta", [&] {
    // Above-threshold support shrinks on any indicator; the edge count itself
    // is checked on noise-free appliance indicators.
    for (int t = 0; t < 300; ++t) {
      std::vector<double> ind(static_cast<std::size_t>(rng.uniform_int(1, 80)));
      for (auto& v : ind) v = rng.uniform() < 0.7 ? 0.0 : std::floor(rng.uniform(0, 1000));
      std::vector<bool> before(ind.size(), true);
      for (int zeta = 1; zeta <= 6; ++zeta) {
        std::vector<bool> now(ind.size(), false);
        for (const auto& e : thick_edges(ind, zeta).edges) {
          for (std::size_t i = e.start; i <= e.end; ++i) now[i] = true;
        }
        for (std::size_t i = 0; i < ind.size(); ++i) {
          if (now[i] && !before[i]) return false;
        }
        before = now;
      }
    }
    for (const auto& appliance : library.appliances()) {
      for (auto mode : kModes) {
        auto ssup = canonical_ssup(library.get(appliance, mode), 5);
        ssup.samples.resize(ssup.size() + 600, 0.0);
        const auto ind = indicator(ssup, 20);
        std::size_t previous = ind.size();
        for (int zeta = 1; zeta <= 8; ++zeta) {
          const auto n = thick_edges(ind, zeta).edges.size();
          if (n > previous) return false;
          previous = n;
        }
      }
    }
    return true;
  }});
  std::size_t count_increases = 0, count_steps = 0;
  suite.push_back({"detections vs delta", [&] {
    // Every positive residue sample at a larger delta is positive at all
    // smaller ones, so each run found at the larger delta lies inside a run
    // found at the smaller one. The run count alone is not monotone: merged
    // runs split as the threshold rises. Those increases are tallied for the
    // report only.
    const auto config = load_simulation_config(kData / "config.json");
    for (const auto& appliance : library.appliances()) {
      const auto setup = sweep_setup(library, config, appliance);
      for (std::uint64_t d = 0; d < 6; ++d) {
        RandomSource day_rng = RandomSource::derive(kSeed, 0x77, d);
        const auto day = generate_day(library, appliance, setup.appliance.turn_on,
                                      IntensityDistribution::of(Intensity::Medium), config.tuning, day_rng);
        for (std::size_t n : {50u, 600u, 1000u}) {
          const auto ref = make_reference_pattern(library.get(appliance, day.labels[0].mode), n);
          const auto x = xcorr(ref, day.series);
          std::vector<bool> before(x.size(), true);
          std::size_t previous = SIZE_MAX;
          for (int step = 0; step < 20; ++step) {
            DetectionConfig cfg;
            cfg.delta = 0.60 + 0.02 * step;
            const auto r = residue(x, ref, day.series, cfg);
            for (std::size_t t = 0; t < x.size(); ++t) {
              const bool positive = r.values[t] > 0.0;
              if (positive && !before[t]) return false;
              before[t] = positive;
            }
            const auto count = extract_turn_ons(r.values).size();
            if (previous != SIZE_MAX) {
              ++count_steps;
              count_increases += count > previous;
            }
            previous = count;
          }
        }
      }
    }
    return true;
  }});
  suite.push_back({"smoother range", [&] {
    for (int t = 0; t < 300; ++t) {
      std::vector<double> v(static_cast<std::size_t>(rng.uniform_int(1, 300)));
      for (auto& x : v) x = rng.uniform(0, 5000);
      const std::size_t window = 2 * static_cast<std::size_t>(rng.uniform_int(0, (static_cast<std::int64_t>(v.size()) - 1) / 2)) + 1;
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      for (double x : median_smooth(PowerSeries(v), window).samples) {
        if (x < *lo || x > *hi) return false;
      }
    }
    return true;
  }});
  suite.push_back({"feature linearity", [&] {
    for (int t = 0; t < 300; ++t) {
      CycleSet cycles, doubled;
      std::size_t at = 0;
      const auto n = static_cast<std::size_t>(rng.uniform_int(4, 15));
      for (std::size_t i = 0; i < n; ++i) {
        const auto len = static_cast<std::size_t>(rng.uniform_int(1, 900));
        const double power = std::floor(rng.uniform(20, 5000));
        cycles.push_back({at, at + len, power});
        doubled.push_back({2 * at, 2 * (at + len), power});
        at += len;
      }
      ClusterModel model;
      try {
        model = cluster_cycles(cycles, 3);
      } catch (const Error&) {
        continue;
      }
      const auto a = features(cycles, model), b = features(doubled, model);
      for (std::size_t c = 0; c < a.size(); ++c) {
        if (b.values[c] != 2.0 * a.values[c]) return false;
      }
    }
    return true;
  }});
  suite.push_back({"knn rescaling", [&] {
    for (int t = 0; t < 300; ++t) {
      TrainingSet train;
      const auto n = static_cast<std::size_t>(rng.uniform_int(5, 40));
      for (std::size_t i = 0; i < n; ++i) {
        train.observations.push_back({{{rng.uniform(0, 1e7), rng.uniform(0, 1e7), rng.uniform(0, 1e7)}},
                                      kModes[static_cast<std::size_t>(rng.uniform_int(0, 2))]});
      }
      FeatureVector q{{rng.uniform(0, 1e7), rng.uniform(0, 1e7), rng.uniform(0, 1e7)}};
      const double c = std::exp2(static_cast<double>(rng.uniform_int(-10, 10)));
      const auto k = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n)));
      const auto before = knn_classify(q, train, k);
      for (auto& o : train.observations) {
        for (auto& v : o.features.values) v *= c;
      }
      for (auto& v : q.values) v *= c;
      if (knn_classify(q, train, k) != before) return false;
    }
    return true;
  }});

  bool pass = true;
  std::string detail;
  for (const auto& p : suite) {
    bool ok = false;
    try {
      ok = p.holds();
    } catch (const std::exception&) {
      ok = false;
    }
    pass = pass && ok;
    detail += std::string(detail.empty() ? "" : ", ") + p.name + (ok ? " ok" : " VIOLATED");
  }
  detail += fmt(" (run count rose in %zu of %zu delta steps)", count_increases, count_steps);
  return {pass, detail};
}

// ---------------------------------------------------------------------------

Line per_intensity() {
  if (!g_headline_ready) return {false, "headline run unavailable"};
  std::string detail;
  bool pass = true;
  for (const auto& [name, outcome] : {std::pair<const char*, const MethodOutcome*>{"DTW", &g_headline.dtw},
                                      std::pair<const char*, const MethodOutcome*>{"OMICC", &g_headline.omicc}}) {
    int hits = 0;
    detail += std::string(detail.empty() ? "" : "; ") + name + ":";
    for (auto intensity : kIntensities) {
      const auto m = metrics(outcome->by_intensity[index_of(intensity)]);
      const auto major = index_of(major_mode(intensity));
      bool top = true;
      for (std::size_t k = 0; k < kModeCount; ++k) top = top && m.per_mode[major].f1 >= m.per_mode[k].f1;
      hits += top;
      detail += fmt(" %s F1(L/M/H)=%.2f/%.2f/%.2f", std::string(to_string(intensity)).c_str(), m.per_mode[0].f1,
                    m.per_mode[1].f1, m.per_mode[2].f1);
    }
    detail += fmt(" -> major best in %d/3", hits);
    pass = pass && hits >= 2;
  }
  return {pass, detail};
}

Line guarded(const std::function<Line()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main() {
  report(1, "headline reproduction", guarded(headline));
  report(2, "detection sweep", guarded(sweep));
  report(3, "DTW oracle equivalence", guarded(dtw_oracle));
  report(4, "1-D k-means optimality", guarded(kmeans_oracle));
  report(5, "sampler fidelity", guarded(sampler));
  report(6, "determinism", guarded(determinism));
  report(7, "property suites", guarded(properties));
  report(8, "per-intensity major mode", guarded(per_intensity), false);
  std::printf("%s: %d gated criteria failed\n", g_failures == 0 ? "ACCEPTED" : "REJECTED", g_failures);
  return g_failures == 0 ? 0 : 1;
}
