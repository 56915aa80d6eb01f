#include "suplab/cli.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "suplab/config.hpp"
#include "suplab/detection.hpp"
#include "suplab/dtw.hpp"
#include "suplab/error.hpp"
#include "suplab/eval.hpp"
#include "suplab/io.hpp"
#include "suplab/kernels.hpp"
#include "suplab/omicc.hpp"
#include "suplab/simulator.hpp"

#ifndef SUPLAB_DATA_DIR
#define SUPLAB_DATA_DIR "data"
#endif

namespace suplab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

fs::path default_supro_dir() { return fs::path(SUPLAB_DATA_DIR) / "supro"; }

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, const std::optional<std::uint64_t>& config) {
  if (flag) return *flag;
  if (config) return *config;
  if (const char* env = std::getenv("SUPLAB_SEED"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    errno = 0;
    const unsigned long long value = std::strtoull(env, &end, 10);
    if (errno != 0 || end == env || *end != '\0' || env[0] == '-') {
      fail(ErrorKind::InvalidParameter, std::string("SUPLAB_SEED is not an unsigned integer: '") + env + "'");
    }
    return value;
  }
  return kDefaultSeed;
}

// Overridable parameters shared by several subcommands. Unset values keep the
// library defaults.
struct Overrides {
  std::optional<double> alpha_sigma, beta_sigma, gamma;
  std::optional<std::size_t> smoother_window;
  std::optional<double> delta;
  std::optional<std::size_t> half_window, clusters, neighbors;
  std::optional<int> zeta;

  void add_tuning(CLI::App* app) {
    app->add_option("--alpha-sigma", alpha_sigma, "per-sample power variation sigma");
    app->add_option("--beta-sigma", beta_sigma, "per-cycle duration variation sigma");
    app->add_option("--gamma", gamma, "idle noise ceiling in watts");
    app->add_option("--smoother-window", smoother_window, "odd median smoother window");
  }
  void add_omicc(CLI::App* app) {
    app->add_option("--half-window", half_window, "moving step test half-width (samples)");
    app->add_option("--zeta", zeta, "thick edge threshold multiplier");
    app->add_option("--clusters", clusters, "k-means clusters");
    app->add_option("--neighbors", neighbors, "KNN neighbours");
  }

  SimTuning tuning(SimTuning base) const {
    if (alpha_sigma) base.alpha_sigma = *alpha_sigma;
    if (beta_sigma) base.beta_sigma = *beta_sigma;
    if (gamma) base.gamma = *gamma;
    if (smoother_window) base.smoother_window = *smoother_window;
    base.validate();
    return base;
  }
  OmiccParams omicc() const {
    OmiccParams p;
    if (half_window) p.half_window = *half_window;
    if (zeta) p.zeta = *zeta;
    if (smoother_window) p.smoother_window = *smoother_window;
    if (clusters) p.clusters = *clusters;
    if (neighbors) p.neighbors = *neighbors;
    p.validate();
    return p;
  }
  DetectionConfig detection() const {
    DetectionConfig cfg;
    if (delta) cfg.delta = *delta;
    cfg.validate();
    return cfg;
  }
  std::size_t window() const {
    const std::size_t w = smoother_window.value_or(5);
    if (w == 0 || w % 2 == 0) fail(ErrorKind::InvalidParameter, "smoother window must be odd");
    return w;
  }
};

json tuning_json(const SimTuning& t) {
  return {{"alphaSigma", t.alpha_sigma}, {"betaSigma", t.beta_sigma}, {"gamma", t.gamma},
          {"smootherWindow", t.smoother_window}};
}

json omicc_json(const OmiccParams& p) {
  return {{"halfWindow", p.half_window}, {"zeta", p.zeta}, {"smootherWindow", p.smoother_window},
          {"clusters", p.clusters}, {"neighbors", p.neighbors}};
}

void echo(std::ostream& err, const std::string& command, json params) {
  params["jobs"] = kernels::worker_threads();
  err << "# suplab " << command << ' ' << params.dump() << '\n';
}

// `train --out stem.csv` writes one file per appliance when the dataset has
// several; readers resolve the same names.
fs::path training_path(const fs::path& base, const std::string& appliance, bool several) {
  if (!several) return base;
  return base.parent_path() / (base.stem().string() + "_" + appliance + base.extension().string());
}

TrainingSet load_training(const fs::path& base, const std::string& appliance) {
  const fs::path specific = training_path(base, appliance, true);
  if (fs::exists(specific)) return read_training_csv(specific, appliance);
  if (fs::exists(base)) return read_training_csv(base, appliance);
  fail(ErrorKind::Io, "no training file for '" + appliance + "': tried " + specific.string() + " and " +
                          base.string());
}

bool holds_supros(const fs::path& dir) {
  if (!fs::is_directory(dir)) fail(ErrorKind::Io, "not a directory: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".json") return true;
  }
  return false;
}

// A refs directory holds either SUPRO JSON files (canonical patterns are
// built from them) or `<appliance>_<mode>.csv` pattern files.
std::map<std::string, ModeReferenceSet> load_refs(const fs::path& dir, const std::set<std::string>& appliances,
                                                  std::size_t window) {
  std::map<std::string, ModeReferenceSet> refs;
  if (holds_supros(dir)) {
    const auto library = SuproLibrary::load_directory(dir);
    for (const auto& a : appliances) refs.emplace(a, ModeReferenceSet::from_library(library, a, window));
  } else {
    for (const auto& a : appliances) refs.emplace(a, ModeReferenceSet::load_directory(dir, a));
  }
  return refs;
}

std::set<std::string> appliances_of(const DaySource& source) {
  std::set<std::string> names;
  for (std::size_t i = 0; i < source.size(); ++i) names.insert(source.label(i).appliance);
  return names;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> sizes;
  for (const auto& field : io::split_csv_line(text)) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(field.c_str(), &end, 10);
    if (field.empty() || *end != '\0' || field[0] == '-' || v == 0) {
      fail(ErrorKind::InvalidParameter, "reference sizes must be positive integers, got '" + field + "'");
    }
    sizes.push_back(static_cast<std::size_t>(v));
  }
  if (sizes.empty()) fail(ErrorKind::InvalidParameter, "no reference sizes given");
  return sizes;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  fs::path supro_dir = default_supro_dir();
  std::optional<fs::path> config;
  std::size_t days = 0;
  std::optional<std::string> intensity;
  std::optional<std::uint64_t> seed;
  fs::path out;
  Overrides ov;
};

int do_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  SimulationConfig config = a.config ? load_simulation_config(*a.config) : SimulationConfig{};
  const SimTuning tuning = a.ov.tuning(config.tuning);
  const Intensity intensity =
      a.intensity ? parse_intensity(*a.intensity) : config.intensity.value_or(Intensity::Medium);
  if (a.days < 1) fail(ErrorKind::InvalidParameter, "--days must be >= 1");

  DatasetSpec spec;
  spec.library = SuproLibrary::load_directory(a.supro_dir);
  spec.appliances = resolve_appliances(config, spec.library, intensity);
  spec.days = a.days;
  spec.tuning = tuning;
  spec.seed = resolve_seed(a.seed, config.seed);

  json apps = json::array();
  for (const auto& s : spec.appliances) {
    apps.push_back({{"name", s.name}, {"intensity", std::string(to_string(s.intensity))},
                    {"turnOnPdf", s.turn_on.pdf()}});
  }
  echo(err, "simulate",
       {{"suproDir", a.supro_dir.string()}, {"days", spec.days}, {"seed", spec.seed},
        {"tuning", tuning_json(tuning)}, {"appliances", apps}, {"out", a.out.string()}});

  write_dataset(spec, a.out);
  out << "wrote " << spec.days * spec.appliances.size() << " day files for " << spec.appliances.size()
      << " appliance(s) to " << a.out.string() << '\n';
  return kExitOk;
}

struct DetectArgs {
  fs::path day;
  std::optional<fs::path> ref;
  std::optional<fs::path> supro;
  std::optional<std::size_t> size;
  std::optional<fs::path> trace;
  Overrides ov;
};

int do_detect(const DetectArgs& a, std::ostream& out, std::ostream& err) {
  const DetectionConfig cfg = a.ov.detection();
  ReferencePattern ref;
  if (a.ref) {
    ref.series = io::read_series_csv(*a.ref);
    ref.series.origin = 0;
  } else if (a.supro && a.size) {
    const Supro supro = parse_supro(io::read_text(*a.supro));
    ref = make_reference_pattern(supro, *a.size, a.ov.window());
  } else {
    fail(ErrorKind::InvalidParameter, "detect needs --ref, or --supro together with --size");
  }
  const PowerSeries day = io::read_series_csv(a.day);
  echo(err, "detect",
       {{"day", a.day.string()}, {"referenceSize", ref.size()}, {"delta", cfg.delta},
        {"trace", a.trace ? a.trace->string() : ""}});

  DetectionConfig run_cfg = cfg;
  run_cfg.keep_trace = a.trace.has_value();
  const auto result = detect(ref, day, run_cfg);
  for (auto t : result.turn_ons) out << t << '\n';
  if (a.trace) {
    std::string csv = "t,X,Xbar\n";
    char line[96];
    for (std::size_t t = 0; t < result.trace->x.size(); ++t) {
      std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", t + day.origin, result.trace->x[t],
                    result.trace->residue[t]);
      csv += line;
    }
    io::write_text(*a.trace, csv);
  }
  return kExitOk;
}

struct TrainArgs {
  std::vector<fs::path> datasets;
  fs::path out;
  std::optional<std::string> appliance;
  Overrides ov;
};

int do_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  const OmiccParams params = a.ov.omicc();
  std::vector<std::unique_ptr<DatasetDirectory>> dirs;
  CombinedSource all;
  for (const auto& d : a.datasets) {
    dirs.push_back(std::make_unique<DatasetDirectory>(d));
    all.add(*dirs.back());
  }
  std::set<std::string> names = appliances_of(all);
  if (a.appliance) {
    if (names.count(*a.appliance) == 0) {
      fail(ErrorKind::InvalidInput, "no events of appliance '" + *a.appliance + "' in the dataset");
    }
    names = {*a.appliance};
  }
  json ds = json::array();
  for (const auto& d : a.datasets) ds.push_back(d.string());
  echo(err, "train", {{"datasets", ds}, {"out", a.out.string()}, {"omicc", omicc_json(params)}});

  const bool several = names.size() > 1;
  out << "appliance,observations,skipped,file\n";
  for (const auto& name : names) {
    const auto built = build_training_set(all, name, params);
    const fs::path path = training_path(a.out, name, several);
    write_training_csv(path, built.training);
    out << name << ',' << built.training.observations.size() << ',' << built.skipped << ',' << path.string()
        << '\n';
  }
  return kExitOk;
}

struct ClassifyArgs {
  std::string method;
  fs::path day;
  std::size_t t_on = 0;
  std::optional<fs::path> refs;
  std::optional<fs::path> train;
  std::optional<std::string> appliance;
  Overrides ov;
};

std::string infer_appliance(const ClassifyArgs& a) {
  if (a.appliance) return *a.appliance;
  if (a.method == "omicc") return {};
  if (holds_supros(*a.refs)) {
    const auto names = SuproLibrary::load_directory(*a.refs).appliances();
    if (names.size() == 1) return names.front();
  } else {
    std::set<std::string> names;
    for (const auto& entry : fs::directory_iterator(*a.refs)) {
      const std::string stem = entry.path().stem().string();
      const auto cut = stem.rfind('_');
      if (entry.path().extension() == ".csv" && cut != std::string::npos) names.insert(stem.substr(0, cut));
    }
    if (names.size() == 1) return *names.begin();
  }
  fail(ErrorKind::InvalidParameter, "--appliance is required when the refs directory covers several appliances");
}

int do_classify(ClassifyArgs a, std::ostream& out, std::ostream& err) {
  if (a.method == "dtw" && !a.refs) a.refs = default_supro_dir();
  if (a.method == "omicc" && !a.train) fail(ErrorKind::InvalidParameter, "--method omicc needs --train");
  const OmiccParams params = a.ov.omicc();
  const std::string appliance = infer_appliance(a);
  const PowerSeries day = io::read_series_csv(a.day);

  if (a.method == "dtw") {
    echo(err, "classify", {{"method", "dtw"}, {"day", a.day.string()}, {"tOn", a.t_on},
                           {"refs", a.refs->string()}, {"appliance", appliance}});
    const auto refs = load_refs(*a.refs, {appliance}, a.ov.window());
    const auto result = classify_dtw(day, a.t_on, refs.at(appliance));
    char line[96];
    for (auto m : kModes) {
      std::snprintf(line, sizeof line, "%s,%.17g\n", std::string(to_string(m)).c_str(),
                    result.distances[index_of(m)]);
      out << line;
    }
    out << "chosen," << to_string(result.chosen_mode) << '\n';
    return kExitOk;
  }

  echo(err, "classify", {{"method", "omicc"}, {"day", a.day.string()}, {"tOn", a.t_on},
                         {"train", a.train->string()}, {"omicc", omicc_json(params)}});
  const TrainingSet training =
      appliance.empty() ? read_training_csv(*a.train) : load_training(*a.train, appliance);
  const FeatureVector features = extract_features(day, a.t_on, params);
  const OperationMode mode = omicc_classify(day, a.t_on, training, params);
  char line[64];
  out << "features";
  for (double x : features.values) {
    std::snprintf(line, sizeof line, ",%.17g", x);
    out << line;
  }
  out << "\nchosen," << to_string(mode) << '\n';
  return kExitOk;
}

struct EvaluateArgs {
  std::vector<fs::path> datasets;
  fs::path refs = default_supro_dir();
  std::optional<fs::path> train;
  double train_frac = 0.67;
  std::optional<fs::path> report;
  std::optional<fs::path> plot_data;
  Overrides ov;
};

int do_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  EvalParams params;
  params.omicc = a.ov.omicc();
  params.smoother_window = a.ov.window();
  if (!a.train && !(a.train_frac > 0.0 && a.train_frac < 1.0)) {
    fail(ErrorKind::InvalidParameter, "--train-frac must lie in (0, 1)");
  }

  std::vector<std::unique_ptr<DatasetDirectory>> dirs;
  std::vector<const DaySource*> sources;
  CombinedSource all;
  for (const auto& d : a.datasets) {
    dirs.push_back(std::make_unique<DatasetDirectory>(d));
    sources.push_back(dirs.back().get());
    all.add(*dirs.back());
  }
  const auto names = appliances_of(all);

  json ds = json::array();
  for (const auto& d : a.datasets) ds.push_back(d.string());
  json echoed = {{"datasets", ds}, {"refs", a.refs.string()}, {"omicc", omicc_json(params.omicc)},
                 {"smootherWindow", params.smoother_window}};
  if (a.train) {
    echoed["train"] = a.train->string();
  } else {
    echoed["trainFrac"] = a.train_frac;
  }
  echo(err, "evaluate", echoed);

  const auto refs = load_refs(a.refs, names, params.smoother_window);
  ExperimentReport report;
  if (a.train) {
    std::map<std::string, TrainingSet> training;
    for (const auto& name : names) training.emplace(name, load_training(*a.train, name));
    report = compare_methods(all, refs, training, params);
  } else {
    auto evaluation = evaluate_split(sources, refs, a.train_frac, params);
    if (evaluation.training_skipped > 0) {
      err << "# " << evaluation.training_skipped << " training event(s) skipped (no usable cycles)\n";
    }
    report = std::move(evaluation.report);
  }

  out << to_text(report);
  if (a.report) io::write_text(*a.report, to_json(report).dump(2) + "\n");
  if (a.plot_data) write_plot_data(report, *a.plot_data);
  return kExitOk;
}

struct SweepArgs {
  fs::path supro_dir = default_supro_dir();
  std::optional<fs::path> config;
  std::string appliance;
  std::string sizes = "50,100,200,400,600,800,1000,1100,1400,2000,3000,4000";
  std::size_t days = 50;
  std::optional<std::string> intensity;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> report;
  std::optional<fs::path> plot_data;
  Overrides ov;
};

int do_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  SimulationConfig config = a.config ? load_simulation_config(*a.config) : SimulationConfig{};
  const Intensity fallback =
      a.intensity ? parse_intensity(*a.intensity) : config.intensity.value_or(Intensity::Medium);
  SweepSetup setup;
  setup.library = SuproLibrary::load_directory(a.supro_dir);
  setup.tuning = a.ov.tuning(config.tuning);
  setup.detection = a.ov.detection();
  setup.smoother_window = setup.tuning.smoother_window;
  bool found = false;
  for (const auto& s : resolve_appliances(config, setup.library, fallback)) {
    if (s.name == a.appliance) {
      setup.appliance = s;
      found = true;
    }
  }
  if (!found) {
    if (setup.library.modes(a.appliance).empty()) {
      fail(ErrorKind::InvalidInput, "the SUPRO library has no appliance '" + a.appliance + "'");
    }
    setup.appliance = {a.appliance, TurnOnDistribution::uniform(), fallback};
  }
  if (a.intensity) setup.appliance.intensity = fallback;
  const auto sizes = parse_sizes(a.sizes);
  const std::uint64_t seed = resolve_seed(a.seed, config.seed);

  echo(err, "sweep",
       {{"suproDir", a.supro_dir.string()}, {"appliance", a.appliance}, {"sizes", sizes}, {"days", a.days},
        {"intensity", std::string(to_string(setup.appliance.intensity))}, {"seed", seed},
        {"delta", setup.detection.delta}, {"tuning", tuning_json(setup.tuning)}});

  ExperimentReport report;
  report.sweep = detection_sweep(setup, sizes, a.days, seed);
  out << "n,mean_detections,days\n";
  char line[96];
  for (const auto& row : report.sweep) {
    std::snprintf(line, sizeof line, "%zu,%.4f,%zu\n", row.reference_size, row.mean_detections, row.days);
    out << line;
  }
  if (a.report) io::write_text(*a.report, to_json(report).dump(2) + "\n");
  if (a.plot_data) write_plot_data(report, *a.plot_data);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"suplab: appliance single-usage-profile simulation, detection and mode classification"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("--jobs", jobs, "worker threads (0 = all available cores)")->check(CLI::NonNegativeNumber);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate a labelled synthetic dataset");
  simulate->add_option("--supro-dir", sim.supro_dir, "directory of SUPRO JSON files")->check(CLI::ExistingDirectory);
  simulate->add_option("--config", sim.config, "simulation config JSON")->check(CLI::ExistingFile);
  simulate->add_option("--days", sim.days, "days per appliance")->required();
  simulate->add_option("--intensity", sim.intensity, "household intensity: low, medium or high");
  simulate->add_option("--seed", sim.seed, "random seed (default: config, then SUPLAB_SEED, then 42)");
  simulate->add_option("--out", sim.out, "output directory")->required();
  sim.ov.add_tuning(simulate);

  DetectArgs det;
  auto* detect_cmd = app.add_subcommand("detect", "report turn-on times of a reference pattern in a day");
  detect_cmd->add_option("--day", det.day, "day CSV (t,power)")->required()->check(CLI::ExistingFile);
  auto* ref_opt = detect_cmd->add_option("--ref", det.ref, "reference pattern CSV")->check(CLI::ExistingFile);
  auto* supro_opt = detect_cmd->add_option("--supro", det.supro, "build the reference from this SUPRO JSON")
                        ->check(CLI::ExistingFile)
                        ->excludes(ref_opt);
  detect_cmd->add_option("--size", det.size, "reference size n when using --supro")->needs(supro_opt);
  detect_cmd->add_option("--delta", det.ov.delta, "low amplitude canceling coefficient in (0,1)");
  detect_cmd->add_option("--smoother-window", det.ov.smoother_window, "smoother window for --supro references");
  detect_cmd->add_option("--trace", det.trace, "write t,X,Xbar CSV here");

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "build OMICC training sets from labelled datasets");
  train->add_option("--dataset", tr.datasets, "dataset directory (repeatable)")->required()->check(CLI::ExistingDirectory);
  train->add_option("--out", tr.out, "training CSV; per-appliance files get an _<appliance> suffix")->required();
  train->add_option("--appliance", tr.appliance, "only this appliance");
  tr.ov.add_omicc(train);
  train->add_option("--smoother-window", tr.ov.smoother_window, "median smoother window");

  ClassifyArgs cl;
  auto* classify = app.add_subcommand("classify", "classify the operation mode of one SUP");
  classify->add_option("--method", cl.method, "dtw or omicc")->required()->check(CLI::IsMember({"dtw", "omicc"}));
  classify->add_option("--day", cl.day, "day CSV")->required()->check(CLI::ExistingFile);
  classify->add_option("--t-on", cl.t_on, "turn-on sample index")->required();
  classify->add_option("--refs", cl.refs, "reference directory (SUPRO JSONs or pattern CSVs; default: bundled SUPROs)")
      ->check(CLI::ExistingDirectory);
  classify->add_option("--train", cl.train, "training CSV");
  classify->add_option("--appliance", cl.appliance, "appliance name");
  cl.ov.add_omicc(classify);
  classify->add_option("--smoother-window", cl.ov.smoother_window, "median smoother window");

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "compare DTW and OMICC on labelled datasets");
  evaluate->add_option("--dataset", ev.datasets, "dataset directory (repeatable)")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--refs", ev.refs, "reference directory (SUPRO JSONs or pattern CSVs)")
      ->check(CLI::ExistingDirectory);
  evaluate->add_option("--train", ev.train, "pre-built training CSV; all events are then test events");
  evaluate->add_option("--train-frac", ev.train_frac, "fraction of each dataset used for training");
  evaluate->add_option("--report", ev.report, "write the JSON report here");
  evaluate->add_option("--plot-data", ev.plot_data, "write per-figure CSVs into this directory");
  ev.ov.add_omicc(evaluate);
  evaluate->add_option("--smoother-window", ev.ov.smoother_window, "median smoother window");

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "detected-SUP count as a function of reference size");
  sweep->add_option("--supro-dir", sw.supro_dir, "directory of SUPRO JSON files")->check(CLI::ExistingDirectory);
  sweep->add_option("--config", sw.config, "simulation config JSON")->check(CLI::ExistingFile);
  sweep->add_option("--appliance", sw.appliance, "appliance name")->required();
  sweep->add_option("--sizes", sw.sizes, "comma-separated reference sizes");
  sweep->add_option("--days", sw.days, "seeded days per size");
  sweep->add_option("--intensity", sw.intensity, "household intensity");
  sweep->add_option("--seed", sw.seed, "random seed");
  sweep->add_option("--delta", sw.ov.delta, "low amplitude canceling coefficient in (0,1)");
  sweep->add_option("--report", sw.report, "write the JSON report here");
  sweep->add_option("--plot-data", sw.plot_data, "write detection_sweep.csv into this directory");
  sw.ov.add_tuning(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    kernels::set_worker_threads(jobs);
    if (simulate->parsed()) return do_simulate(sim, out, err);
    if (detect_cmd->parsed()) return do_detect(det, out, err);
    if (train->parsed()) return do_train(tr, out, err);
    if (classify->parsed()) return do_classify(cl, out, err);
    if (evaluate->parsed()) return do_evaluate(ev, out, err);
    if (sweep->parsed()) return do_sweep(sw, out, err);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error [io]: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace suplab::cli
