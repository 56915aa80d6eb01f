#include "suplab/omicc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>

#include "suplab/error.hpp"
#include "suplab/io.hpp"
#include "suplab/kernels.hpp"

namespace suplab {

void OmiccParams::validate() const {
  if (half_window < 1) fail(ErrorKind::InvalidParameter, "indicator half window must be >= 1");
  if (zeta < 1) fail(ErrorKind::InvalidParameter, "zeta must be a positive integer");
  if (smoother_window == 0 || smoother_window % 2 == 0) {
    fail(ErrorKind::InvalidParameter, "smoother window must be a positive odd sample count");
  }
  if (clusters < 1) fail(ErrorKind::InvalidParameter, "cluster count must be >= 1");
  if (neighbors < 1) fail(ErrorKind::InvalidParameter, "neighbour count must be >= 1");
}

PowerSeries tail_series(const PowerSeries& day, std::size_t t_on, std::size_t window) {
  if (t_on >= day.size()) {
    fail(ErrorKind::InvalidInput, "turn-on index " + std::to_string(t_on) + " outside day of " +
                                      std::to_string(day.size()) + " samples");
  }
  const PowerSeries tail = day.slice(t_on, day.size() - t_on);
  if (window > tail.size()) window = tail.size() % 2 == 1 ? tail.size() : tail.size() - 1;
  return median_smooth(tail, window);
}

std::vector<double> indicator(const PowerSeries& tail, std::size_t half_window) {
  if (half_window < 1) fail(ErrorKind::InvalidParameter, "indicator half window must be >= 1");
  if (tail.size() <= 2 * half_window) {
    fail(ErrorKind::InvalidInput, "indicator needs more than " + std::to_string(2 * half_window) +
                                      " samples, got " + std::to_string(tail.size()));
  }
  std::vector<double> out(tail.size());
  kernels::parallel::moving_step(tail.view(), half_window, out);
  return out;
}

EdgeSet thick_edges(std::span<const double> indicator_values, int zeta) {
  if (indicator_values.empty()) fail(ErrorKind::InvalidInput, "thick_edges of an empty indicator");
  EdgeSet out;
  out.threshold = static_cast<double>(zeta) * std_dev(indicator_values);
  std::size_t t = 0;
  while (t < indicator_values.size()) {
    if (!(indicator_values[t] > out.threshold)) {
      ++t;
      continue;
    }
    const std::size_t start = t;
    while (t < indicator_values.size() && indicator_values[t] > out.threshold) ++t;
    out.edges.push_back({start, t - 1});
  }
  return out;
}

std::vector<std::size_t> thin_edges(std::span<const ThickEdge> edges) {
  std::vector<std::size_t> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back((e.start + e.end) / 2);
  return out;
}

CycleSet extract_cycles(const PowerSeries& tail, std::span<const std::size_t> exact_edges) {
  if (exact_edges.size() < 2) {
    fail(ErrorKind::NoCycles, "a cycle needs two exact edges, got " + std::to_string(exact_edges.size()));
  }
  CycleSet cycles;
  cycles.reserve(exact_edges.size() - 1);
  for (std::size_t i = 0; i + 1 < exact_edges.size(); ++i) {
    const std::size_t start = exact_edges[i];
    const std::size_t end = exact_edges[i + 1];
    if (end <= start || end >= tail.size()) {
      fail(ErrorKind::InvalidInput, "exact edges must be strictly increasing and inside the tail");
    }
    const auto span = tail.view().subspan(start, end - start + 1);
    cycles.push_back({start, end, median(span)});
  }
  return cycles;
}

namespace {

// Optimal contiguous partition of sorted values into k groups by dynamic
// programming; in one dimension every optimal k-means clustering is contiguous
// in sorted order. Returns the first index of each group.
std::vector<std::size_t> optimal_sorted_partition(const std::vector<double>& sorted, std::size_t k) {
  const std::size_t n = sorted.size();
  // Shift by the mean to keep the prefix-sum cost formula well conditioned.
  const double shift = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = sorted[i] - shift;
    s1[i + 1] = s1[i] + v;
    s2[i + 1] = s2[i] + v * v;
  }
  auto cost = [&](std::size_t first, std::size_t last) {  // [first, last)
    const double len = static_cast<double>(last - first);
    const double sum = s1[last] - s1[first];
    return std::max(0.0, (s2[last] - s2[first]) - sum * sum / len);
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  // best[c][j]: optimal cost of the first j values in c groups.
  std::vector<std::vector<double>> best(k + 1, std::vector<double>(n + 1, inf));
  std::vector<std::vector<std::size_t>> split(k + 1, std::vector<std::size_t>(n + 1, 0));
  best[0][0] = 0.0;
  for (std::size_t c = 1; c <= k; ++c) {
    for (std::size_t j = c; j <= n; ++j) {
      for (std::size_t i = c - 1; i < j; ++i) {
        if (best[c - 1][i] == inf) continue;
        const double candidate = best[c - 1][i] + cost(i, j);
        if (candidate < best[c][j]) {
          best[c][j] = candidate;
          split[c][j] = i;
        }
      }
    }
  }
  std::vector<std::size_t> starts(k);
  std::size_t j = n;
  for (std::size_t c = k; c >= 1; --c) {
    starts[c - 1] = split[c][j];
    j = split[c][j];
  }
  return starts;
}

constexpr int kMaxLloydIterations = 100;
constexpr double kCentroidTolerance = 1e-6;

}  // namespace

ClusterModel cluster_values(std::span<const double> values, std::size_t k) {
  if (k < 1) fail(ErrorKind::InvalidParameter, "cluster count must be >= 1");
  if (values.size() < k) {
    fail(ErrorKind::DegenerateInput, "k-means needs at least " + std::to_string(k) + " observations, got " +
                                         std::to_string(values.size()));
  }
  const std::set<double> distinct(values.begin(), values.end());
  if (distinct.size() < k) {
    fail(ErrorKind::DegenerateInput, "only " + std::to_string(distinct.size()) +
                                         " distinct values for " + std::to_string(k) + " clusters");
  }

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto starts = optimal_sorted_partition(sorted, k);

  ClusterModel model;
  model.k = k;
  model.centroids.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t first = starts[c];
    const std::size_t last = c + 1 < k ? starts[c + 1] : sorted.size();
    double sum = 0.0;
    for (std::size_t i = first; i < last; ++i) sum += sorted[i];
    model.centroids[c] = sum / static_cast<double>(last - first);
  }

  // Lloyd refinement. Starting from the optimum it converges immediately, but
  // it also establishes the nearest-centroid assignment on the original order.
  model.assignment.assign(values.size(), 0);
  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::size_t nearest = 0;
      for (std::size_t c = 1; c < k; ++c) {
        if (std::abs(values[i] - model.centroids[c]) < std::abs(values[i] - model.centroids[nearest])) {
          nearest = c;
        }
      }
      model.assignment[i] = nearest;
    }
    std::vector<double> sums(k, 0.0);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      sums[model.assignment[i]] += values[i];
      ++counts[model.assignment[i]];
    }
    double movement = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      const double updated = sums[c] / static_cast<double>(counts[c]);
      movement = std::max(movement, std::abs(updated - model.centroids[c]));
      model.centroids[c] = updated;
    }
    if (movement < kCentroidTolerance) break;
  }
  return model;
}

ClusterModel cluster_cycles(const CycleSet& cycles, std::size_t k) {
  if (cycles.empty()) fail(ErrorKind::DegenerateInput, "no cycles to cluster");
  std::vector<double> powers;
  powers.reserve(cycles.size() - 1);
  for (std::size_t i = 0; i + 1 < cycles.size(); ++i) powers.push_back(cycles[i].power);
  return cluster_values(powers, k);
}

FeatureVector features(const CycleSet& cycles, const ClusterModel& model) {
  std::vector<double> durations(model.k, 0.0);
  for (std::size_t i = 0; i < model.assignment.size() && i < cycles.size(); ++i) {
    durations[model.assignment[i]] += static_cast<double>(cycles[i].duration());
  }
  FeatureVector fv;
  fv.values.resize(model.k);
  for (std::size_t c = 0; c < model.k; ++c) fv.values[c] = model.centroids[c] * durations[c];
  return fv;
}

OperationMode knn_classify(const FeatureVector& query, const TrainingSet& training, std::size_t neighbors) {
  const auto& obs = training.observations;
  if (obs.empty()) fail(ErrorKind::InvalidState, "KNN training set is empty");
  if (neighbors < 1 || neighbors > obs.size()) {
    fail(ErrorKind::InvalidParameter, "neighbour count " + std::to_string(neighbors) +
                                          " must lie in [1, " + std::to_string(obs.size()) + "]");
  }
  const std::size_t dims = query.size();
  std::vector<double> mean(dims, 0.0), scale(dims, 0.0);
  for (const auto& o : obs) {
    if (o.features.size() != dims) fail(ErrorKind::InvalidInput, "feature dimension mismatch");
    for (std::size_t d = 0; d < dims; ++d) mean[d] += o.features.values[d];
  }
  for (auto& m : mean) m /= static_cast<double>(obs.size());
  for (const auto& o : obs) {
    for (std::size_t d = 0; d < dims; ++d) {
      const double diff = o.features.values[d] - mean[d];
      scale[d] += diff * diff;
    }
  }
  for (auto& s : scale) {
    s = std::sqrt(s / static_cast<double>(obs.size()));
    if (!(s > 0.0)) s = 1.0;
  }
  auto standardized = [&](const FeatureVector& fv, std::size_t d) { return (fv.values[d] - mean[d]) / scale[d]; };

  std::vector<std::pair<double, std::size_t>> ranked(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    double sq = 0.0;
    for (std::size_t d = 0; d < dims; ++d) {
      const double diff = standardized(obs[i].features, d) - standardized(query, d);
      sq += diff * diff;
    }
    ranked[i] = {std::sqrt(sq), i};
  }
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(neighbors), ranked.end());

  std::array<std::size_t, kModeCount> votes{};
  std::array<double, kModeCount> distance_sum{};
  for (std::size_t n = 0; n < neighbors; ++n) {
    const auto mode = index_of(obs[ranked[n].second].mode);
    ++votes[mode];
    distance_sum[mode] += ranked[n].first;
  }
  std::size_t best = 0;
  for (std::size_t m = 1; m < kModeCount; ++m) {
    if (votes[m] > votes[best] || (votes[m] == votes[best] && votes[m] > 0 && distance_sum[m] < distance_sum[best])) {
      best = m;
    }
  }
  return kModes[best];
}

std::vector<std::size_t> cycle_boundaries(const PowerSeries& tail, const OmiccParams& params) {
  const auto ind = indicator(tail, params.half_window);
  const auto thick = thick_edges(ind, params.zeta);
  const auto exact = thin_edges(thick.edges);
  if (exact.empty()) fail(ErrorKind::NoCycles, "no edges found after the turn-on");
  std::vector<std::size_t> bounds;
  bounds.reserve(exact.size() + 2);
  bounds.push_back(0);
  for (auto e : exact) {
    if (e > bounds.back()) bounds.push_back(e);
  }
  if (tail.size() - 1 > bounds.back()) bounds.push_back(tail.size() - 1);
  return bounds;
}

namespace {

template <typename F>
auto stage(const char* name, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  }
}

}  // namespace

FeatureVector extract_features(const PowerSeries& day, std::size_t t_on, const OmiccParams& params) {
  const auto tail = stage("tail", [&] { return tail_series(day, t_on, params.smoother_window); });
  const auto bounds = stage("edges", [&] { return cycle_boundaries(tail, params); });
  const auto cycles = stage("cycles", [&] { return extract_cycles(tail, bounds); });
  const auto model = stage("clustering", [&] { return cluster_cycles(cycles, params.clusters); });
  return features(cycles, model);
}

OperationMode omicc_classify(const PowerSeries& day, std::size_t t_on, const TrainingSet& training,
                             const OmiccParams& params) {
  const auto fv = extract_features(day, t_on, params);
  return stage("knn", [&] { return knn_classify(fv, training, params.neighbors); });
}

TrainingBuild build_training_set(const DaySource& source, std::string_view appliance, const OmiccParams& params) {
  params.validate();
  std::vector<std::size_t> events;
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source.label(i).appliance == appliance) events.push_back(i);
  }
  std::vector<std::optional<Observation>> slots(events.size());
  std::exception_ptr fatal;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(events.size()); ++e) {
    const auto idx = events[static_cast<std::size_t>(e)];
    try {
      const auto& label = source.label(idx);
      const auto day = source.series(idx);
      slots[static_cast<std::size_t>(e)] = Observation{extract_features(day, label.t_on, params), label.mode};
    } catch (const Error& err) {
      if (err.kind() == ErrorKind::Io || err.kind() == ErrorKind::Parse) {
#pragma omp critical
        if (!fatal) fatal = std::current_exception();
      }
    } catch (...) {
#pragma omp critical
      if (!fatal) fatal = std::current_exception();
    }
  }
  if (fatal) std::rethrow_exception(fatal);

  TrainingBuild build;
  build.training.appliance = std::string(appliance);
  for (auto& slot : slots) {
    if (slot) {
      build.training.observations.push_back(std::move(*slot));
    } else {
      ++build.skipped;
    }
  }
  if (build.training.observations.empty()) {
    fail(ErrorKind::InvalidState, "no usable training observations for '" + std::string(appliance) + "' (" +
                                      std::to_string(build.skipped) + " events failed)");
  }
  return build;
}

void write_training_csv(const std::filesystem::path& path, const TrainingSet& training) {
  if (training.observations.empty()) fail(ErrorKind::InvalidState, "refusing to write an empty training set");
  const std::size_t dims = training.observations.front().features.size();
  std::string text;
  for (std::size_t d = 0; d < dims; ++d) text += "x" + std::to_string(d) + ",";
  text += "mode\n";
  char buffer[64];
  for (const auto& o : training.observations) {
    for (double v : o.features.values) {
      std::snprintf(buffer, sizeof buffer, "%.17g,", v);
      text += buffer;
    }
    text += to_string(o.mode);
    text += '\n';
  }
  io::write_text(path, text);
}

TrainingSet read_training_csv(const std::filesystem::path& path, std::string appliance) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::Parse, path.string() + ": empty training file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = io::split_csv_line(line);
  if (header.size() < 2 || header.back() != "mode") {
    fail(ErrorKind::Parse, path.string() + ":1: expected header x0,...,mode");
  }
  for (std::size_t d = 0; d + 1 < header.size(); ++d) {
    if (header[d] != "x" + std::to_string(d)) fail(ErrorKind::Parse, path.string() + ":1: bad column " + header[d]);
  }
  TrainingSet training;
  training.appliance = std::move(appliance);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = io::split_csv_line(line);
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() != header.size()) fail(ErrorKind::Parse, where + ": wrong field count");
    Observation o;
    for (std::size_t d = 0; d + 1 < fields.size(); ++d) {
      char* end = nullptr;
      const double v = std::strtod(fields[d].c_str(), &end);
      if (fields[d].empty() || *end != '\0' || !std::isfinite(v)) fail(ErrorKind::Parse, where + ": bad number");
      o.features.values.push_back(v);
    }
    try {
      o.mode = parse_mode(fields.back());
    } catch (const Error& e) {
      fail(ErrorKind::Parse, where + ": " + e.what());
    }
    training.observations.push_back(std::move(o));
  }
  if (training.observations.empty()) fail(ErrorKind::InvalidState, path.string() + ": no observations");
  return training;
}

}  // namespace suplab
