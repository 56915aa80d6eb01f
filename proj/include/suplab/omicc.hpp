#pragma once

// Operation mode identification from cycle clustering: edges of the tail of
// the day after the turn-on are found with a moving step test, consecutive
// edges bound cycles, cycle power levels are clustered with 1-D k-means and
// each cluster contributes centroid x total duration as one feature. A KNN
// vote over a labelled training set picks the mode.

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "suplab/mode.hpp"
#include "suplab/series.hpp"
#include "suplab/simulator.hpp"

namespace suplab {

struct OmiccParams {
  std::size_t half_window = 20;      // moving step test half-width, samples
  int zeta = 2;                      // threshold multiplier on sigma(I)
  std::size_t smoother_window = 5;
  std::size_t clusters = 3;
  std::size_t neighbors = 5;

  void validate() const;
};

struct ThickEdge {
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive

  friend bool operator==(const ThickEdge&, const ThickEdge&) = default;
};

struct EdgeSet {
  std::vector<ThickEdge> edges;
  double threshold = 0.0;
};

struct Cycle {
  std::size_t start = 0;  // exact edge opening the cycle, tail index
  std::size_t end = 0;    // exact edge closing it
  double power = 0.0;     // median power between the two edges

  std::size_t duration() const noexcept { return end - start; }
};

using CycleSet = std::vector<Cycle>;

struct ClusterModel {
  std::size_t k = 0;
  std::vector<double> centroids;        // ascending
  std::vector<std::size_t> assignment;  // observation -> cluster
};

struct FeatureVector {
  std::vector<double> values;  // watt-seconds, ordered by ascending centroid

  std::size_t size() const noexcept { return values.size(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct Observation {
  FeatureVector features;
  OperationMode mode = OperationMode::Light;
};

struct TrainingSet {
  std::string appliance;
  std::vector<Observation> observations;
};

// Day after the turn-on (to the end of the series), median-smoothed.
PowerSeries tail_series(const PowerSeries& day, std::size_t t_on, std::size_t window);

// I(t) = |median(tail(t, t+l]) - median(tail[t-l, t))|; zero within l of the ends.
std::vector<double> indicator(const PowerSeries& tail, std::size_t half_window);

// Maximal runs with I(t) > zeta * sigma(I).
EdgeSet thick_edges(std::span<const double> indicator_values, int zeta);

// Centre of each thick edge, rounded down.
std::vector<std::size_t> thin_edges(std::span<const ThickEdge> edges);

// One cycle per consecutive pair of exact edges; power is the median of the
// tail over the closed interval between them.
CycleSet extract_cycles(const PowerSeries& tail, std::span<const std::size_t> exact_edges);

// 1-D k-means over arbitrary values.
ClusterModel cluster_values(std::span<const double> values, std::size_t k);

// Clusters the power levels of every cycle except the last (the idle stretch).
ClusterModel cluster_cycles(const CycleSet& cycles, std::size_t k);

FeatureVector features(const CycleSet& cycles, const ClusterModel& model);

OperationMode knn_classify(const FeatureVector& query, const TrainingSet& training, std::size_t neighbors);

// Exact edges of the tail including its two boundaries: the turn-on itself is
// an abrupt change, and the end of the series closes the trailing idle cycle.
std::vector<std::size_t> cycle_boundaries(const PowerSeries& tail, const OmiccParams& params);

// Full feature pipeline for the SUP starting at t_on. Stage failures are
// rethrown with the stage name prefixed.
FeatureVector extract_features(const PowerSeries& day, std::size_t t_on, const OmiccParams& params);

OperationMode omicc_classify(const PowerSeries& day, std::size_t t_on, const TrainingSet& training,
                             const OmiccParams& params);

struct TrainingBuild {
  TrainingSet training;
  std::size_t skipped = 0;
};

// Feature vectors at every ground-truth turn-on of `appliance` in the source,
// in source order. Events whose pipeline fails are skipped and counted.
TrainingBuild build_training_set(const DaySource& source, std::string_view appliance,
                                 const OmiccParams& params);

// CSV `x0,x1,...,mode` with header.
void write_training_csv(const std::filesystem::path& path, const TrainingSet& training);
TrainingSet read_training_csv(const std::filesystem::path& path, std::string appliance = {});

}  // namespace suplab
