#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "oracles.hpp"
#include "suplab/error.hpp"
#include "suplab/io.hpp"
#include "suplab/omicc.hpp"
#include "suplab/simulator.hpp"

using namespace suplab;

namespace {

const SuproLibrary& bundled() {
  static const auto lib = SuproLibrary::load_directory(std::string(SUPLAB_DATA_DIR) + "/supro");
  return lib;
}

ErrorKind error_kind(const auto& body) {
  try {
    body();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Io;
}

std::size_t count_runs_above(const std::vector<double>& v, double threshold) {
  std::size_t runs = 0;
  for (std::size_t i = 0; i < v.size(); ++i) runs += v[i] > threshold && (i == 0 || !(v[i - 1] > threshold));
  return runs;
}

}  // namespace

TEST_CASE("tail series boundaries and smoothing") {
  std::vector<double> v(kDaySamples, 10.0);
  v[1005] = 5000;
  const PowerSeries day(v);
  CHECK(tail_series(day, 0, 5).size() == kDaySamples);
  const auto last = tail_series(day, kDaySamples - 1, 5);
  CHECK(last.size() == 1);
  CHECK(last.origin == kDaySamples - 1);
  const auto tail = tail_series(day, 1000, 5);
  CHECK(tail[5] == 10.0);
  CHECK_THROWS_AS(tail_series(day, kDaySamples, 5), Error);
}

TEST_CASE("indicator of a constant series is identically zero") {
  for (double level : {0.0, 17.5, 4000.0}) {
    for (std::size_t half : {1u, 3u, 20u}) {
      for (double v : indicator(PowerSeries(std::vector<double>(200, level)), half)) CHECK(v == 0);
    }
  }
}

TEST_CASE("indicator across a step") {
  std::vector<double> v(10, 0.0);
  v.resize(20, 100.0);
  const auto ind = indicator(PowerSeries(v), 3);
  CHECK(ind[10] == 100);
  CHECK(ind[0] == 0);
  CHECK(ind[19] == 0);
  CHECK_THROWS_AS(indicator(PowerSeries(std::vector<double>(6, 1.0)), 3), Error);
}

TEST_CASE("a noise-free single step of height h peaks at exactly h") {
  RandomSource rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const double base = std::floor(rng.uniform(0, 500));
    const double h = std::floor(rng.uniform(1, 4000));
    const auto half = static_cast<std::size_t>(rng.uniform_int(1, 25));
    const auto at = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(half), 300));
    std::vector<double> v(at, base);
    v.resize(at + 300, base + h);
    const auto ind = indicator(PowerSeries(v), half);
    CHECK(*std::max_element(ind.begin(), ind.end()) == h);
  }
}

TEST_CASE("ramps without steps stay within their local variation") {
  std::vector<double> v(300);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2.0 * static_cast<double>(i);
  const auto ind = indicator(PowerSeries(v), 5);
  // Leading and lagging medians of a slope-2 ramp sit 2 * (half + 1) apart.
  for (std::size_t t = 5; t + 5 < v.size(); ++t) CHECK(ind[t] == doctest::Approx(12.0));
}

TEST_CASE("thick edges against a directly computed threshold") {
  const std::vector<double> ind{0, 0, 50, 60, 0, 0, 70, 0};
  double mean = 0, sq = 0;
  for (double v : ind) mean += v / 8;
  for (double v : ind) sq += (v - mean) * (v - mean) / 8;
  const auto edges = thick_edges(ind, 1);
  CHECK(edges.threshold == doctest::Approx(std::sqrt(sq)));
  CHECK(edges.threshold == doctest::Approx(29.47).epsilon(1e-3));
  CHECK(edges.edges == std::vector<ThickEdge>{{2, 3}, {6, 6}});

  const auto none = thick_edges(std::vector<double>(5, 0.0), 2);
  CHECK(none.threshold == 0);
  CHECK(none.edges.empty());
}

TEST_CASE("raising zeta only removes above-threshold samples") {
  RandomSource rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> ind(rng.uniform_int(1, 60));
    for (auto& v : ind) v = rng.uniform() < 0.7 ? 0.0 : std::floor(rng.uniform(0, 1000));
    std::vector<bool> before(ind.size(), true);
    for (int zeta = 1; zeta <= 6; ++zeta) {
      const auto out = thick_edges(ind, zeta);
      std::vector<bool> now(ind.size(), false);
      for (const auto& e : out.edges) {
        for (std::size_t t = e.start; t <= e.end; ++t) now[t] = true;
      }
      for (std::size_t t = 0; t < ind.size(); ++t) REQUIRE((!now[t] || before[t]));
      before = now;
    }
  }
}

TEST_CASE("thick edge count never grows with zeta on noise-free appliance indicators") {
  for (const auto& appliance : bundled().appliances()) {
    for (auto mode : kModes) {
      auto ssup = canonical_ssup(bundled().get(appliance, mode), 5);
      ssup.samples.resize(ssup.size() + 600, 0.0);
      const auto ind = indicator(ssup, 20);
      std::size_t previous = ind.size();
      for (int zeta = 1; zeta <= 8; ++zeta) {
        const auto n = thick_edges(ind, zeta).edges.size();
        CHECK(n <= previous);
        CHECK(n == count_runs_above(ind, zeta * std_dev(ind)));
        previous = n;
      }
    }
  }
}

TEST_CASE("on noisy indicators a higher threshold can split a run") {
  // A dip inside one run is cut out once the threshold passes it.
  const std::vector<double> ind{0, 0, 0, 0, 0, 0, 0, 0, 100, 40, 100, 0, 0, 0, 0, 0};
  CHECK(thick_edges(ind, 1).edges.size() == 1);
  CHECK(thick_edges(ind, 2).edges.size() == 2);
}

TEST_CASE("thin edges take the floor of each centre") {
  const std::vector<ThickEdge> e{{40, 48}, {10, 13}};
  CHECK(thin_edges(e) == std::vector<std::size_t>{44, 11});
  CHECK(thin_edges(std::vector<ThickEdge>{}).empty());
}

TEST_CASE("cycle extraction") {
  const PowerSeries flat(std::vector<double>(30, 500.0));
  const auto one = extract_cycles(flat, std::vector<std::size_t>{10, 20});
  REQUIRE(one.size() == 1);
  CHECK(one[0].start == 10);
  CHECK(one[0].end == 20);
  CHECK(one[0].power == 500);

  std::vector<double> v(5, 100.0);
  v.resize(12, 900.0);
  const auto two = extract_cycles(PowerSeries(v), std::vector<std::size_t>{0, 5, 9});
  REQUIRE(two.size() == 2);
  CHECK(two[0].power == 100);
  CHECK(two[1].power == 900);

  CHECK(error_kind([&] { extract_cycles(flat, std::vector<std::size_t>{3}); }) == ErrorKind::NoCycles);
  CHECK_THROWS_AS(extract_cycles(flat, std::vector<std::size_t>{5, 5}), Error);
}

TEST_CASE("k-means example and degenerate input") {
  const std::vector<double> powers{100, 105, 1000, 995, 2000};
  const auto m = cluster_values(powers, 3);
  CHECK(m.centroids == std::vector<double>{102.5, 997.5, 2000});
  CHECK(m.assignment == std::vector<std::size_t>{0, 0, 1, 1, 2});
  CHECK(error_kind([] { cluster_values(std::vector<double>(4, 7.0), 3); }) == ErrorKind::DegenerateInput);
  CHECK(error_kind([] { cluster_values(std::vector<double>{1, 2}, 3); }) == ErrorKind::DegenerateInput);
}

TEST_CASE("k-means reaches the exhaustive optimum on small sets") {
  RandomSource rng(404);
  for (int trial = 0; trial < 150; ++trial) {
    std::vector<int> values;
    do {
      values.assign(static_cast<std::size_t>(rng.uniform_int(3, 7)), 0);
      for (auto& v : values) v = static_cast<int>(rng.uniform_int(0, 20));
    } while (std::set<int>(values.begin(), values.end()).size() < 3);
    const std::vector<double> as_double(values.begin(), values.end());
    const auto model = cluster_values(as_double, 3);
    REQUIRE(oracle::wcss_times_840(values, model.assignment, 3) == oracle::optimal_wcss_times_840(values, 3));
    CHECK(std::is_sorted(model.centroids.begin(), model.centroids.end()));
  }
}

TEST_CASE("cluster_cycles leaves out the trailing idle cycle") {
  const CycleSet cycles{{0, 10, 100}, {10, 20, 1000}, {20, 30, 2000}, {30, 90, 5}};
  const auto m = cluster_cycles(cycles, 3);
  CHECK(m.assignment.size() == 3);
  CHECK(m.centroids == std::vector<double>{100, 1000, 2000});
}

TEST_CASE("features are centroid times total duration") {
  const CycleSet cycles{{0, 60, 1000}, {60, 100, 1000}, {100, 110, 3000}, {110, 115, 6000}};
  ClusterModel m{3, {1000, 3000, 6000}, {0, 0, 1, 2}};
  CHECK(features(cycles, m).values == std::vector<double>{100000, 30000, 30000});
  ClusterModel with_empty{3, {1000, 3000, 6000}, {0, 0, 1, 1}};
  CHECK(features(cycles, with_empty).values[2] == 0);
}

TEST_CASE("doubling every cycle duration doubles every feature") {
  RandomSource rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    CycleSet cycles, doubled;
    std::size_t at = 0;
    const auto count = static_cast<std::size_t>(rng.uniform_int(4, 12));
    for (std::size_t i = 0; i < count; ++i) {
      const auto len = static_cast<std::size_t>(rng.uniform_int(1, 500));
      const double power = std::floor(rng.uniform(50, 5000));
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
    const auto a = features(cycles, model);
    const auto b = features(doubled, model);
    for (std::size_t c = 0; c < 3; ++c) CHECK(b.values[c] == 2 * a.values[c]);
  }
}

TEST_CASE("knn examples") {
  TrainingSet t;
  for (int i = 0; i < 3; ++i) t.observations.push_back({{{0, 0, 0}}, OperationMode::Light});
  for (int i = 0; i < 3; ++i) t.observations.push_back({{{10, 10, 10}}, OperationMode::Heavy});
  CHECK(knn_classify({{1, 1, 1}}, t, 3) == OperationMode::Light);
  CHECK(knn_classify({{10, 10, 10}}, t, 1) == OperationMode::Heavy);
  // Balanced vote over the whole set: the closer class wins on summed distance.
  CHECK(knn_classify({{6, 6, 6}}, t, 6) == OperationMode::Heavy);
  CHECK(knn_classify({{4, 4, 4}}, t, 6) == OperationMode::Light);
  CHECK_THROWS_AS(knn_classify({{1, 1, 1}}, t, 7), Error);
  CHECK_THROWS_AS(knn_classify({{1, 1}}, t, 1), Error);
  CHECK_THROWS_AS(knn_classify({{1, 1, 1}}, TrainingSet{}, 1), Error);
}

TEST_CASE("knn is invariant under joint positive rescaling") {
  RandomSource rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    TrainingSet t;
    const auto n = static_cast<std::size_t>(rng.uniform_int(5, 30));
    for (std::size_t i = 0; i < n; ++i) {
      t.observations.push_back({{{rng.uniform(0, 1e6), rng.uniform(0, 1e6), rng.uniform(0, 1e6)}},
                                kModes[static_cast<std::size_t>(rng.uniform_int(0, 2))]});
    }
    const FeatureVector q{{rng.uniform(0, 1e6), rng.uniform(0, 1e6), rng.uniform(0, 1e6)}};
    const double c = std::exp2(static_cast<double>(rng.uniform_int(-8, 8)));
    TrainingSet scaled = t;
    for (auto& o : scaled.observations) {
      for (auto& v : o.features.values) v *= c;
    }
    FeatureVector qs = q;
    for (auto& v : qs.values) v *= c;
    const auto k = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(n)));
    CHECK(knn_classify(q, t, k) == knn_classify(qs, scaled, k));
  }
}

TEST_CASE("flat idle day has no cycles") {
  const PowerSeries day(std::vector<double>(5000, 12.0));
  OmiccParams p;
  CHECK(error_kind([&] { extract_features(day, 100, p); }) == ErrorKind::NoCycles);
}

TEST_CASE("end-to-end features separate the modes of a noise-free SUP") {
  OmiccParams p;
  for (const auto& appliance : bundled().appliances()) {
    std::array<double, kModeCount> energy{};
    for (auto mode : kModes) {
      auto s = canonical_ssup(bundled().get(appliance, mode), 5);
      std::vector<double> day(1000, 0.0);
      day.insert(day.end(), s.samples.begin(), s.samples.end());
      day.resize(day.size() + 2000, 0.0);
      const auto fv = extract_features(PowerSeries(day), 1000, p);
      REQUIRE(fv.size() == 3);
      for (double v : fv.values) energy[index_of(mode)] += v;
    }
    CHECK(energy[0] < energy[1]);
    CHECK(energy[1] < energy[2]);
  }
}

TEST_CASE("training build accounting and CSV round trip") {
  DatasetSpec spec;
  spec.library = bundled();
  spec.appliances = {{"washer"}};
  spec.days = 10;
  const auto ds = generate_dataset(spec);
  OmiccParams p;
  const auto build = build_training_set(ds, "washer", p);
  CHECK(build.training.observations.size() + build.skipped == 10);
  const auto again = build_training_set(ds, "washer", p);
  const auto dir = std::filesystem::temp_directory_path() / "suplab_test_training";
  std::filesystem::create_directories(dir);
  write_training_csv(dir / "a.csv", build.training);
  write_training_csv(dir / "b.csv", again.training);
  CHECK(io::read_text(dir / "a.csv") == io::read_text(dir / "b.csv"));
  const auto back = read_training_csv(dir / "a.csv", "washer");
  REQUIRE(back.observations.size() == build.training.observations.size());
  for (std::size_t i = 0; i < back.observations.size(); ++i) {
    CHECK(back.observations[i].mode == build.training.observations[i].mode);
    for (std::size_t d = 0; d < 3; ++d) {
      CHECK(back.observations[i].features.values[d] ==
            doctest::Approx(build.training.observations[i].features.values[d]).epsilon(1e-12));
    }
  }
  CHECK(error_kind([&] { build_training_set(ds, "dryer", p); }) == ErrorKind::InvalidState);
  std::filesystem::remove_all(dir);
}

TEST_CASE("omicc params validation") {
  OmiccParams p;
  p.zeta = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = OmiccParams{};
  p.neighbors = 0;
  CHECK_THROWS_AS(p.validate(), Error);
}
