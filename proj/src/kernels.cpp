#include "suplab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace suplab::kernels {

namespace {

// Median of a scratch buffer, destroying its order. Even sizes average the
// two middle values.
double median_in_place(double* first, double* last) {
  const std::ptrdiff_t n = last - first;
  double* mid = first + n / 2;
  std::nth_element(first, mid, last);
  if (n % 2 == 1) return *mid;
  const double lower = *std::max_element(first, mid);
  return 0.5 * (lower + *mid);
}

inline double running_median_at(std::span<const double> in, std::size_t half, std::size_t i,
                                double* scratch) {
  const std::size_t n = in.size();
  const std::size_t h = std::min({half, i, n - 1 - i});
  const std::size_t lo = i - h;
  const std::size_t count = 2 * h + 1;
  std::copy_n(in.data() + lo, count, scratch);
  return median_in_place(scratch, scratch + count);
}

inline double correlation_at(std::span<const double> ref, const double* window, double offset) {
  double sum = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) sum += std::abs(ref[k] - window[k]);
  return offset - sum / static_cast<double>(ref.size());
}

inline double moving_step_at(std::span<const double> in, std::size_t half, std::size_t t,
                             double* scratch) {
  std::copy_n(in.data() + t + 1, half, scratch);
  const double leading = median_in_place(scratch, scratch + half);
  std::copy_n(in.data() + t - half, half, scratch);
  const double lagging = median_in_place(scratch, scratch + half);
  return std::abs(leading - lagging);
}

int g_threads = 0;

}  // namespace

namespace serial {

void running_median(std::span<const double> in, std::size_t half, std::span<double> out) {
  std::vector<double> scratch(2 * half + 1);
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = running_median_at(in, half, i, scratch.data());
}

void abs_diff_correlation(std::span<const double> ref, std::span<const double> day, double offset,
                          std::span<double> out) {
  const std::size_t lags = day.size() - ref.size() + 1;
  for (std::size_t t = 0; t < lags; ++t) out[t] = correlation_at(ref, day.data() + t, offset);
}

void moving_step(std::span<const double> in, std::size_t half, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (half == 0 || in.size() <= 2 * half) return;
  std::vector<double> scratch(half);
  for (std::size_t t = half; t + half < in.size(); ++t) out[t] = moving_step_at(in, half, t, scratch.data());
}

double dtw(std::span<const double> x, std::span<const double> y) {
  const std::size_t m = y.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(m + 1, inf);
  std::vector<double> curr(m + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    curr[0] = inf;
    const double xi = x[i];
    double left = inf;
    for (std::size_t j = 1; j <= m; ++j) {
      const double best = std::min({prev[j], left, prev[j - 1]});
      left = std::abs(xi - y[j - 1]) + best;
      curr[j] = left;
    }
    std::swap(prev, curr);
  }
  return prev[m];
}

}  // namespace serial

namespace parallel {

void running_median(std::span<const double> in, std::size_t half, std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(in.size());
#pragma omp parallel if (n > 4096)
  {
    std::vector<double> scratch(2 * half + 1);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      out[static_cast<std::size_t>(i)] =
          running_median_at(in, half, static_cast<std::size_t>(i), scratch.data());
    }
  }
}

void abs_diff_correlation(std::span<const double> ref, std::span<const double> day, double offset,
                          std::span<double> out) {
  const auto lags = static_cast<std::ptrdiff_t>(day.size() - ref.size() + 1);
#pragma omp parallel for schedule(static) if (lags > 1024)
  for (std::ptrdiff_t t = 0; t < lags; ++t) {
    out[static_cast<std::size_t>(t)] = correlation_at(ref, day.data() + t, offset);
  }
}

void moving_step(std::span<const double> in, std::size_t half, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  if (half == 0 || in.size() <= 2 * half) return;
  const auto first = static_cast<std::ptrdiff_t>(half);
  const auto last = static_cast<std::ptrdiff_t>(in.size() - half);
#pragma omp parallel if (last - first > 4096)
  {
    std::vector<double> scratch(half);
#pragma omp for schedule(static)
    for (std::ptrdiff_t t = first; t < last; ++t) {
      out[static_cast<std::size_t>(t)] =
          moving_step_at(in, half, static_cast<std::size_t>(t), scratch.data());
    }
  }
}

}  // namespace parallel

void set_worker_threads(int threads) {
  g_threads = threads;
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#endif
}

int worker_threads() {
#ifdef _OPENMP
  return g_threads > 0 ? g_threads : omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace suplab::kernels
