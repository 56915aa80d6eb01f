#pragma once

// Inner loops of the pipeline in two flavours: `serial` is the straightforward
// reference used by the tests, `parallel` spreads the outer index over OpenMP
// threads. Every output element is computed by exactly the same arithmetic in
// both, so results are bit-identical regardless of thread count.

#include <cstddef>
#include <span>

namespace suplab::kernels {

namespace serial {

// out[i] = median of in over the symmetric window of half-width `half`
// centred at i, truncated to fit inside the series.
void running_median(std::span<const double> in, std::size_t half, std::span<double> out);

// out[t] = offset - mean_k |ref[k] - day[t + k]|, t = 0 .. day.size()-ref.size().
void abs_diff_correlation(std::span<const double> ref, std::span<const double> day,
                          double offset, std::span<double> out);

// Moving step test: out[t] = |median(in(t, t+half]) - median(in[t-half, t))|,
// zero within `half` of either boundary.
void moving_step(std::span<const double> in, std::size_t half, std::span<double> out);

// Unconstrained DTW with |x - y| local cost and the symmetric step pattern
// {(i-1,j), (i,j-1), (i-1,j-1)}; returns the accumulated cost.
double dtw(std::span<const double> x, std::span<const double> y);

}  // namespace serial

namespace parallel {

void running_median(std::span<const double> in, std::size_t half, std::span<double> out);
void abs_diff_correlation(std::span<const double> ref, std::span<const double> day,
                          double offset, std::span<double> out);
void moving_step(std::span<const double> in, std::size_t half, std::span<double> out);

}  // namespace parallel

// Threads the parallel kernels and the batch drivers may use (0 = runtime default).
void set_worker_threads(int threads);
int worker_threads();

}  // namespace suplab::kernels
