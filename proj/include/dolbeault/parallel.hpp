#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dolbeault {

// Global switch between the OpenMP kernels and the serial reference path.
// Both paths compute every output element with the same serial inner loop,
// so results are bitwise identical; tests and the benchmark rely on that.
bool parallel_enabled();
void set_parallel(bool on);

// Static-schedule parallel loop over [0, n); falls back to a plain loop when
// parallelism is disabled or OpenMP is unavailable.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
    if (parallel_enabled()) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) body(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) body(i);
    }
}

// Deterministic pairwise reduction in index order; independent of the thread
// count used to fill `terms`.
double det_sum(std::span<const double> terms);
std::complex<double> det_sum(std::span<const std::complex<double>> terms);

} // namespace dolbeault
