#include "dolbeault/parallel.hpp"

#include <atomic>

namespace dolbeault {

namespace {
std::atomic<bool> g_parallel{true};

template <typename T>
T pairwise(std::span<const T> v, std::size_t lo, std::size_t hi) {
    std::size_t n = hi - lo;
    if (n <= 8) {
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += v[i];
        return acc;
    }
    std::size_t mid = lo + n / 2;
    return pairwise(v, lo, mid) + pairwise(v, mid, hi);
}
} // namespace

bool parallel_enabled() { return g_parallel.load(std::memory_order_relaxed); }
void set_parallel(bool on) { g_parallel.store(on, std::memory_order_relaxed); }

double det_sum(std::span<const double> terms) { return pairwise(terms, 0, terms.size()); }
std::complex<double> det_sum(std::span<const std::complex<double>> terms) {
    return pairwise(terms, 0, terms.size());
}

} // namespace dolbeault
