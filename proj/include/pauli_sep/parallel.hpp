#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace pauli_sep {

/// Width of parallel grid maps: the OpenMP default, capped by PAULI_SEP_THREADS when set.
int thread_count();

/// out[i] = fn(i) for i < n on an OpenMP team. An exception thrown by any
/// iteration is rethrown after the loop; the one with the lowest index wins so
/// failures do not depend on scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 8) num_threads(thread_count())
    for (long i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = fn(k);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

/// Sequential counterpart of parallel_map.
template <class T, class Fn>
std::vector<T> serial_map(std::size_t n, Fn&& fn) {
    std::vector<T> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
}

}  // namespace pauli_sep
