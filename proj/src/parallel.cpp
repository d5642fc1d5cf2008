#include "pauli_sep/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pauli_sep {

int thread_count() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* cap = std::getenv("PAULI_SEP_THREADS")) {
        try {
            const int requested = std::stoi(cap);
            if (requested > 0) n = std::min(n, requested);
        } catch (const std::exception&) {
            // unparsable value: keep the default width
        }
    }
    return std::max(n, 1);
}

}  // namespace pauli_sep
