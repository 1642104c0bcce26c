#pragma once

#include "eqboot/core.hpp"

#include <exception>

namespace eqboot::detail {

/// Slot-style parallel loop: the body writes only to index-i storage, so the
/// result is independent of the thread count. Exceptions are captured and
/// rethrown after the region.
template <typename Body>
void parallel_indexed(int n, const Body& body) {
    std::exception_ptr failure = nullptr;
#pragma omp parallel for schedule(static) num_threads(::eqboot::thread_count())
    for (int i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
#pragma omp critical
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace eqboot::detail
