#pragma once

#include <cstddef>

namespace conenav {

/// Execution policy for the data-parallel kernels (lidar beams, depth-map
/// pixels, batch runs, audit states, field cells). Serial is the reference
/// implementation; the test suite checks Parallel against it and the
/// benchmark target compares their throughput.
enum class Exec { Serial, Parallel };

template <typename Body>
void for_each_index(std::ptrdiff_t count, Exec exec, Body&& body) {
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) body(i);
    }
}

}  // namespace conenav
