#pragma once

#include <cstddef>
#include <functional>

namespace tribench {

/// Serial is the reference path; Parallel distributes iterations over OpenMP
/// threads. Work items must be independent and write to disjoint slots, in
/// which case the two modes are bit-identical.
enum class ExecMode { Serial, Parallel };

void parallel_for(std::size_t n, ExecMode mode,
                  const std::function<void(std::size_t)>& body);

int max_threads();

}  // namespace tribench
