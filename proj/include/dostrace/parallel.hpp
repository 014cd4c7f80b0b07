#pragma once

#include <cstdint>
#include <functional>

namespace dostrace::parallel {

// Worker count: DOSTRACE_WORKERS env or set_workers() override, else
// hardware concurrency.
int workers();
void set_workers(int n);

// Static block partition over [0, n); every index is processed exactly once
// and writes only its own outputs, so results are order-independent.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace dostrace::parallel
