#include "dostrace/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>

namespace dostrace::kernels {

namespace {

const Ops* pick_default() {
#if defined(__x86_64__)
    if (const char* env = std::getenv("DOSTRACE_KERNELS")) {
        std::string want(env);
        if (want == "scalar") return &scalar_ops();
        if (want == "avx2" && __builtin_cpu_supports("avx2")) return &avx2_ops();
        return &scalar_ops();
    }
    if (__builtin_cpu_supports("avx2")) return &avx2_ops();
#endif
    return &scalar_ops();
}

std::atomic<const Ops*>& slot() {
    static std::atomic<const Ops*> current{pick_default()};
    return current;
}

}  // namespace

const Ops& active() { return *slot().load(std::memory_order_relaxed); }

void force_backend(const std::string& name) {
    if (name == "scalar") {
        slot().store(&scalar_ops());
        return;
    }
#if defined(__x86_64__)
    if (name == "avx2") {
        if (!__builtin_cpu_supports("avx2"))
            throw std::runtime_error("avx2 kernels requested but CPU lacks AVX2");
        slot().store(&avx2_ops());
        return;
    }
#endif
    if (name == "auto") {
        slot().store(pick_default());
        return;
    }
    throw std::runtime_error("unknown kernel backend: " + name);
}

std::string active_name() { return active().name; }

}  // namespace dostrace::kernels
