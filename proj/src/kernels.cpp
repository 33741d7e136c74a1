#include "pglab/kernels.hpp"

#include "pglab/error.hpp"

#include <atomic>
#include <cstdlib>

namespace pglab::kernels {

#if defined(PGLAB_HAVE_AVX2)
const Backend* avx2_backend_table();
#endif

const Backend* avx2() {
#if defined(PGLAB_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") ? avx2_backend_table() : nullptr;
#else
    return nullptr;
#endif
}

namespace {

std::atomic<const Backend*> g_active{nullptr};

const Backend* pick_default() {
    if (const char* env = std::getenv("PGLAB_KERNELS")) {
        std::string name(env);
        if (name == "scalar") return &scalar();
        if (name == "avx2") {
            if (const Backend* b = avx2()) return b;
            throw input_error("PGLAB_KERNELS=avx2 requested but AVX2 is unavailable");
        }
        if (!name.empty())
            throw input_error("PGLAB_KERNELS: unknown backend '" + name + "'");
    }
    const Backend* b = avx2();
    return b ? b : &scalar();
}

} // namespace

const Backend& active() {
    const Backend* b = g_active.load(std::memory_order_acquire);
    if (!b) {
        b = pick_default();
        g_active.store(b, std::memory_order_release);
    }
    return *b;
}

void select(const std::string& name) {
    if (name == "scalar") {
        g_active.store(&scalar(), std::memory_order_release);
        return;
    }
    if (name == "avx2") {
        if (const Backend* b = avx2()) {
            g_active.store(b, std::memory_order_release);
            return;
        }
        throw input_error("AVX2 backend unavailable on this CPU");
    }
    throw input_error("unknown kernel backend '" + name + "'");
}

} // namespace pglab::kernels
