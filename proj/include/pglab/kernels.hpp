#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace pglab::kernels {

// Batched inner loops shared by the market simulator (utility accumulation,
// tempered softmax over the firm axis) and the index sensitivity sweep
// (weighted three-component composites across draws).
//
// Every kernel is elementwise over index i with a fixed per-element operation
// order, and horizontal reductions are excluded from the API, so all backends
// produce bit-identical doubles. Tests enforce equality with memcmp; the
// runtime backend choice therefore never changes a result.
struct Backend {
    const char* name;

    // out[i] = a[i]*wa + b[i]*wb + c[i]*wc
    void (*blend3)(std::size_t n, const double* a, const double* b, const double* c,
                   double wa, double wb, double wc, double* out);

    // out[i] = a[i]*wa + b[i]*wb + c[i]*wc + d[i]*wd
    void (*blend4)(std::size_t n, const double* a, const double* b, const double* c,
                   const double* d, double wa, double wb, double wc, double wd,
                   double* out);

    // inout[i] += coef[i] * s
    void (*axpy)(std::size_t n, const double* coef, double s, double* inout);

    // inout[i] += bonus[i] when provider[i] == firm,
    //          -= cost[i]  when provider[i] is some other firm (>= 0),
    //          unchanged   when provider[i] < 0 (no incumbent).
    void (*incumbency_adjust)(std::size_t n, const std::int32_t* provider,
                              std::int32_t firm, const double* bonus,
                              const double* cost, double* inout);

    // x[i] = exp(x[i]), clamped to [-700, 709] before evaluation.
    void (*exp_inplace)(std::size_t n, double* x);

    // prob[j][i] = exp((u[j][i] - max_j u[j][i]) * inv_temp) / sum_j(...)
    // for j in [0, k). scratch_max/scratch_sum must hold n doubles each.
    void (*softmax)(std::size_t n, std::size_t k, const double* const* u,
                    double inv_temp, double* const* prob, double* scratch_max,
                    double* scratch_sum);
};

const Backend& scalar();

// AVX2 backend, or nullptr when the CPU (or build) lacks it.
const Backend* avx2();

// Runtime-selected backend: AVX2 when available, else scalar. The environment
// variable PGLAB_KERNELS=scalar|avx2 pins the choice.
const Backend& active();

// Test hook; throws input_error for an unknown or unavailable backend name.
void select(const std::string& name);

// Single-lane reference exponential (the same arithmetic the batched kernels
// apply per element).
double exp1(double x);

} // namespace pglab::kernels
