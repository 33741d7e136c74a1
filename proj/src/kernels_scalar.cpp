#include "pglab/kernels.hpp"

#include "kernels_detail.hpp"

namespace pglab::kernels {

namespace {

using namespace detail;

void blend3_scalar(std::size_t n, const double* a, const double* b, const double* c,
                   double wa, double wb, double wc, double* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = blend3_one(a[i], b[i], c[i], wa, wb, wc);
}

void blend4_scalar(std::size_t n, const double* a, const double* b, const double* c,
                   const double* d, double wa, double wb, double wc, double wd,
                   double* out) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = blend4_one(a[i], b[i], c[i], d[i], wa, wb, wc, wd);
}

void axpy_scalar(std::size_t n, const double* coef, double s, double* inout) {
    for (std::size_t i = 0; i < n; ++i)
        inout[i] = axpy_one(inout[i], coef[i], s);
}

void incumbency_scalar(std::size_t n, const std::int32_t* provider, std::int32_t firm,
                       const double* bonus, const double* cost, double* inout) {
    for (std::size_t i = 0; i < n; ++i)
        inout[i] = incumbency_one(inout[i], provider[i], firm, bonus[i], cost[i]);
}

void exp_scalar(std::size_t n, double* x) {
    for (std::size_t i = 0; i < n; ++i)
        x[i] = exp_one(x[i]);
}

void softmax_scalar(std::size_t n, std::size_t k, const double* const* u,
                    double inv_temp, double* const* prob, double* scratch_max,
                    double* scratch_sum) {
    for (std::size_t i = 0; i < n; ++i) {
        double m = u[0][i];
        for (std::size_t j = 1; j < k; ++j) m = std::max(m, u[j][i]);
        scratch_max[i] = m;
    }
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i)
            prob[j][i] = exp_one((u[j][i] - scratch_max[i]) * inv_temp);
    for (std::size_t i = 0; i < n; ++i) {
        double s = prob[0][i];
        for (std::size_t j = 1; j < k; ++j) s += prob[j][i];
        scratch_sum[i] = s;
    }
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n; ++i)
            prob[j][i] = prob[j][i] / scratch_sum[i];
}

constexpr Backend scalar_backend{
    "scalar",        blend3_scalar, blend4_scalar, axpy_scalar,
    incumbency_scalar, exp_scalar,    softmax_scalar,
};

} // namespace

const Backend& scalar() { return scalar_backend; }

double exp1(double x) { return detail::exp_one(x); }

} // namespace pglab::kernels
