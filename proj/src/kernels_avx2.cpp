#include "pglab/kernels.hpp"

#include "kernels_detail.hpp"

#include <immintrin.h>

// 4-lane AVX2 mirror of the scalar backend. Every vector instruction below
// corresponds one-to-one to a scalar operation in kernels_detail.hpp (no FMA,
// no reassociation), so outputs are bit-identical to the scalar backend.
namespace pglab::kernels {

namespace {

using namespace detail;

inline __m256d exp_pd(__m256d x) {
    x = _mm256_min_pd(x, _mm256_set1_pd(exp_clamp_hi));
    x = _mm256_max_pd(x, _mm256_set1_pd(exp_clamp_lo));
    const __m256d n = _mm256_floor_pd(
        _mm256_add_pd(_mm256_mul_pd(x, _mm256_set1_pd(exp_log2e)), _mm256_set1_pd(0.5)));
    __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(n, _mm256_set1_pd(exp_ln2_hi)));
    r = _mm256_sub_pd(r, _mm256_mul_pd(n, _mm256_set1_pd(exp_ln2_lo)));
    const __m256d rr = _mm256_mul_pd(r, r);
    __m256d p = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(exp_p0), rr), _mm256_set1_pd(exp_p1));
    p = _mm256_add_pd(_mm256_mul_pd(p, rr), _mm256_set1_pd(exp_p2));
    p = _mm256_mul_pd(p, r);
    __m256d q = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(exp_q0), rr), _mm256_set1_pd(exp_q1));
    q = _mm256_add_pd(_mm256_mul_pd(q, rr), _mm256_set1_pd(exp_q2));
    q = _mm256_add_pd(_mm256_mul_pd(q, rr), _mm256_set1_pd(exp_q3));
    const __m256d y = _mm256_add_pd(
        _mm256_set1_pd(1.0),
        _mm256_mul_pd(_mm256_set1_pd(2.0), _mm256_div_pd(p, _mm256_sub_pd(q, p))));
    // 2^n through the exponent field; n is integral and within [-1010, 1023]
    const __m128i ni = _mm256_cvtpd_epi32(n);
    const __m256i bits = _mm256_slli_epi64(
        _mm256_add_epi64(_mm256_cvtepi32_epi64(ni), _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(y, _mm256_castsi256_pd(bits));
}

void blend3_avx2(std::size_t n, const double* a, const double* b, const double* c,
                 double wa, double wb, double wc, double* out) {
    const __m256d va = _mm256_set1_pd(wa), vb = _mm256_set1_pd(wb), vc = _mm256_set1_pd(wc);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(a + i), va),
                                  _mm256_mul_pd(_mm256_loadu_pd(b + i), vb));
        t = _mm256_add_pd(t, _mm256_mul_pd(_mm256_loadu_pd(c + i), vc));
        _mm256_storeu_pd(out + i, t);
    }
    for (; i < n; ++i)
        out[i] = blend3_one(a[i], b[i], c[i], wa, wb, wc);
}

void blend4_avx2(std::size_t n, const double* a, const double* b, const double* c,
                 const double* d, double wa, double wb, double wc, double wd,
                 double* out) {
    const __m256d va = _mm256_set1_pd(wa), vb = _mm256_set1_pd(wb);
    const __m256d vc = _mm256_set1_pd(wc), vd = _mm256_set1_pd(wd);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d t = _mm256_add_pd(_mm256_mul_pd(_mm256_loadu_pd(a + i), va),
                                  _mm256_mul_pd(_mm256_loadu_pd(b + i), vb));
        t = _mm256_add_pd(t, _mm256_mul_pd(_mm256_loadu_pd(c + i), vc));
        t = _mm256_add_pd(t, _mm256_mul_pd(_mm256_loadu_pd(d + i), vd));
        _mm256_storeu_pd(out + i, t);
    }
    for (; i < n; ++i)
        out[i] = blend4_one(a[i], b[i], c[i], d[i], wa, wb, wc, wd);
}

void axpy_avx2(std::size_t n, const double* coef, double s, double* inout) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_add_pd(_mm256_loadu_pd(inout + i),
                                        _mm256_mul_pd(_mm256_loadu_pd(coef + i), vs));
        _mm256_storeu_pd(inout + i, t);
    }
    for (; i < n; ++i)
        inout[i] = axpy_one(inout[i], coef[i], s);
}

void incumbency_avx2(std::size_t n, const std::int32_t* provider, std::int32_t firm,
                     const double* bonus, const double* cost, double* inout) {
    const __m128i vfirm = _mm_set1_epi32(firm);
    const __m128i vnone = _mm_set1_epi32(-1);
    const __m256d signbit = _mm256_set1_pd(-0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m128i pv = _mm_loadu_si128(reinterpret_cast<const __m128i*>(provider + i));
        const __m256d eq = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm_cmpeq_epi32(pv, vfirm)));
        const __m256d has = _mm256_castsi256_pd(_mm256_cvtepi32_epi64(_mm_cmpgt_epi32(pv, vnone)));
        const __m256d negcost = _mm256_xor_pd(_mm256_loadu_pd(cost + i), signbit);
        __m256d adj = _mm256_blendv_pd(negcost, _mm256_loadu_pd(bonus + i), eq);
        adj = _mm256_and_pd(adj, has);
        _mm256_storeu_pd(inout + i, _mm256_add_pd(_mm256_loadu_pd(inout + i), adj));
    }
    for (; i < n; ++i)
        inout[i] = incumbency_one(inout[i], provider[i], firm, bonus[i], cost[i]);
}

void exp_avx2(std::size_t n, double* x) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, exp_pd(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i)
        x[i] = exp_one(x[i]);
}

void softmax_avx2(std::size_t n, std::size_t k, const double* const* u,
                  double inv_temp, double* const* prob, double* scratch_max,
                  double* scratch_sum) {
    const __m256d vt = _mm256_set1_pd(inv_temp);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d m = _mm256_loadu_pd(u[0] + i);
        for (std::size_t j = 1; j < k; ++j)
            m = _mm256_max_pd(m, _mm256_loadu_pd(u[j] + i));
        _mm256_storeu_pd(scratch_max + i, m);
    }
    for (; i < n; ++i) {
        double m = u[0][i];
        for (std::size_t j = 1; j < k; ++j) m = std::max(m, u[j][i]);
        scratch_max[i] = m;
    }
    for (std::size_t j = 0; j < k; ++j) {
        i = 0;
        for (; i + 4 <= n; i += 4) {
            const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(u[j] + i),
                                            _mm256_loadu_pd(scratch_max + i));
            _mm256_storeu_pd(prob[j] + i, exp_pd(_mm256_mul_pd(d, vt)));
        }
        for (; i < n; ++i)
            prob[j][i] = exp_one((u[j][i] - scratch_max[i]) * inv_temp);
    }
    i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d s = _mm256_loadu_pd(prob[0] + i);
        for (std::size_t j = 1; j < k; ++j)
            s = _mm256_add_pd(s, _mm256_loadu_pd(prob[j] + i));
        _mm256_storeu_pd(scratch_sum + i, s);
    }
    for (; i < n; ++i) {
        double s = prob[0][i];
        for (std::size_t j = 1; j < k; ++j) s += prob[j][i];
        scratch_sum[i] = s;
    }
    for (std::size_t j = 0; j < k; ++j) {
        i = 0;
        for (; i + 4 <= n; i += 4)
            _mm256_storeu_pd(prob[j] + i, _mm256_div_pd(_mm256_loadu_pd(prob[j] + i),
                                                        _mm256_loadu_pd(scratch_sum + i)));
        for (; i < n; ++i)
            prob[j][i] = prob[j][i] / scratch_sum[i];
    }
}

constexpr Backend avx2_backend{
    "avx2",          blend3_avx2, blend4_avx2, axpy_avx2,
    incumbency_avx2, exp_avx2,    softmax_avx2,
};

} // namespace

const Backend* avx2_backend_table() { return &avx2_backend; }

} // namespace pglab::kernels
