#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

// Per-element reference operations. Both backend translation units include
// this header and are compiled with -ffp-contract=off, so the scalar loops,
// the AVX2 tail handling, and the AVX2 vector code all perform the same IEEE
// operations in the same order.
namespace pglab::kernels::detail {

// exp via Cody-Waite range reduction and the classic rational approximation:
// x = n*ln2 + r, exp(x) = 2^n * (1 + 2*p/(q - p)). Clamp bounds keep 2^n and
// the result inside the normal range (no denormals, no overflow).
inline constexpr double exp_clamp_hi = 709.0;
inline constexpr double exp_clamp_lo = -700.0;
inline constexpr double exp_log2e = 1.44269504088896340736;
inline constexpr double exp_ln2_hi = 6.93145751953125e-1;
inline constexpr double exp_ln2_lo = 1.42860682030941723212e-6;
inline constexpr double exp_p0 = 1.26177193074810590878e-4;
inline constexpr double exp_p1 = 3.02994407707441961300e-2;
inline constexpr double exp_p2 = 9.99999999999999999910e-1;
inline constexpr double exp_q0 = 3.00198505138664455042e-6;
inline constexpr double exp_q1 = 2.52448340349684104192e-3;
inline constexpr double exp_q2 = 2.27265548208155028766e-1;
inline constexpr double exp_q3 = 2.00000000000000000005e0;

inline double exp_one(double x) {
    x = std::min(x, exp_clamp_hi);
    x = std::max(x, exp_clamp_lo);
    const double n = std::floor(x * exp_log2e + 0.5);
    double r = x - n * exp_ln2_hi;
    r = r - n * exp_ln2_lo;
    const double rr = r * r;
    const double p = ((exp_p0 * rr + exp_p1) * rr + exp_p2) * r;
    const double q = ((exp_q0 * rr + exp_q1) * rr + exp_q2) * rr + exp_q3;
    const double y = 1.0 + 2.0 * (p / (q - p));
    const auto ni = static_cast<std::int64_t>(n);
    const double scale = std::bit_cast<double>(static_cast<std::uint64_t>(ni + 1023) << 52);
    return y * scale;
}

inline double blend3_one(double a, double b, double c, double wa, double wb, double wc) {
    return a * wa + b * wb + c * wc;
}

inline double blend4_one(double a, double b, double c, double d,
                         double wa, double wb, double wc, double wd) {
    return a * wa + b * wb + c * wc + d * wd;
}

inline double axpy_one(double inout, double coef, double s) {
    return inout + coef * s;
}

inline double incumbency_one(double u, std::int32_t provider, std::int32_t firm,
                             double bonus, double cost) {
    const double adj = provider == firm ? bonus : (provider >= 0 ? -cost : 0.0);
    return u + adj;
}

} // namespace pglab::kernels::detail
