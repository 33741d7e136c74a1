#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace pglab::stats {

// Sample summary for one metric of one scenario. Conventions (documented in
// every CSV header): normal-approximation 95% CI, sample std with n-1,
// moment skewness, Pearson kurtosis (normal = 3), Jarque-Bera normality test.
struct RunStats {
    std::string metric;
    std::size_t n = 0;
    double mean = 0;
    double std_dev = 0;
    double ci95_lo = 0;
    double ci95_hi = 0;
    double cv = 0;
    double skewness = 0;
    double kurtosis = 0;
    double jarque_bera = 0;
    double jb_p = 0;
};

struct EffectSize {
    std::string metric;
    std::string scenario_a;
    std::string scenario_b;
    double cohens_d = 0;
    std::string band; // negligible / small / medium / large
};

struct ShapeStats {
    double skewness = 0;
    double kurtosis = 0;
    double jarque_bera = 0;
    double p_value = 0;
};

double mean(std::span<const double> x);
double sample_std(std::span<const double> x); // n-1 denominator; requires n >= 2

// mean +- 1.96 * s / sqrt(n)
std::pair<double, double> ci95(std::span<const double> x);

// (mean_a - mean_b) / pooled_sd
double cohens_d(std::span<const double> a, std::span<const double> b);

// std / |mean|; throws numeric_error at zero mean
double cv(std::span<const double> x);

// Moment skewness, Pearson kurtosis, JB = n*(skew^2/6 + (kurt-3)^2/24),
// p from chi-square(2). Requires n >= 8 and nonzero variance.
ShapeStats shape_stats(std::span<const double> x);

std::string interpret_d(double d);

RunStats summarize(const std::string& metric, std::span<const double> x);

// Kendall rank correlation between two score vectors (pairs compared by
// value ordering; ties contribute zero).
double kendall_tau(std::span<const double> a, std::span<const double> b);

} // namespace pglab::stats
