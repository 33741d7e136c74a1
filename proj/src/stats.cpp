#include "pglab/stats.hpp"

#include "pglab/error.hpp"

#include <cmath>

namespace pglab::stats {

double mean(std::span<const double> x) {
    if (x.empty())
        throw input_error("mean: empty sample");
    double s = 0;
    for (double v : x) s += v;
    return s / double(x.size());
}

double sample_std(std::span<const double> x) {
    if (x.size() < 2)
        throw input_error("sample_std: need n >= 2");
    const double m = mean(x);
    double ss = 0;
    for (double v : x) ss += (v - m) * (v - m);
    return std::sqrt(ss / double(x.size() - 1));
}

std::pair<double, double> ci95(std::span<const double> x) {
    const double m = mean(x);
    const double half = 1.96 * sample_std(x) / std::sqrt(double(x.size()));
    return {m - half, m + half};
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw input_error("cohens_d: each sample needs n >= 2");
    const double sa = sample_std(a), sb = sample_std(b);
    const double na = double(a.size()), nb = double(b.size());
    const double pooled = std::sqrt(((na - 1) * sa * sa + (nb - 1) * sb * sb) / (na + nb - 2));
    if (pooled == 0)
        throw numeric_error("cohens_d: zero pooled standard deviation");
    return (mean(a) - mean(b)) / pooled;
}

double cv(std::span<const double> x) {
    const double m = mean(x);
    if (m == 0)
        throw numeric_error("cv: zero mean");
    return sample_std(x) / std::abs(m);
}

ShapeStats shape_stats(std::span<const double> x) {
    if (x.size() < 8)
        throw input_error("shape_stats: need n >= 8");
    const double n = double(x.size());
    const double m = mean(x);
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 == 0)
        throw numeric_error("shape_stats: zero variance");
    ShapeStats s;
    s.skewness = m3 / std::pow(m2, 1.5);
    s.kurtosis = m4 / (m2 * m2);
    s.jarque_bera = n * (s.skewness * s.skewness / 6.0 +
                         (s.kurtosis - 3.0) * (s.kurtosis - 3.0) / 24.0);
    // chi-square(2) survival function
    s.p_value = std::exp(-s.jarque_bera / 2.0);
    return s;
}

std::string interpret_d(double d) {
    const double a = std::abs(d);
    if (a < 0.2) return "negligible";
    if (a < 0.5) return "small";
    if (a < 0.8) return "medium";
    return "large";
}

RunStats summarize(const std::string& metric, std::span<const double> x) {
    RunStats r;
    r.metric = metric;
    r.n = x.size();
    r.mean = mean(x);
    r.std_dev = sample_std(x);
    auto [lo, hi] = ci95(x);
    r.ci95_lo = lo;
    r.ci95_hi = hi;
    r.cv = r.mean == 0 ? 0 : r.std_dev / std::abs(r.mean);
    if (r.std_dev > 0 && x.size() >= 8) {
        const ShapeStats s = shape_stats(x);
        r.skewness = s.skewness;
        r.kurtosis = s.kurtosis;
        r.jarque_bera = s.jarque_bera;
        r.jb_p = s.p_value;
    } else {
        r.kurtosis = 3.0;
        r.jb_p = 1.0;
    }
    return r;
}

double kendall_tau(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2)
        throw input_error("kendall_tau: need two equal-length samples with n >= 2");
    long concordant = 0, discordant = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const double prod = (a[i] - a[j]) * (b[i] - b[j]);
            if (prod > 0) ++concordant;
            else if (prod < 0) ++discordant;
        }
    }
    const double pairs = double(a.size()) * double(a.size() - 1) / 2.0;
    return double(concordant - discordant) / pairs;
}

} // namespace pglab::stats
