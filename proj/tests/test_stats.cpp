#include "pglab/stats.hpp"

#include "pglab/error.hpp"
#include "pglab/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <unordered_set>
#include <vector>

using namespace pglab;

namespace {

// Box-Muller on a dedicated stream; test-side oracle helper only.
std::vector<double> gauss_sample(std::uint64_t seed, std::size_t n, double mu, double sigma) {
    rng::Stream s = rng::stream_for(seed, 7);
    std::vector<double> out;
    out.reserve(n);
    while (out.size() < n) {
        const double u1 = std::max(s.next_unit(), 1e-300);
        const double u2 = s.next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        out.push_back(mu + sigma * r * std::cos(2.0 * M_PI * u2));
        if (out.size() < n)
            out.push_back(mu + sigma * r * std::sin(2.0 * M_PI * u2));
    }
    return out;
}

std::vector<double> exponential_sample(std::uint64_t seed, std::size_t n) {
    rng::Stream s = rng::stream_for(seed, 8);
    std::vector<double> out(n);
    for (auto& x : out) x = -std::log(std::max(1.0 - s.next_unit(), 1e-300));
    return out;
}

} // namespace

TEST_CASE("ci95 hand fixtures") {
    const std::vector<double> constant{3.5, 3.5, 3.5};
    auto [lo0, hi0] = stats::ci95(constant);
    CHECK(lo0 == 3.5);
    CHECK(hi0 == 3.5);

    // {0,2}: mean 1, s = sqrt(2), n = 2 -> 1 +- 1.96
    const std::vector<double> two{0.0, 2.0};
    auto [lo, hi] = stats::ci95(two);
    CHECK(lo == doctest::Approx(-0.96).epsilon(1e-12));
    CHECK(hi == doctest::Approx(2.96).epsilon(1e-12));

    CHECK_THROWS_AS(stats::ci95(std::vector<double>{1.0}), input_error);
}

TEST_CASE("ci width scales as 1/sqrt(n)") {
    std::vector<double> logn, logw;
    for (std::size_t n : {100u, 400u, 1600u, 6400u}) {
        const auto x = gauss_sample(42, n, 0.0, 1.0);
        auto [lo, hi] = stats::ci95(x);
        logn.push_back(std::log(double(n)));
        logw.push_back(std::log(hi - lo));
    }
    // least-squares slope
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < logn.size(); ++i) { mx += logn[i]; my += logw[i]; }
    mx /= double(logn.size());
    my /= double(logn.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < logn.size(); ++i) {
        sxy += (logn[i] - mx) * (logw[i] - my);
        sxx += (logn[i] - mx) * (logn[i] - mx);
    }
    CHECK(sxy / sxx == doctest::Approx(-0.5).epsilon(0.1));
}

TEST_CASE("cohens_d fixtures and antisymmetry") {
    const std::vector<double> same{1.0, 2.0, 3.0};
    CHECK(stats::cohens_d(same, same) == 0.0);

    // a = {2,4,6,8}, b = {1,3,5,7}: pooled sd = sqrt(20/3), d = sqrt(3/20)
    const std::vector<double> a{2, 4, 6, 8}, b{1, 3, 5, 7};
    CHECK(stats::cohens_d(a, b) == doctest::Approx(0.3872983346207417).epsilon(1e-12));
    CHECK(stats::cohens_d(a, b) == -stats::cohens_d(b, a));

    const auto n1 = gauss_sample(1, 20000, 1.0, 1.0);
    const auto n0 = gauss_sample(2, 20000, 0.0, 1.0);
    CHECK(stats::cohens_d(n1, n0) == doctest::Approx(1.0).epsilon(0.05));

    const std::vector<double> flat{2, 2, 2};
    CHECK_THROWS_AS(stats::cohens_d(flat, flat), numeric_error);
}

TEST_CASE("cv fixtures and scale invariance") {
    const std::vector<double> constant{5, 5, 5, 5};
    CHECK(stats::cv(constant) == 0.0);

    const std::vector<double> x{9, 11};
    CHECK(stats::cv(x) == doctest::Approx(0.1414213562373095).epsilon(1e-12));

    const auto g = gauss_sample(3, 500, 10.0, 2.0);
    std::vector<double> scaled(g.size());
    std::transform(g.begin(), g.end(), scaled.begin(), [](double v) { return 3.0 * v; });
    CHECK(stats::cv(scaled) == doctest::Approx(stats::cv(g)).epsilon(1e-12));

    const std::vector<double> zero_mean{-1, 1};
    CHECK_THROWS_AS(stats::cv(zero_mean), numeric_error);
}

TEST_CASE("shape_stats hand fixture and distribution checks") {
    // the symmetric ladder {-2..2} twice (duplication preserves all central
    // moments): skew 0, kurtosis 1.7, JB = 10*(1.69/24), p = exp(-JB/2)
    const std::vector<double> sym{-2, -1, 0, 1, 2, -2, -1, 0, 1, 2};
    const auto s = stats::shape_stats(sym);
    CHECK(s.skewness == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.kurtosis == doctest::Approx(1.7).epsilon(1e-12));
    CHECK(s.jarque_bera == doctest::Approx(0.7041666666666667).epsilon(1e-12));
    CHECK(s.p_value == doctest::Approx(0.7032215177413866).epsilon(1e-12));

    const auto normal = gauss_sample(4, 10000, 0.0, 1.0);
    const auto ns = stats::shape_stats(normal);
    CHECK(ns.kurtosis == doctest::Approx(3.0).epsilon(0.07));
    CHECK(ns.p_value > 0.01);

    const auto expo = exponential_sample(5, 10000);
    CHECK(stats::shape_stats(expo).p_value < 0.001);

    const std::vector<double> flat{1, 1, 1, 1, 1, 1, 1, 1};
    CHECK_THROWS_AS(stats::shape_stats(flat), numeric_error);
}

TEST_CASE("statistics are permutation invariant") {
    auto x = gauss_sample(6, 200, 2.0, 0.5);
    auto y = x;
    rng::Stream s = rng::stream_for(9, 1);
    for (std::size_t i = y.size() - 1; i > 0; --i)
        std::swap(y[i], y[s.next_u64() % (i + 1)]);
    // invariant up to floating-point summation order
    CHECK(stats::mean(x) == doctest::Approx(stats::mean(y)).epsilon(1e-13));
    CHECK(stats::sample_std(x) == doctest::Approx(stats::sample_std(y)).epsilon(1e-13));
    CHECK(stats::cv(x) == doctest::Approx(stats::cv(y)).epsilon(1e-13));
}

TEST_CASE("seed mixing has no collisions over the experiment grid") {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(1u << 20);
    for (std::uint64_t scenario = 0; scenario < 10; ++scenario)
        for (std::uint64_t rep = 0; rep < 100000; ++rep)
            seen.insert(rng::hash64(rng::default_seed, scenario, rep));
    CHECK(seen.size() == 1000000);
}

TEST_CASE("kendall tau basics") {
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> rev{5, 4, 3, 2, 1};
    CHECK(stats::kendall_tau(a, a) == 1.0);
    CHECK(stats::kendall_tau(a, rev) == -1.0);
    const std::vector<double> b{1, 3, 2, 4, 5};
    CHECK(stats::kendall_tau(a, b) == doctest::Approx(0.8));
}

TEST_CASE("interpretation bands") {
    CHECK(stats::interpret_d(0.1) == "negligible");
    CHECK(stats::interpret_d(-0.3) == "small");
    CHECK(stats::interpret_d(0.6) == "medium");
    CHECK(stats::interpret_d(18.31) == "large");
}

TEST_CASE("beta order-statistic sampler matches shape means") {
    rng::Stream s = rng::stream_for(11, 3);
    auto mean_of = [&](int a, int b) {
        double acc = 0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) acc += rng::beta_int(s, a, b);
        return acc / n;
    };
    CHECK(mean_of(6, 2) == doctest::Approx(0.75).epsilon(0.02));
    CHECK(mean_of(2, 5) == doctest::Approx(2.0 / 7.0).epsilon(0.02));
    CHECK(mean_of(3, 3) == doctest::Approx(0.5).epsilon(0.02));
}
