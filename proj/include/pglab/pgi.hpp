#pragma once

#include "pglab/scorecard.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pglab::pgi {

// The theoretical variant allows a signed net-externality component (the
// ratio form lives in [-1, 1]); the empirical variant keeps all three
// dimensions in the unit interval.
enum class Variant { empirical, theoretical };

struct DimensionScores {
    double c_q = 0; // non-rivalry
    double c_e = 0; // non-excludability
    double c_x = 0; // net externality
    Variant variant = Variant::empirical;

    void validate() const;
};

struct Weights {
    double alpha = 1.0 / 3.0;
    double beta = 1.0 / 3.0;
    double gamma = 1.0 / 3.0;

    static Weights equal() { return {}; }
    // Rescales non-negative raw weights to sum to one.
    static Weights normalized(double a, double b, double g);
    void validate() const;
};

struct Ranked {
    std::string model_id;
    double composite = 0;
    int rank = 0;
};

struct Result {
    std::string model_id;
    DimensionScores dims;
    double composite = 0;
    int rank = 0;
};

// q_star / (q_star + load); both zero is undefined.
double nonrivalry_ratio(double q_star, double load);

double compose_dimension_mean(std::span<const double> subscores);

// (x_pos - x_neg) / (x_pos + x_neg) in [-1, 1]; both zero is undefined.
double externality_ratio(double x_pos, double x_neg);

struct ExternalityComposition {
    double value = 0;    // what downstream uses (override when present)
    double computed = 0; // the two-block weighted mean, always reported
    bool overridden = false;
};

// w_pos * mean(pos) + (1 - w_pos) * mean(neg_inverted); a published override
// wins but the computed value is surfaced next to it.
ExternalityComposition compose_externality_empirical(std::span<const double> pos,
                                                     std::span<const double> neg_inverted,
                                                     double w_pos,
                                                     std::optional<double> override_value);

double pgi_linear(const DimensionScores&, const Weights&);

// Power-mean aggregation (alpha*c_q^rho + beta*c_e^rho + gamma*c_x^rho)^(1/rho).
// rho = 0 is unsupported; negative components reject fractional rho.
double pgi_ces(const DimensionScores&, const Weights&, double rho);

// Descending composite; ties broken by ascending model_id.
std::vector<Ranked> rank_models(std::span<const std::pair<std::string, double>>);

enum class Aggregator { linear, ces };

inline constexpr double default_w_pos = 0.5;

// Dimension triple for one scorecard: published overrides when present, else
// sub-score means with the externality composition rule.
DimensionScores dimensions_for(const score::Scorecard&, double w_pos = default_w_pos);

std::vector<Result> score_models(std::span<const score::Scorecard>, const Weights&,
                                 Aggregator agg = Aggregator::linear, double rho = 1.0,
                                 double w_pos = default_w_pos);

// Weight-perturbation stability study: n_draws independent uniform draws of
// each weight from [box_lo, box_hi], renormalized to sum one.
struct SensitivityReport {
    std::vector<std::string> model_ids;       // input order
    std::vector<bool> open_weight;            // access_mode == open
    long n_draws = 0;
    std::uint64_t seed = 0;
    double box_lo = 0, box_hi = 0;
    // rank_count[m][r] = draws in which model m held rank r+1
    std::vector<std::vector<long>> rank_count;
    // outrank_count[a][b] = draws in which model a ranked strictly above b
    std::vector<std::vector<long>> outrank_count;
    long top2_open_count = 0;    // open-weight models hold both top-2 slots
    long bottom3_closed_count = 0;

    double rank_rate(std::size_t model, int rank) const;
    double outrank_rate(std::size_t a, std::size_t b) const;
    double top2_open_rate() const { return double(top2_open_count) / double(n_draws); }
    double bottom3_closed_rate() const { return double(bottom3_closed_count) / double(n_draws); }
};

SensitivityReport weight_sensitivity(std::span<const score::Scorecard>, long n_draws,
                                     double box_lo, double box_hi, std::uint64_t seed,
                                     double w_pos = default_w_pos);

// Longitudinal case fixture: successive generations of one vendor's flagship
// model with equally weighted composites and the relative decline.
struct CasePoint {
    std::string label;
    DimensionScores dims;
    double composite = 0;
};

struct CaseSeries {
    std::vector<CasePoint> points;
    double relative_decline = 0; // 1 - last/first
};

CaseSeries openai_case();

// Social-optimum PGI minus market-equilibrium PGI.
double pgi_gap(double pgi_social, double pgi_private);

} // namespace pglab::pgi
