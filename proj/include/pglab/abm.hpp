#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace pglab::abm {

enum class Scenario { S0, S1, S2, S3, S4 };

std::string to_string(Scenario);
Scenario scenario_from(const std::string&);

enum class Segment {
    tech_experts,
    price_sensitive,
    safety_priority,
    brand_loyal,
    early_adopters,
    balanced,
};

inline constexpr std::size_t n_segments = 6;
std::string to_string(Segment);

struct FirmAgent {
    int id = 0;
    std::string name;
    std::string strategy; // club_good / safety_club / hybrid / strong_public
    double capital = 0;   // millions
    double tech_level = 0; // in [0, 110]
    double market_share = 0;
    double excludability = 0;
    double safety_investment = 0;
    double rd_rate = 0;
    double price = 0; // price_base * excludability
    double pgi = 0;   // empirical proxy, refreshed each step
    int users = 0;
    bool dormant = false;
    double last_profit = 0;
    double last_tech_growth = 0;
};

struct UserAgent {
    int id = 0;
    Segment segment = Segment::balanced;
    double tech_savvy = 0;
    double price_sens = 0;
    double safety_pref = 0;
    double brand_loyalty = 0;
    int provider = -1;
    double switching_cost = 0;
};

// One scenario's instrument levels. S0 keeps every instrument at zero
// (share_cap inactive at 1); S4 combines the S1-S3 settings.
struct PolicyScenario {
    Scenario id = Scenario::S0;
    double subsidy_rate = 0;
    double pollution_tax_rate = 0;
    double share_cap = 1.0;
};

struct SimConfig {
    Scenario scenario = Scenario::S0;
    int steps = 20;
    int n_users = 2000;
    std::uint64_t seed = 0xC0FFEE;
    double choice_temp = 0.25; // logit temperature

    // instrument levels used when the scenario activates them
    double subsidy_rate = 0.3;
    double pollution_tax_rate = 0.8;
    double share_cap = 0.35;

    // welfare index composition (ordinal-use contract) and presentation scale
    double w_cs = 0.4, w_ps = 0.2, w_innov = 0.2, w_neg = 0.2;
    double welfare_scale = 180000.0;

    // behavioral constants
    double rev_per_user = 1.5;        // millions per (user, step) at price 1
    double tech_gain = 0.5;           // diminishing-returns R&D conversion
    double capacity_per_million = 0.2; // user slots per million of capital
    double e_step = 0.05;             // per-step excludability move
    double safety_response = 1.0;     // safety drift under the pollution tax
    double loyalty_bonus = 0.3;       // utility bonus scale for incumbents
    double network_weight = 2.0;      // scales the market-share network term
    double switch_cost_base = 0.1;
    double switch_cost_loyal = 0.3;
    double pollution_exponent = 1.5;  // share exponent of the pollution proxy
    double ps_norm = 10000.0;         // producer-surplus normalization

    PolicyScenario policy() const;
};

struct MarketMetrics {
    int step = 0;
    double welfare = 0;
    double avg_pgi = 0;
    double hhi = 0;
    double innovation = 0;   // mean per-firm tech growth this step
    double data_quality = 0; // share-weighted safety investment
    double safety_index = 0; // mean safety investment
    std::array<double, n_segments> segment_satisfaction{};
    std::map<std::string, double> strategy_pgi; // mean PGI per strategy tag
};

struct MarketState {
    SimConfig cfg;
    int step = 0;
    std::vector<FirmAgent> firms;
    std::vector<UserAgent> users;

    // SoA mirrors for the batched kernels
    struct Columns {
        std::vector<double> tech_savvy, price_sens, safety_pref, loyalty;
        std::vector<double> bonus, sw_cost, satisfaction;
        std::vector<std::int32_t> provider;
        std::array<std::vector<double>, 6> utility;
        std::array<std::vector<double>, 6> prob;
        std::vector<double> scratch_max, scratch_sum;
    } cols;

    double gov_budget = 0; // taxes collected minus subsidies paid this step
};

// Six firm agents from the published parameterization, n_users users split
// evenly over the six segments with Beta-distributed preferences, initial
// providers assigned by a logit draw. Deterministic in cfg.seed.
MarketState init_market(const SimConfig&);

// Deterministic utility of one user for one firm (the random shock enters at
// choice time). Matches the batched kernel arithmetic bit for bit.
double user_utility(const UserAgent&, const FirmAgent&, double network_share,
                    const SimConfig&);

// Samples from softmax(utilities / temperature) on the user's substream.
int choose_provider(const UserAgent&, std::span<const FirmAgent>, const SimConfig&,
                    std::uint64_t step_seed);

// Start-of-step instruments: under a share cap, standing assignments above
// the cap are redistributed to firms with headroom by logit weights.
void apply_policy(MarketState&);

// One full market step: apply_policy, all users choose (kernel batched, then
// cap reconciliation in user order), all firms adapt in id order, metrics.
MarketMetrics market_step(MarketState&);

MarketMetrics compute_metrics(const MarketState&);

struct RunResult {
    SimConfig cfg;
    std::vector<MarketMetrics> series;
    std::vector<FirmAgent> final_firms;

    const MarketMetrics& terminal() const { return series.back(); }
};

RunResult run_scenario(const SimConfig&);

// Heterogeneity tables: per-segment satisfaction deltas and per-strategy
// PGI / safety / share deltas of each scenario against S0, averaged over
// paired runs.
struct SegmentReport {
    std::vector<Scenario> scenarios;
    std::array<double, n_segments> baseline_satisfaction{};
    std::map<Scenario, std::array<double, n_segments>> satisfaction_delta;
    struct StrategyDelta {
        double pgi = 0;
        double safety = 0;
        double share = 0;
    };
    std::map<Scenario, std::map<std::string, StrategyDelta>> strategy_delta;
};

SegmentReport segment_report(const std::map<Scenario, std::vector<RunResult>>&);

SimConfig load_scenario_config(const std::string& path);
SimConfig parse_scenario_config(std::istream&, const std::string& origin);

void write_metrics_csv(std::ostream&, const RunResult&, const std::string& header_comment);

} // namespace pglab::abm
