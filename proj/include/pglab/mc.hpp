#pragma once

#include "pglab/abm.hpp"
#include "pglab/stats.hpp"

#include <iosfwd>
#include <map>

namespace pglab::stats {

// Terminal-step metrics aggregated by the replication harness.
inline constexpr const char* compare_metrics[] = {
    "welfare", "avg_pgi", "hhi", "innovation", "data_quality", "safety",
};

// Documented substream rule: replication r of scenario s runs with
// hash64(base_seed, ordinal(s), r), so results are independent of execution
// order and schedule.
std::uint64_t replication_seed(std::uint64_t base_seed, int scenario_ordinal, int rep);

struct CompareConfig {
    std::vector<abm::Scenario> scenarios{abm::Scenario::S0, abm::Scenario::S1,
                                         abm::Scenario::S2, abm::Scenario::S3,
                                         abm::Scenario::S4};
    int reps = 100;
    std::uint64_t base_seed = 0xC0FFEE;
    int threads = 1;
    abm::SimConfig base; // scenario and seed fields are overwritten per run
};

struct CompareResult {
    std::vector<abm::Scenario> scenarios;
    int reps = 0;
    std::uint64_t base_seed = 0;
    // samples[scenario][metric], in replication order
    std::map<abm::Scenario, std::map<std::string, std::vector<double>>> samples;
    std::map<abm::Scenario, std::vector<RunStats>> summaries;
    std::vector<EffectSize> effects; // each scenario against S0, per metric
};

CompareResult mc_compare(const CompareConfig&);

// scenario,metric,n,mean,std,ci95_lo,ci95_hi,cv,skew,kurtosis,jb_p
void write_aggregate_csv(std::ostream&, const CompareResult&,
                         const std::string& header_comment);

// metric,scenario_a,scenario_b,cohens_d
void write_effects_csv(std::ostream&, const CompareResult&,
                       const std::string& header_comment);

} // namespace pglab::stats
