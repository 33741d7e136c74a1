#include "pglab/mc.hpp"

#include "pglab/csv.hpp"
#include "pglab/error.hpp"
#include "pglab/rng.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

namespace pglab::stats {

std::uint64_t replication_seed(std::uint64_t base_seed, int scenario_ordinal, int rep) {
    return rng::hash64(base_seed, std::uint64_t(scenario_ordinal), std::uint64_t(rep));
}

namespace {

std::map<std::string, double> terminal_metrics(const abm::RunResult& r) {
    const abm::MarketMetrics& m = r.terminal();
    return {
        {"welfare", m.welfare},       {"avg_pgi", m.avg_pgi},
        {"hhi", m.hhi},               {"innovation", m.innovation},
        {"data_quality", m.data_quality}, {"safety", m.safety_index},
    };
}

} // namespace

CompareResult mc_compare(const CompareConfig& cfg) {
    if (cfg.reps < 2)
        throw input_error("mc_compare: reps must be >= 2");
    if (cfg.scenarios.empty())
        throw input_error("mc_compare: no scenarios");

    struct Job {
        abm::Scenario scenario;
        int ordinal;
        int rep;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < cfg.scenarios.size(); ++s)
        for (int r = 0; r < cfg.reps; ++r)
            jobs.push_back(Job{cfg.scenarios[s], int(cfg.scenarios[s]), r});

    // slot-addressed results keep aggregation independent of completion order
    std::vector<std::map<std::string, double>> slots(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= jobs.size()) return;
            const Job& job = jobs[k];
            try {
                abm::SimConfig run_cfg = cfg.base;
                run_cfg.scenario = job.scenario;
                run_cfg.seed = replication_seed(cfg.base_seed, job.ordinal, job.rep);
                slots[k] = terminal_metrics(abm::run_scenario(run_cfg));
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::make_exception_ptr(numeric_error(
                        "replication failed (scenario=" + abm::to_string(job.scenario) +
                        ", rep=" + std::to_string(job.rep) + ", seed=" +
                        std::to_string(replication_seed(cfg.base_seed, job.ordinal, job.rep)) +
                        "): " + e.what()));
                return;
            }
        }
    };

    const int n_threads = std::max(1, cfg.threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    CompareResult out;
    out.scenarios = cfg.scenarios;
    out.reps = cfg.reps;
    out.base_seed = cfg.base_seed;
    for (std::size_t k = 0; k < jobs.size(); ++k)
        for (const auto& [metric, value] : slots[k])
            out.samples[jobs[k].scenario][metric].push_back(value);

    for (const auto scenario : cfg.scenarios) {
        for (const char* metric : compare_metrics) {
            RunStats rs = summarize(metric, out.samples[scenario][metric]);
            out.summaries[scenario].push_back(std::move(rs));
        }
    }

    const auto s0 = out.samples.find(abm::Scenario::S0);
    if (s0 != out.samples.end()) {
        for (const auto scenario : cfg.scenarios) {
            if (scenario == abm::Scenario::S0) continue;
            for (const char* metric : compare_metrics) {
                EffectSize e;
                e.metric = metric;
                e.scenario_a = abm::to_string(scenario);
                e.scenario_b = "S0";
                try {
                    e.cohens_d =
                        cohens_d(out.samples[scenario][metric], s0->second.at(metric));
                    e.band = interpret_d(e.cohens_d);
                } catch (const numeric_error&) {
                    // both samples degenerate (a seed-invariant metric)
                    e.cohens_d = 0;
                    e.band = "degenerate";
                }
                out.effects.push_back(std::move(e));
            }
        }
    }
    return out;
}

void write_aggregate_csv(std::ostream& os, const CompareResult& r,
                         const std::string& header_comment) {
    if (!header_comment.empty())
        os << "# " << header_comment << "\n";
    os << "# conventions: normal-approximation 95% CI; sample std (n-1); moment skewness; "
          "Pearson kurtosis (normal = 3); Jarque-Bera p-value\n";
    os << "scenario,metric,n,mean,std,ci95_lo,ci95_hi,cv,skew,kurtosis,jb_p\n";
    for (const auto scenario : r.scenarios) {
        for (const auto& s : r.summaries.at(scenario)) {
            os << abm::to_string(scenario) << ',' << s.metric << ',' << s.n << ','
               << csv::fmt(s.mean) << ',' << csv::fmt(s.std_dev) << ',' << csv::fmt(s.ci95_lo)
               << ',' << csv::fmt(s.ci95_hi) << ',' << csv::fmt(s.cv) << ','
               << csv::fmt(s.skewness) << ',' << csv::fmt(s.kurtosis) << ','
               << csv::fmt(s.jb_p) << "\n";
        }
    }
}

void write_effects_csv(std::ostream& os, const CompareResult& r,
                       const std::string& header_comment) {
    if (!header_comment.empty())
        os << "# " << header_comment << "\n";
    os << "# conventions: pooled-standard-deviation Cohen's d\n";
    os << "metric,scenario_a,scenario_b,cohens_d\n";
    for (const auto& e : r.effects)
        os << e.metric << ',' << e.scenario_a << ',' << e.scenario_b << ','
           << csv::fmt(e.cohens_d) << "\n";
}

} // namespace pglab::stats
