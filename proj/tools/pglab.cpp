#include "pglab/abm.hpp"
#include "pglab/csv.hpp"
#include "pglab/dynamics.hpp"
#include "pglab/error.hpp"
#include "pglab/mc.hpp"
#include "pglab/pgi.hpp"
#include "pglab/rng.hpp"
#include "pglab/scorecard.hpp"
#include "pglab/stats.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace {

constexpr const char* version = "pglab 0.1.0";

std::string out_path(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir + "/" + name;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    const std::string path = out_path(dir, name);
    std::ofstream f(path);
    if (!f)
        throw pglab::input_error("cannot write " + path);
    std::cout << "wrote " << path << "\n";
    return f;
}

// Every output file opens with version, the full effective flag set and the
// seed, so the exact invocation can be replayed.
std::string stamp(const std::string& flags) {
    return std::string(version) + " | " + flags;
}

pglab::pgi::Weights parse_weights(const std::string& csv_triple) {
    const auto parts = pglab::csv::split(csv_triple);
    if (parts.size() != 3)
        throw pglab::input_error("--weights expects three comma-separated values");
    return pglab::pgi::Weights::normalized(pglab::csv::parse_number(parts[0], "weights"),
                                           pglab::csv::parse_number(parts[1], "weights"),
                                           pglab::csv::parse_number(parts[2], "weights"));
}

std::vector<pglab::score::Scorecard> cards_from(const std::string& path) {
    if (path.empty()) return pglab::score::builtin_models();
    return pglab::score::load_scorecards(path);
}

int cmd_pgi_compute(const std::string& scorecards, const std::string& weights,
                    const std::string& agg, double rho, double wpos,
                    const std::string& out_dir) {
    using namespace pglab;
    const auto cards = cards_from(scorecards);
    const pgi::Weights w = parse_weights(weights);
    if (agg != "ces" && agg != "linear")
        throw input_error("--agg must be linear or ces");
    const pgi::Aggregator aggregator =
        agg == "ces" ? pgi::Aggregator::ces : pgi::Aggregator::linear;
    const auto results = pgi::score_models(cards, w, aggregator, rho, wpos);

    std::vector<const pgi::Result*> by_rank(results.size());
    for (const auto& r : results) by_rank[std::size_t(r.rank - 1)] = &r;

    std::cout << "model        c_q     c_e     c_x     composite  rank\n";
    for (const auto* r : by_rank)
        std::cout << std::left << std::setw(12) << r->model_id << std::right << std::fixed
                  << std::setprecision(3) << std::setw(6) << r->dims.c_q << std::setw(8)
                  << r->dims.c_e << std::setw(8) << r->dims.c_x << std::setw(11)
                  << r->composite << std::setw(6) << r->rank << "\n";

    // published externality overrides win, but the two-block composition is
    // shown next to them
    bool any_override = false;
    for (const auto& c : cards) {
        if (!c.cx_override) continue;
        const double pos[] = {c.citation_score, c.download_score};
        const double neg[] = {c.misuse_inv, c.bias_inv, c.env_inv};
        const auto comp = pgi::compose_externality_empirical(pos, neg, wpos, c.cx_override);
        if (!any_override) {
            std::cout << "\nexternality composition (published override in effect):\n";
            any_override = true;
        }
        std::cout << "  " << std::left << std::setw(12) << c.model_id << std::right
                  << std::fixed << std::setprecision(4) << "computed " << comp.computed
                  << "  published " << *c.cx_override << "  delta "
                  << comp.computed - *c.cx_override << "\n";
    }
    if (aggregator == pgi::Aggregator::ces) {
        std::vector<double> lin, alt;
        for (const auto& c : cards) {
            const auto d = pgi::dimensions_for(c, wpos);
            lin.push_back(pgi::pgi_linear(d, w));
            alt.push_back(pgi::pgi_ces(d, w, rho));
        }
        std::cout << "rank concordance with linear aggregation: Kendall tau = "
                  << std::setprecision(3) << stats::kendall_tau(lin, alt) << "\n";
    }

    std::ostringstream flags;
    flags << "pgi compute --scorecards " << (scorecards.empty() ? "<builtin>" : scorecards)
          << " --weights " << weights << " --agg " << agg << " --rho " << rho << " --wpos "
          << wpos;
    auto f = open_out(out_dir, "pgi_scores.csv");
    f << "# " << stamp(flags.str()) << "\n";
    f << "model_id,c_q,c_e,c_x,composite,rank\n";
    for (const auto* r : by_rank)
        f << r->model_id << ',' << csv::fmt(r->dims.c_q) << ',' << csv::fmt(r->dims.c_e)
          << ',' << csv::fmt(r->dims.c_x) << ',' << csv::fmt(r->composite) << ',' << r->rank
          << "\n";
    return 0;
}

int cmd_pgi_sensitivity(const std::string& scorecards, long draws, std::uint64_t seed,
                        double lo, double hi, const std::string& out_dir) {
    using namespace pglab;
    const auto cards = cards_from(scorecards);
    const auto rep = pgi::weight_sensitivity(cards, draws, lo, hi, seed);

    std::ostringstream flags;
    flags << "pgi sensitivity --scorecards " << (scorecards.empty() ? "<builtin>" : scorecards)
          << " --draws " << draws << " --lo " << lo << " --hi " << hi << " | seed=" << seed;
    auto f = open_out(out_dir, "pgi_sensitivity.csv");
    f << "# " << stamp(flags.str()) << "\n";
    f << "model_id,rank,frequency\n";
    for (std::size_t mdl = 0; mdl < rep.model_ids.size(); ++mdl)
        for (std::size_t r = 0; r < rep.model_ids.size(); ++r)
            f << rep.model_ids[mdl] << ',' << (r + 1) << ','
              << csv::fmt(rep.rank_rate(mdl, int(r + 1))) << "\n";

    std::cout << "draws: " << rep.n_draws << " (weights uniform in [" << lo << ", " << hi
              << "], renormalized)\n";
    std::cout << std::fixed << std::setprecision(2)
              << "open-weight models in both top-2 slots: " << 100.0 * rep.top2_open_rate()
              << "% of draws (95% reference level)\n"
              << "closed models filling the bottom three: "
              << 100.0 * rep.bottom3_closed_rate() << "% of draws\n";
    return 0;
}

int cmd_case_openai(const std::string& format, const std::string& out_dir) {
    using namespace pglab;
    const auto series = pgi::openai_case();
    if (format == "csv") {
        auto f = open_out(out_dir, "case_openai.csv");
        f << "# " << stamp("case openai --format csv") << "\n";
        f << "model,c_q,c_e,c_x,composite\n";
        for (const auto& p : series.points)
            f << p.label << ',' << csv::fmt(p.dims.c_q) << ',' << csv::fmt(p.dims.c_e) << ','
              << csv::fmt(p.dims.c_x) << ',' << csv::fmt(p.composite) << "\n";
        f << "# relative_decline_pct = " << csv::fmt(100.0 * series.relative_decline) << "\n";
    } else if (format != "text") {
        throw input_error("--format must be text or csv");
    }
    std::cout << "model    c_q    c_e    c_x    composite\n";
    for (const auto& p : series.points)
        std::cout << std::left << std::setw(8) << p.label << std::right << std::fixed
                  << std::setprecision(2) << std::setw(5) << p.dims.c_q << std::setw(7)
                  << p.dims.c_e << std::setw(7) << p.dims.c_x << std::setw(10) << p.composite
                  << "\n";
    std::cout << "relative decline: " << std::setprecision(0)
              << 100.0 * series.relative_decline << "%\n";
    return 0;
}

pglab::dyn::Calibration calibration_from(const std::string& path) {
    if (path.empty())
        return pglab::dyn::Calibration{pglab::dyn::baseline_params(),
                                       pglab::dyn::baseline_initial()};
    return pglab::dyn::load_calibration(path);
}

int cmd_dyn_simulate(const std::string& config, double horizon, double h,
                     const std::string& out_dir) {
    using namespace pglab;
    const auto cal = calibration_from(config);
    std::ostringstream flags;
    flags << "dyn simulate --config " << (config.empty() ? "<builtin>" : config)
          << " --horizon " << horizon << " --step " << h;
    dyn::Trajectory partial;
    dyn::Trajectory traj;
    try {
        traj = dyn::integrate(cal.initial, cal.params, horizon, h, &partial);
    } catch (const numeric_error&) {
        // dump whatever integrated cleanly before the divergence
        auto f = open_out(out_dir, "trajectory.csv");
        dyn::write_trajectory_csv(f, partial, stamp(flags.str() + " | diverged"));
        throw;
    }
    auto f = open_out(out_dir, "trajectory.csv");
    dyn::write_trajectory_csv(f, traj, stamp(flags.str()));
    std::cout << "firms: " << cal.params.size() << ", steps: " << traj.times.size()
              << ", clamp events: " << traj.clamp_events << "\n";
    return 0;
}

int cmd_dyn_optimize(bool social, const std::string& config, double grid, double horizon,
                     double h) {
    using namespace pglab;
    const auto cal = calibration_from(config);
    const auto priv =
        dyn::optimize_excludability_private(cal.params, cal.initial, 0, grid, horizon, h);
    std::cout << std::fixed << std::setprecision(4) << "private optimum: e* = " << priv.e
              << " (discounted profit " << priv.objective << ")\n";
    if (social) {
        const auto soc = dyn::optimize_excludability_social(cal.params, cal.initial, 0, {},
                                                            grid, horizon, h);
        std::cout << "social optimum:  e** = " << soc.e << " (welfare " << soc.objective
                  << ")\n";
        std::cout << "wedge: e* - e** = " << priv.e - soc.e << "\n";
    }
    return 0;
}

int cmd_dyn_verify(const std::string& prop, const std::string& out_dir) {
    using namespace pglab;
    if (prop != "A1" && prop != "A3" && prop != "A4" && prop != "B6" && prop != "all")
        throw input_error("--prop must be one of A1, A3, A4, B6, all");
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
        all_ok = all_ok && ok;
    };

    if (prop == "A1" || prop == "all") {
        const auto grid = dyn::baseline_grid27();
        const auto rep = dyn::verify_market_failure(grid);
        long ok_points = 0;
        for (const auto& p : rep.points) ok_points += p.ok ? 1 : 0;
        report("A1 market-failure wedge", rep.all_ok,
               std::to_string(ok_points) + "/" + std::to_string(rep.points.size()) +
                   " grid points with e* >= e** and a non-negative index gap");
        auto f = open_out(out_dir, "verify_a1.csv");
        f << "# " << stamp("dyn verify --prop A1") << "\n";
        f << "label,e_private,e_social,pgi_private,pgi_social,pgi_gap,ok\n";
        for (const auto& p : rep.points)
            f << p.label << ',' << csv::fmt(p.e_private) << ',' << csv::fmt(p.e_social) << ','
              << csv::fmt(p.pgi_private) << ',' << csv::fmt(p.pgi_social) << ','
              << csv::fmt(p.pgi_gap) << ',' << (p.ok ? 1 : 0) << "\n";
    }
    if (prop == "A3" || prop == "all") {
        auto strong = dyn::symmetric_params();
        for (auto& p : strong) p.gamma_d = 1.4;
        const auto hi = dyn::tipping_experiment(strong, dyn::symmetric_initial(), 0.01);
        auto weak = dyn::symmetric_params();
        for (auto& p : weak) p.gamma_d = 0.8;
        const auto lo = dyn::tipping_experiment(weak, dyn::symmetric_initial(), 0.01);
        report("A3 tipping", hi.share_ratio > 3.0 && lo.share_ratio < 1.5,
               "divergence ratio " + std::to_string(hi.share_ratio) + " at gamma_d=1.4, " +
                   std::to_string(lo.share_ratio) + " at gamma_d=0.8");
    }
    if (prop == "A4" || prop == "all") {
        const auto sub =
            dyn::pigouvian_subsidy(dyn::baseline_params(), dyn::baseline_initial());
        report("A4 pigouvian subsidy",
               sub.s_star > 0 && std::abs(sub.e_subsidized - sub.e_social) <= 0.01 + 1e-12,
               "s* = " + std::to_string(sub.s_star) + ", subsidized argmax " +
                   std::to_string(sub.e_subsidized) + " vs social " +
                   std::to_string(sub.e_social));
    }
    if (prop == "B6" || prop == "all") {
        const double lams[] = {0.0, 0.05, 0.10, 0.15, 0.20};
        const auto es = dyn::comparative_static_lambda_a(dyn::baseline_params(),
                                                         dyn::baseline_initial(), 0, lams);
        bool mono = true;
        std::string series;
        for (std::size_t i = 0; i < es.size(); ++i) {
            if (i) mono = mono && es[i] <= es[i - 1] + 1e-12;
            series += (i ? " " : "") + std::to_string(es[i]);
        }
        report("B6 spillover comparative static", mono, "e* series: " + series);
    }
    return all_ok ? 0 : 3;
}

int cmd_abm_run(const std::string& scenario, int steps, int users, std::uint64_t seed,
                bool seed_given, const std::string& config, const std::string& out_dir) {
    using namespace pglab;
    abm::SimConfig cfg;
    if (!config.empty()) cfg = abm::load_scenario_config(config);
    if (!scenario.empty()) cfg.scenario = abm::scenario_from(scenario);
    if (steps > 0) cfg.steps = steps;
    if (users > 0) cfg.n_users = users;
    if (seed_given || config.empty()) cfg.seed = seed;

    const auto run = abm::run_scenario(cfg);
    std::ostringstream flags;
    flags << "abm run --scenario " << abm::to_string(cfg.scenario) << " --steps " << cfg.steps
          << " --users " << cfg.n_users << " | seed=" << cfg.seed;
    auto f = open_out(out_dir, "abm_metrics_" + abm::to_string(cfg.scenario) + ".csv");
    abm::write_metrics_csv(f, run, stamp(flags.str()));

    const auto& last = run.terminal();
    std::cout << std::fixed << "terminal step " << last.step << ": welfare "
              << std::setprecision(0) << last.welfare << std::setprecision(3) << ", avg PGI "
              << last.avg_pgi << ", HHI " << last.hhi << "\n";
    return 0;
}

int cmd_abm_compare(int reps, int steps, int users, std::uint64_t seed, int threads,
                    const std::string& out_dir) {
    using namespace pglab;
    stats::CompareConfig cfg;
    cfg.reps = reps;
    cfg.base_seed = seed;
    cfg.threads = threads;
    cfg.base.steps = steps;
    cfg.base.n_users = users;

    const auto result = stats::mc_compare(cfg);
    std::ostringstream flags;
    flags << "abm compare --reps " << reps << " --steps " << steps << " --users " << users
          << " --threads " << threads << " | seed=" << seed;

    auto agg = open_out(out_dir, "abm_aggregate.csv");
    stats::write_aggregate_csv(agg, result, stamp(flags.str()));
    auto eff = open_out(out_dir, "abm_effects.csv");
    stats::write_effects_csv(eff, result, stamp(flags.str()));

    // heterogeneity tables from paired per-seed runs (same seed per scenario)
    std::map<abm::Scenario, std::vector<abm::RunResult>> runs;
    const int het_reps = std::min(reps, 20);
    for (const auto scenario : cfg.scenarios)
        for (int r = 0; r < het_reps; ++r) {
            abm::SimConfig rc = cfg.base;
            rc.scenario = scenario;
            rc.seed = rng::hash64(seed, std::uint64_t(r));
            runs[scenario].push_back(abm::run_scenario(rc));
        }
    const auto seg = abm::segment_report(runs);
    auto segf = open_out(out_dir, "abm_segments.csv");
    segf << "# " << stamp(flags.str()) << "\n";
    segf << "segment,baseline_satisfaction";
    for (const auto sc : seg.scenarios) segf << ",delta_" << abm::to_string(sc);
    segf << "\n";
    for (std::size_t s = 0; s < abm::n_segments; ++s) {
        segf << abm::to_string(abm::Segment(s)) << ','
             << csv::fmt(seg.baseline_satisfaction[s]);
        for (const auto sc : seg.scenarios)
            segf << ',' << csv::fmt(seg.satisfaction_delta.at(sc)[s]);
        segf << "\n";
    }
    auto strf = open_out(out_dir, "abm_strategies.csv");
    strf << "# " << stamp(flags.str()) << "\n";
    strf << "scenario,strategy,pgi_delta,safety_delta,share_delta\n";
    for (const auto& [sc, table] : seg.strategy_delta)
        for (const auto& [tag, d] : table)
            strf << abm::to_string(sc) << ',' << tag << ',' << csv::fmt(d.pgi) << ','
                 << csv::fmt(d.safety) << ',' << csv::fmt(d.share) << "\n";

    for (const auto& e : result.effects)
        if (e.metric == "welfare" || e.metric == "avg_pgi")
            std::cout << e.metric << " " << e.scenario_a << " vs " << e.scenario_b
                      << ": Cohen's d = " << std::fixed << std::setprecision(2) << e.cohens_d
                      << " (" << e.band << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Public-goods laboratory: index construction, openness dynamics and "
                 "policy experiments"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    std::string out_dir = ".";
    app.add_option("--out", out_dir, "output directory for CSV reports");

    auto* pgi_cmd = app.add_subcommand("pgi", "composite index construction and robustness");
    pgi_cmd->require_subcommand(1);
    std::string scorecards, weights = "1,1,1", agg = "linear";
    double rho = 1.0, wpos = pglab::pgi::default_w_pos;
    auto* compute = pgi_cmd->add_subcommand("compute", "score and rank models");
    compute->add_option("--scorecards", scorecards, "scorecard CSV (bundled set when omitted)");
    compute->add_option("--weights", weights, "dimension weights a,b,c (renormalized)");
    compute->add_option("--agg", agg, "aggregator: linear or ces");
    compute->add_option("--rho", rho, "CES exponent");
    compute->add_option("--wpos", wpos, "positive-block weight of the externality mean");

    long draws = 10000;
    std::uint64_t seed = pglab::rng::default_seed;
    double box_lo = 0.2, box_hi = 0.5;
    auto* sensitivity = pgi_cmd->add_subcommand("sensitivity", "weight perturbation study");
    sensitivity->add_option("--scorecards", scorecards);
    sensitivity->add_option("--draws", draws, "number of weight draws");
    sensitivity->add_option("--seed", seed, "base seed");
    sensitivity->add_option("--lo", box_lo, "weight box lower bound");
    sensitivity->add_option("--hi", box_hi, "weight box upper bound");

    auto* case_cmd = app.add_subcommand("case", "longitudinal case studies");
    case_cmd->require_subcommand(1);
    std::string format = "text";
    auto* openai = case_cmd->add_subcommand("openai", "flagship-generation openness decline");
    openai->add_option("--format", format, "text or csv");

    auto* dyn_cmd = app.add_subcommand("dyn", "continuous-time openness dynamics");
    dyn_cmd->require_subcommand(1);
    std::string dyn_config;
    double horizon = 40.0, step_h = 0.01, grid = 0.01;
    auto* simulate = dyn_cmd->add_subcommand("simulate", "integrate a calibration");
    simulate->add_option("--config", dyn_config,
                         "calibration file (bundled duopoly when omitted)");
    simulate->add_option("--horizon", horizon, "integration horizon");
    simulate->add_option("--step", step_h, "integration step");
    bool social = false;
    auto* optimize = dyn_cmd->add_subcommand("optimize", "grid search over excludability");
    optimize->add_option("--config", dyn_config);
    optimize->add_flag("--social", social, "also compute the planner's optimum");
    optimize->add_option("--grid", grid, "excludability grid step");
    optimize->add_option("--horizon", horizon);
    optimize->add_option("--step", step_h);
    std::string prop = "all";
    auto* verify = dyn_cmd->add_subcommand("verify", "check the qualitative propositions");
    verify->add_option("--prop", prop, "A1, A3, A4, B6 or all");

    auto* abm_cmd = app.add_subcommand("abm", "agent-based policy experiments");
    abm_cmd->require_subcommand(1);
    std::string scenario, abm_config;
    int steps = 0, users = 0;
    auto* run = abm_cmd->add_subcommand("run", "one scenario run");
    run->add_option("--scenario", scenario, "S0..S4");
    run->add_option("--steps", steps, "market steps (default 20)");
    run->add_option("--users", users, "user agents (default 2000)");
    run->add_option("--seed", seed, "seed");
    run->add_option("--config", abm_config, "scenario config file");
    int reps = 100, threads = 1;
    auto* compare = abm_cmd->add_subcommand("compare", "replicated scenario comparison");
    compare->add_option("--reps", reps, "replications per scenario");
    compare->add_option("--steps", steps, "market steps (default 20)");
    compare->add_option("--users", users, "user agents (default 2000)");
    compare->add_option("--seed", seed, "base seed");
    compare->add_option("--threads", threads, "worker threads (outputs are identical)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (compute->parsed())
            return cmd_pgi_compute(scorecards, weights, agg, rho, wpos, out_dir);
        if (sensitivity->parsed())
            return cmd_pgi_sensitivity(scorecards, draws, seed, box_lo, box_hi, out_dir);
        if (openai->parsed())
            return cmd_case_openai(format, out_dir);
        if (simulate->parsed())
            return cmd_dyn_simulate(dyn_config, horizon, step_h, out_dir);
        if (optimize->parsed())
            return cmd_dyn_optimize(social, dyn_config, grid, horizon, step_h);
        if (verify->parsed())
            return cmd_dyn_verify(prop, out_dir);
        if (run->parsed())
            return cmd_abm_run(scenario, steps, users, seed, run->count("--seed") > 0,
                               abm_config, out_dir);
        if (compare->parsed())
            return cmd_abm_compare(reps, steps == 0 ? 20 : steps, users == 0 ? 2000 : users,
                                   seed, threads, out_dir);
        throw pglab::input_error("no subcommand given");
    } catch (const pglab::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const pglab::numeric_error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
