// End-to-end acceptance suite: one pass/fail line per criterion, with the
// measured values inline. Exit status is the number of failed criteria.

#include "pglab/abm.hpp"
#include "pglab/dynamics.hpp"
#include "pglab/kernels.hpp"
#include "pglab/mc.hpp"
#include "pglab/pgi.hpp"
#include "pglab/rng.hpp"
#include "pglab/scorecard.hpp"
#include "pglab/stats.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace pglab;

namespace {

int failures = 0;

void line(int criterion, bool ok, const std::string& what) {
    std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

// ---------------------------------------------------------------- criterion 1
void criterion_ranking() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = pgi::score_models(score::builtin_models(), pgi::Weights::equal());
    const std::map<std::string, double> expected{{"Llama", 0.767},
                                                 {"Qwen", 0.633},
                                                 {"Claude", 0.537},
                                                 {"Gemini", 0.520},
                                                 {"ChatGPT", 0.383}};
    const std::vector<std::string> order{"Llama", "Qwen", "Claude", "Gemini", "ChatGPT"};
    bool ok = true;
    double worst = 0;
    for (const auto& r : results) {
        const double err = std::abs(r.composite - expected.at(r.model_id));
        worst = std::max(worst, err);
        ok = ok && err <= 0.005;
        ok = ok && order[std::size_t(r.rank - 1)] == r.model_id;
    }
    const double secs = seconds_since(t0);
    ok = ok && secs < 1.0;
    line(1, ok,
         "five-model composites within +-0.005 of the published table (max dev " +
             fmt(worst) + "), rank order exact, " + fmt(secs, 2) + " s");
}

// ---------------------------------------------------------------- criterion 2
void criterion_case() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto series = pgi::openai_case();
    const double want[] = {0.86, 0.60, 0.37};
    bool ok = series.points.size() == 3;
    double worst = 0;
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const double err = std::abs(series.points[i].composite - want[i]);
        worst = std::max(worst, err);
        ok = ok && err <= 0.005;
    }
    const double decline_pct = 100.0 * series.relative_decline;
    ok = ok && std::abs(decline_pct - 57.0) <= 1.0;
    const double secs = seconds_since(t0);
    ok = ok && secs < 1.0;
    line(2, ok,
         "generation composites within +-0.005 (max dev " + fmt(worst) +
             "), relative decline " + fmt(decline_pct, 1) + "% within 57 +- 1");
}

// ---------------------------------------------------------------- criterion 3
void criterion_gap() {
    const double lo = pgi::pgi_gap(0.65, 0.37);
    const double hi = pgi::pgi_gap(0.75, 0.37);
    const bool ok = std::abs(lo - 0.28) <= 1e-15 && std::abs(hi - 0.38) <= 1e-15;
    line(3, ok, "index gap band [" + fmt(lo, 2) + ", " + fmt(hi, 2) + "] equals [0.28, 0.38]");
}

// ---------------------------------------------------------------- criterion 4
void criterion_sensitivity() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto rep =
        pgi::weight_sensitivity(score::builtin_models(), 10000, 0.2, 0.5, 42);
    std::size_t llama = 0, claude = 0, gemini = 0, chatgpt = 0;
    for (std::size_t i = 0; i < rep.model_ids.size(); ++i) {
        if (rep.model_ids[i] == "Llama") llama = i;
        if (rep.model_ids[i] == "Claude") claude = i;
        if (rep.model_ids[i] == "Gemini") gemini = i;
        if (rep.model_ids[i] == "ChatGPT") chatgpt = i;
    }
    const bool dominance = rep.outrank_rate(llama, claude) == 1.0 &&
                           rep.outrank_rate(llama, gemini) == 1.0 &&
                           rep.outrank_rate(llama, chatgpt) == 1.0;
    const double secs = seconds_since(t0);
    const bool ok = dominance && secs < 5.0;
    // the measured top-2 rate is published next to the 95% reference level,
    // not asserted against it
    line(4, ok,
         "Llama outranks Claude/Gemini/ChatGPT in 100% of 10000 draws; measured "
         "open-weight top-2 rate " +
             fmt(100.0 * rep.top2_open_rate(), 2) + "% (95% reference level), " +
             fmt(secs, 2) + " s");
}

// ---------------------------------------------------------------- criterion 5
double power_mean_oracle(const pgi::DimensionScores& d, const pgi::Weights& w, double rho) {
    const double s = w.alpha * std::exp(rho * std::log(d.c_q)) +
                     w.beta * std::exp(rho * std::log(d.c_e)) +
                     w.gamma * std::exp(rho * std::log(d.c_x));
    return std::exp(std::log(s) / rho);
}

void criterion_ces() {
    const auto& cards = score::builtin_models();
    bool ok = true;
    double worst_oracle = 0, worst_identity = 0, min_tau = 1.0;
    std::vector<double> linear_scores;
    for (const auto& c : cards)
        linear_scores.push_back(
            pgi::pgi_linear(pgi::dimensions_for(c), pgi::Weights::equal()));
    for (double rho : {0.5, 2.0}) {
        std::vector<double> ces_scores;
        for (const auto& c : cards) {
            const auto d = pgi::dimensions_for(c);
            const double got = pgi::pgi_ces(d, pgi::Weights::equal(), rho);
            const double want = power_mean_oracle(d, pgi::Weights::equal(), rho);
            worst_oracle = std::max(worst_oracle, std::abs(got - want));
            ces_scores.push_back(got);
        }
        const double tau = stats::kendall_tau(linear_scores, ces_scores);
        min_tau = std::min(min_tau, tau);
    }
    for (const auto& c : cards) {
        const auto d = pgi::dimensions_for(c);
        worst_identity = std::max(worst_identity,
                                  std::abs(pgi::pgi_ces(d, pgi::Weights::equal(), 1.0) -
                                           pgi::pgi_linear(d, pgi::Weights::equal())));
    }
    ok = worst_oracle <= 1e-9 && worst_identity <= 1e-12 && min_tau >= 0.6;
    line(5, ok,
         "power-mean oracle dev " + fmt(worst_oracle, 12) + " <= 1e-9, rho=1 identity dev " +
             fmt(worst_identity, 14) + " <= 1e-12, Kendall tau " + fmt(min_tau, 3) +
             " >= 0.6");
}

// ---------------------------------------------------------------- criterion 6
struct OracleRates {
    double t_a, t_d, t_c, q, rep, x_pos, x_neg;
};

OracleRates rate_oracle(const std::vector<dyn::FirmState>& st,
                        const std::vector<dyn::FirmParams>& pp, std::size_t i) {
    const auto& s = st[i];
    const auto& p = pp[i];
    double pool = 0;
    for (std::size_t j = 0; j < st.size(); ++j)
        if (j != i) pool += (1 - st[j].e) * st[j].t_a;
    const double mu = pp[0].logit_scale;
    std::vector<double> u(st.size());
    double m = -1e300;
    for (std::size_t j = 0; j < st.size(); ++j) {
        const double tech =
            std::pow(pp[j].omega_a * std::pow(st[j].t_a, pp[j].rho_t) +
                         pp[j].omega_d * std::pow(st[j].t_d, pp[j].rho_t) +
                         pp[j].omega_c * std::pow(st[j].t_c, pp[j].rho_t),
                     1.0 / pp[j].rho_t);
        u[j] = tech - pp[j].price_slope * st[j].e;
        m = std::max(m, u[j]);
    }
    double denom = 0;
    for (double v : u) denom += std::exp((v - m) / mu);
    const double share = std::exp((u[i] - m) / mu) / denom;
    double total_q = 0;
    for (const auto& x : st) total_q += x.q;
    const double tech_i = std::pow(p.omega_a * std::pow(s.t_a, p.rho_t) +
                                       p.omega_d * std::pow(s.t_d, p.rho_t) +
                                       p.omega_c * std::pow(s.t_c, p.rho_t),
                                   1.0 / p.rho_t);
    OracleRates r;
    r.t_a = p.phi_a * std::pow(s.i_a, p.beta_a) * std::pow(s.t_a, 1 - p.beta_a) +
            p.lambda_a * (1 - s.e) * pool - p.delta_a * s.t_a;
    r.t_d = p.phi_d * std::pow(s.q, p.gamma_d) - p.delta_d * s.t_d;
    r.t_c = p.g_c * s.t_c + p.phi_c * s.i_c - p.delta_c * s.t_c;
    r.q = p.lambda_q * (p.market_size * share - s.q);
    r.rep = p.phi_r * s.q + p.psi_r * (1 - s.e) - p.delta_r * s.rep;
    r.x_pos = p.kappa_pos * std::pow(1 - s.e, p.eta) * tech_i * s.q - p.delta_pos * s.x_pos;
    const double ushare = total_q > 0 ? s.q / total_q : 0.0;
    r.x_neg =
        p.kappa_neg * std::pow(ushare, p.zeta) * s.q - p.xi * p.safety - p.delta_neg * s.x_neg;
    if (s.x_neg <= 0 && r.x_neg < 0) r.x_neg = 0;
    return r;
}

void criterion_ode() {
    const auto t0 = std::chrono::steady_clock::now();

    // embedded linear decay at h = 0.01
    dyn::FirmParams p;
    p.lambda_q = 0;
    p.xi = 0;
    p.g_c = 0;
    std::vector<dyn::FirmState> st(1);
    st[0].t_a = 1.0;
    st[0].q = 0;
    st[0].e = 1.0;
    st[0].i_a = st[0].i_c = 0;
    const auto traj = dyn::integrate(st, {&p, 1}, 10.0, 0.01);
    const double decay_err = std::abs(traj.terminal()[0].t_a - std::exp(-p.delta_a * 10.0));

    // RK4 order on the same equation with delta = 0.5
    auto p2 = p;
    p2.delta_a = 0.5;
    std::vector<double> logh, logerr;
    for (double h : {0.04, 0.02, 0.01}) {
        const auto tr = dyn::integrate(st, {&p2, 1}, 10.0, h);
        logh.push_back(std::log(h));
        logerr.push_back(std::log(std::abs(tr.terminal()[0].t_a - std::exp(-0.5 * 10.0))));
    }
    const double slope = (logerr.back() - logerr.front()) / (logh.back() - logh.front());

    // derivative evaluator against the independent formula oracle
    const auto params = dyn::baseline_params();
    rng::Stream rnd = rng::stream_for(991, 1);
    double worst = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<dyn::FirmState> rs(2);
        for (auto& x : rs) {
            x.t_a = rnd.next_range(0.05, 20);
            x.t_d = rnd.next_range(0.05, 20);
            x.t_c = rnd.next_range(0.05, 20);
            x.q = rnd.next_range(0, 10);
            x.rep = rnd.next_range(0, 5);
            x.x_pos = rnd.next_range(0.01, 10);
            x.x_neg = rnd.next_range(0.01, 10);
            x.e = rnd.next_unit();
            x.i_a = rnd.next_range(0, 2);
            x.i_c = rnd.next_range(0, 2);
        }
        const auto got = dyn::derivatives(rs, params);
        for (std::size_t i = 0; i < 2; ++i) {
            const auto want = rate_oracle(rs, params, i);
            const double devs[] = {
                std::abs(got[i].t_a - want.t_a),   std::abs(got[i].t_d - want.t_d),
                std::abs(got[i].t_c - want.t_c),   std::abs(got[i].q - want.q),
                std::abs(got[i].rep - want.rep),   std::abs(got[i].x_pos - want.x_pos),
                std::abs(got[i].x_neg - want.x_neg)};
            const double refs[] = {want.t_a, want.t_d, want.t_c, want.q,
                                   want.rep, want.x_pos, want.x_neg};
            for (int k = 0; k < 7; ++k)
                worst = std::max(worst, devs[k] / std::max(1.0, std::abs(refs[k])));
        }
    }
    const double secs = seconds_since(t0);
    const bool ok = decay_err < 1e-6 && std::abs(slope - 4.0) <= 0.3 && worst <= 1e-12 &&
                    secs < 30.0;
    line(6, ok,
         "linear-decay error " + fmt(decay_err, 10) + " < 1e-6, RK4 order slope " +
             fmt(slope, 2) + " in 4 +- 0.3, derivative oracle dev " + fmt(worst, 14) +
             " <= 1e-12, " + fmt(secs, 1) + " s");
}

// ---------------------------------------------------------------- criterion 7
void criterion_propositions() {
    const auto t0 = std::chrono::steady_clock::now();

    const auto grid = dyn::baseline_grid27();
    const auto a1 = dyn::verify_market_failure(grid);
    long a1_ok = 0;
    for (const auto& pt : a1.points) a1_ok += pt.ok ? 1 : 0;

    const auto a4 = dyn::pigouvian_subsidy(dyn::baseline_params(), dyn::baseline_initial());
    const bool a4_ok = a4.s_star > 0 && std::abs(a4.e_subsidized - a4.e_social) <= 0.01 + 1e-12;

    const double lams[] = {0.0, 0.05, 0.10, 0.15, 0.20};
    const auto b6 = dyn::comparative_static_lambda_a(dyn::baseline_params(),
                                                     dyn::baseline_initial(), 0, lams);
    bool b6_ok = true;
    for (std::size_t i = 1; i < b6.size(); ++i) b6_ok = b6_ok && b6[i] <= b6[i - 1] + 1e-12;

    auto strong = dyn::symmetric_params();
    for (auto& q : strong) q.gamma_d = 1.4;
    const auto tip_hi = dyn::tipping_experiment(strong, dyn::symmetric_initial(), 0.01);
    auto weak = dyn::symmetric_params();
    for (auto& q : weak) q.gamma_d = 0.8;
    const auto tip_lo = dyn::tipping_experiment(weak, dyn::symmetric_initial(), 0.01);
    const bool a3_ok = tip_hi.share_ratio > 3.0 && tip_lo.share_ratio < 1.5;

    const double secs = seconds_since(t0);
    const bool ok = a1.all_ok && a4_ok && b6_ok && a3_ok && secs < 300.0;
    std::ostringstream b6s;
    for (double e : b6) b6s << ' ' << fmt(e, 2);
    line(7, ok,
         "A1 " + std::to_string(a1_ok) + "/27 grid points; A4 |e_sub-e**| = " +
             fmt(std::abs(a4.e_subsidized - a4.e_social), 3) + " <= 0.01 with s* = " +
             fmt(a4.s_star, 1) + "; B6 e*(lambda):" + b6s.str() +
             " non-increasing; A3 ratios " + fmt(tip_hi.share_ratio, 1) + " > 3 and " +
             fmt(tip_lo.share_ratio, 2) + " < 1.5; " + fmt(secs, 0) + " s < 300 s");
}

// ----------------------------------------------------------- criteria 8 and 9
void criterion_abm() {
    stats::CompareConfig cfg;
    cfg.reps = 100;
    cfg.base_seed = rng::default_seed;
    cfg.threads = 2;
    cfg.base.n_users = 2000;
    cfg.base.steps = 20;

    const auto t0 = std::chrono::steady_clock::now();
    const auto first = stats::mc_compare(cfg);
    const double secs = seconds_since(t0);

    std::ostringstream agg1, eff1;
    stats::write_aggregate_csv(agg1, first, "acceptance");
    stats::write_effects_csv(eff1, first, "acceptance");

    const auto second = stats::mc_compare(cfg);
    std::ostringstream agg2, eff2;
    stats::write_aggregate_csv(agg2, second, "acceptance");
    stats::write_effects_csv(eff2, second, "acceptance");

    const bool identical = agg1.str() == agg2.str() && eff1.str() == eff2.str();
    const bool ok8 = identical && secs < 600.0;
    line(8, ok8,
         "abm compare at reps=100/users=2000/steps=20 in " + fmt(secs, 1) +
             " s < 600 s; identical base seed reproduces the CSVs bit-for-bit");

    // criterion 9: ordinal policy effects from the same experiment
    auto d_of = [&](const char* metric, abm::Scenario a) {
        return stats::cohens_d(first.samples.at(a).at(metric),
                               first.samples.at(abm::Scenario::S0).at(metric));
    };
    const double d_w_s4 = d_of("welfare", abm::Scenario::S4);
    const double d_w_s2 = d_of("welfare", abm::Scenario::S2);
    const double d_pgi_s1 = d_of("avg_pgi", abm::Scenario::S1);

    const double cv_s0 = stats::cv(first.samples.at(abm::Scenario::S0).at("welfare"));
    const double cv_s4 = stats::cv(first.samples.at(abm::Scenario::S4).at("welfare"));

    const double innov_s0 = stats::mean(first.samples.at(abm::Scenario::S0).at("innovation"));
    double worst_innov = 0;
    for (const auto sc : first.scenarios) {
        const double rel = std::abs(stats::mean(first.samples.at(sc).at("innovation")) -
                                    innov_s0) /
                           innov_s0;
        worst_innov = std::max(worst_innov, rel);
    }

    // paired-seed antitrust comparison
    int s3_below = 0;
    for (int r = 0; r < 100; ++r) {
        abm::SimConfig c0 = cfg.base;
        c0.scenario = abm::Scenario::S0;
        c0.seed = rng::hash64(cfg.base_seed, 999, std::uint64_t(r));
        abm::SimConfig c3 = c0;
        c3.scenario = abm::Scenario::S3;
        const double h0 = abm::run_scenario(c0).terminal().hhi;
        const double h3 = abm::run_scenario(c3).terminal().hhi;
        if (h3 <= h0 + 1e-12) ++s3_below;
    }

    const bool ok9 = d_w_s4 > 1.0 && d_w_s2 > 1.0 && d_pgi_s1 > 1.0 && s3_below >= 90 &&
                     cv_s4 < cv_s0 && worst_innov < 0.10;
    line(9, ok9,
         "welfare d(S4)=" + fmt(d_w_s4, 2) + " and d(S2)=" + fmt(d_w_s2, 2) +
             " both > 1; avg-PGI d(S1)=" + fmt(d_pgi_s1, 2) + " > 1; S3 HHI <= S0 in " +
             std::to_string(s3_below) + "/100 paired seeds; welfare CV S4 " + fmt(cv_s4, 4) +
             " < S0 " + fmt(cv_s0, 4) + "; innovation within " + fmt(100 * worst_innov, 1) +
             "% of S0 (< 10%)");
}

// --------------------------------------------------------------- criterion 10
void criterion_stats() {
    bool ok = true;

    const std::vector<double> a{2, 4, 6, 8}, b{1, 3, 5, 7};
    ok = ok && std::abs(stats::cohens_d(a, b) - 0.3872983346207417) <= 1e-9;

    const std::vector<double> two{0.0, 2.0};
    const auto [lo, hi] = stats::ci95(two);
    ok = ok && std::abs(lo - (-0.96)) <= 1e-9 && std::abs(hi - 2.96) <= 1e-9;

    const std::vector<double> cvx{9, 11};
    ok = ok && std::abs(stats::cv(cvx) - 0.1414213562373095) <= 1e-9;

    const std::vector<double> sym{-2, -1, 0, 1, 2, -2, -1, 0, 1, 2};
    const auto shape = stats::shape_stats(sym);
    ok = ok && std::abs(shape.skewness) <= 1e-9 && std::abs(shape.kurtosis - 1.7) <= 1e-9 &&
         std::abs(shape.jarque_bera - 0.7041666666666667) <= 1e-9 &&
         std::abs(shape.p_value - 0.7032215177413866) <= 1e-9;

    // distribution checks on synthetic samples
    rng::Stream s = rng::stream_for(1234, 9);
    std::vector<double> expo(10000), norm;
    for (auto& x : expo) x = -std::log(std::max(1.0 - s.next_unit(), 1e-300));
    while (norm.size() < 10000) {
        const double u1 = std::max(s.next_unit(), 1e-300);
        const double u2 = s.next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        norm.push_back(r * std::cos(2 * M_PI * u2));
        norm.push_back(r * std::sin(2 * M_PI * u2));
    }
    const double p_expo = stats::shape_stats(expo).p_value;
    const double p_norm = stats::shape_stats(norm).p_value;
    ok = ok && p_expo < 0.001 && p_norm > 0.01;

    line(10, ok,
         "hand fixtures within 1e-9; JB p_expo = " + fmt(p_expo, 6) +
             " < 0.001 and p_norm = " + fmt(p_norm, 3) + " > 0.01");
}

} // namespace

int main() {
    std::printf("acceptance suite (%s backend)\n", kernels::active().name);
    criterion_ranking();
    criterion_case();
    criterion_gap();
    criterion_sensitivity();
    criterion_ces();
    criterion_ode();
    criterion_propositions();
    criterion_abm();
    criterion_stats();
    std::printf("%s: %d/10 criteria passed\n", failures == 0 ? "SUCCESS" : "FAILURE",
                10 - failures);
    return failures;
}
