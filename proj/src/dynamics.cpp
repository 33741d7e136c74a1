#include "pglab/dynamics.hpp"

#include "pglab/config.hpp"
#include "pglab/csv.hpp"
#include "pglab/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace pglab::dyn {

namespace {

double pos_pow(double base, double exponent) {
    // stocks can dip epsilon-negative inside an RK stage; treat as zero
    return std::pow(std::max(base, 0.0), exponent);
}

void require(bool cond, const char* msg) {
    if (!cond) throw input_error(msg);
}

} // namespace

void FirmParams::validate() const {
    require(std::abs(omega_a + omega_d + omega_c - 1.0) < 1e-9, "CES weights must sum to 1");
    require(omega_a >= 0 && omega_d >= 0 && omega_c >= 0, "CES weights must be >= 0");
    require(rho_t != 0.0, "rho_t must be nonzero");
    require(beta_a > 0.0 && beta_a < 1.0, "beta_a must lie in (0,1)");
    require(delta_a > 0 && delta_d > 0 && delta_c > 0 && delta_r > 0 && delta_pos > 0 &&
                delta_neg > 0,
            "decay rates must be positive");
    require(phi_a >= 0 && phi_d >= 0 && phi_c >= 0 && phi_r >= 0 && psi_r >= 0,
            "accumulation coefficients must be >= 0");
    require(lambda_a >= 0 && lambda_q >= 0, "adjustment speeds must be >= 0");
    require(gamma_d > 0 && eta > 0 && zeta > 0, "exponents must be positive");
    require(kappa_pos >= 0 && kappa_neg >= 0 && xi >= 0, "externality coefficients must be >= 0");
    require(safety >= 0 && safety <= 1, "safety must lie in [0,1]");
    require(discount_rate > 0, "discount rate must be positive");
    require(price_slope >= 0, "price slope must be >= 0");
    require(market_size > 0, "market size must be positive");
    require(logit_scale > 0, "logit scale must be positive");
    require(cost_algo >= 0 && cost_compute >= 0, "investment costs must be >= 0");
}

void FirmState::validate() const {
    for (double v : {t_a, t_d, t_c, q, rep, x_pos, x_neg})
        require(std::isfinite(v) && v >= 0, "stocks must be finite and >= 0");
    require(e >= 0 && e <= 1, "excludability must lie in [0,1]");
    require(i_a >= 0 && i_c >= 0, "investment flows must be >= 0");
}

double tech_aggregate(double t_a, double t_d, double t_c, const FirmParams& p) {
    if (p.rho_t == 0.0)
        throw input_error("tech_aggregate: rho_t must be nonzero");
    if (p.rho_t < 0 && (t_a <= 0 || t_d <= 0 || t_c <= 0))
        throw numeric_error("tech_aggregate: zero stock with negative rho_t");
    const double s = p.omega_a * pos_pow(t_a, p.rho_t) + p.omega_d * pos_pow(t_d, p.rho_t) +
                     p.omega_c * pos_pow(t_c, p.rho_t);
    return std::pow(s, 1.0 / p.rho_t);
}

double spillover_pool(std::span<const FirmState> states, std::size_t i) {
    if (i >= states.size())
        throw input_error("spillover_pool: firm index out of range");
    double s = 0;
    for (std::size_t j = 0; j < states.size(); ++j)
        if (j != i) s += (1.0 - states[j].e) * states[j].t_a;
    return s;
}

std::vector<double> demand_shares(std::span<const FirmState> states,
                                  std::span<const FirmParams> params) {
    if (states.empty() || states.size() != params.size())
        throw input_error("demand_shares: need one parameter set per firm");
    // market-level fields (logit_scale) are read from firm 0
    const double mu = params[0].logit_scale;
    std::vector<double> u(states.size());
    for (std::size_t j = 0; j < states.size(); ++j) {
        const double tech = tech_aggregate(states[j].t_a, states[j].t_d, states[j].t_c, params[j]);
        u[j] = tech - params[j].price_slope * states[j].e;
    }
    const double m = *std::max_element(u.begin(), u.end());
    double total = 0;
    for (double& v : u) {
        v = std::exp((v - m) / mu);
        total += v;
    }
    for (double& v : u) v /= total;
    return u;
}

double user_demand(std::size_t i, std::span<const FirmState> states,
                   std::span<const FirmParams> params) {
    const auto shares = demand_shares(states, params);
    if (i >= shares.size())
        throw input_error("user_demand: firm index out of range");
    return params[0].market_size * shares[i];
}

std::vector<Rates> derivatives(std::span<const FirmState> states,
                               std::span<const FirmParams> params) {
    if (states.empty() || states.size() != params.size())
        throw input_error("derivatives: need one parameter set per firm");
    const auto shares = demand_shares(states, params);

    double total_q = 0;
    for (const auto& s : states) total_q += std::max(s.q, 0.0);

    std::vector<Rates> rates(states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        const FirmState& s = states[i];
        const FirmParams& p = params[i];
        const double open = std::max(1.0 - s.e, 0.0);
        const double tech = tech_aggregate(s.t_a, s.t_d, s.t_c, p);
        Rates& r = rates[i];

        r.t_a = p.phi_a * pos_pow(s.i_a, p.beta_a) * pos_pow(s.t_a, 1.0 - p.beta_a) +
                p.lambda_a * open * spillover_pool(states, i) - p.delta_a * s.t_a;
        r.t_d = p.phi_d * pos_pow(s.q, p.gamma_d) - p.delta_d * s.t_d;
        r.t_c = p.g_c * s.t_c + p.phi_c * s.i_c - p.delta_c * s.t_c;
        r.q = p.lambda_q * (p.market_size * shares[i] - s.q);
        r.rep = p.phi_r * s.q + p.psi_r * open - p.delta_r * s.rep;
        r.x_pos = p.kappa_pos * pos_pow(open, p.eta) * tech * s.q - p.delta_pos * s.x_pos;

        const double usage_share = total_q > 0 ? std::max(s.q, 0.0) / total_q : 0.0;
        r.x_neg = p.kappa_neg * pos_pow(usage_share, p.zeta) * s.q - p.xi * p.safety -
                  p.delta_neg * s.x_neg;
        // the stock cannot be pushed through zero
        if (s.x_neg <= 0 && r.x_neg < 0) r.x_neg = 0;

        for (double v : {r.t_a, r.t_d, r.t_c, r.q, r.rep, r.x_pos, r.x_neg})
            if (!std::isfinite(v))
                throw numeric_error("derivatives: non-finite rate for firm " +
                                    std::to_string(i));
    }
    return rates;
}

pgi::DimensionScores pgi_from_state(const FirmState& s, double market_total_q) {
    (void)market_total_q; // congestion is own-load based; kept for interface parity
    pgi::DimensionScores d;
    d.variant = pgi::Variant::theoretical;
    const double cap = s.t_c; // capacity threshold proxied by compute capital
    d.c_q = (cap + s.q) > 0 ? cap / (cap + s.q) : 0.0;
    d.c_e = 1.0 - s.e;
    d.c_x = (s.x_pos + s.x_neg) > 0 ? (s.x_pos - s.x_neg) / (s.x_pos + s.x_neg) : 0.0;
    return d;
}

namespace {

constexpr double divergence_limit = 1e12;

struct Flow {
    double cs = 0;
    double profit_total = 0;
    double net_ext = 0;
};

Flow instantaneous_flow(std::span<const FirmState> states, std::span<const FirmParams> params) {
    Flow f;
    const double mu = params[0].logit_scale;
    const double market = params[0].market_size;
    double m = -1e300;
    std::vector<double> u(states.size());
    for (std::size_t j = 0; j < states.size(); ++j) {
        const double tech = tech_aggregate(states[j].t_a, states[j].t_d, states[j].t_c, params[j]);
        u[j] = tech - params[j].price_slope * states[j].e;
        m = std::max(m, u[j]);
    }
    double lse = 0;
    for (double v : u) lse += std::exp((v - m) / mu);
    f.cs = market * m + mu * market * std::log(lse);
    for (std::size_t j = 0; j < states.size(); ++j) {
        f.profit_total += params[j].price_slope * states[j].e * states[j].q -
                          params[j].cost_algo * states[j].i_a -
                          params[j].cost_compute * states[j].i_c;
        f.net_ext += states[j].x_pos - states[j].x_neg;
    }
    return f;
}

std::vector<FirmState> staged(const std::vector<FirmState>& y, const std::vector<Rates>& k,
                              double factor) {
    std::vector<FirmState> out = y;
    for (std::size_t i = 0; i < y.size(); ++i) {
        out[i].t_a = y[i].t_a + factor * k[i].t_a;
        out[i].t_d = y[i].t_d + factor * k[i].t_d;
        out[i].t_c = y[i].t_c + factor * k[i].t_c;
        out[i].q = y[i].q + factor * k[i].q;
        out[i].rep = y[i].rep + factor * k[i].rep;
        out[i].x_pos = y[i].x_pos + factor * k[i].x_pos;
        out[i].x_neg = y[i].x_neg + factor * k[i].x_neg;
    }
    return out;
}

} // namespace

Trajectory integrate(std::vector<FirmState> initial, std::span<const FirmParams> params,
                     double t_end, double h, Trajectory* partial_on_failure) {
    if (!(h > 0) || t_end < h)
        throw input_error("integrate: need h > 0 and t_end >= h");
    if (initial.size() != params.size() || initial.empty())
        throw input_error("integrate: need one parameter set per firm");
    for (const auto& p : params) p.validate();
    for (const auto& s : initial) s.validate();

    const long n_steps = std::lround(t_end / h);
    Trajectory traj;
    traj.times.reserve(std::size_t(n_steps) + 1);
    traj.states.reserve(std::size_t(n_steps) + 1);

    auto record = [&](double t, const std::vector<FirmState>& y) {
        traj.times.push_back(t);
        traj.states.push_back(y);
        std::vector<pgi::DimensionScores> dims(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            dims[i] = pgi_from_state(y[i], 0);
        traj.pgi_dims.push_back(std::move(dims));
        const Flow f = instantaneous_flow(y, params);
        traj.welfare_flow.push_back(f.cs + f.profit_total + f.net_ext);
    };

    std::vector<FirmState> y = std::move(initial);
    record(0.0, y);
    for (long step = 1; step <= n_steps; ++step) {
        const auto k1 = derivatives(y, params);
        const auto k2 = derivatives(staged(y, k1, h / 2), params);
        const auto k3 = derivatives(staged(y, k2, h / 2), params);
        const auto k4 = derivatives(staged(y, k3, h), params);
        for (std::size_t i = 0; i < y.size(); ++i) {
            auto blend = [&](double FirmState::* f, double Rates::* g) {
                y[i].*f += h / 6.0 * (k1[i].*g + 2.0 * k2[i].*g + 2.0 * k3[i].*g + k4[i].*g);
            };
            blend(&FirmState::t_a, &Rates::t_a);
            blend(&FirmState::t_d, &Rates::t_d);
            blend(&FirmState::t_c, &Rates::t_c);
            blend(&FirmState::q, &Rates::q);
            blend(&FirmState::rep, &Rates::rep);
            blend(&FirmState::x_pos, &Rates::x_pos);
            blend(&FirmState::x_neg, &Rates::x_neg);
        }
        const double t = double(step) * h;
        for (auto& s : y) {
            for (double FirmState::* f :
                 {&FirmState::t_a, &FirmState::t_d, &FirmState::t_c, &FirmState::q,
                  &FirmState::rep, &FirmState::x_pos, &FirmState::x_neg}) {
                double& v = s.*f;
                if (!std::isfinite(v) || v > divergence_limit) {
                    if (partial_on_failure) *partial_on_failure = std::move(traj);
                    throw numeric_error("integrate: divergence at t = " + std::to_string(t));
                }
                if (v < 0) {
                    // the safety drain may exhaust x_neg; that floor is part
                    // of the model, not an integration fault
                    if (f != &FirmState::x_neg) ++traj.clamp_events;
                    v = 0;
                }
            }
        }
        record(t, y);
    }
    return traj;
}

ValueBreakdown discounted_profit(const Trajectory& traj, std::span<const FirmParams> params,
                                 std::size_t firm) {
    if (firm >= params.size())
        throw input_error("discounted_profit: firm index out of range");
    const double r = params[firm].discount_rate;
    ValueBreakdown out;
    const std::size_t n = traj.times.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = traj.times[k];
        const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        const double h = k + 1 < n ? traj.times[k + 1] - traj.times[k]
                                   : traj.times[k] - traj.times[k - 1];
        const double disc = w * h * std::exp(-r * t);
        const FirmState& s = traj.states[k][firm];
        out.revenue_pv += disc * params[firm].price_slope * s.e * s.q;
        out.cost_pv += disc * (params[firm].cost_algo * s.i_a +
                               params[firm].cost_compute * s.i_c);
    }
    out.value = out.revenue_pv - out.cost_pv;
    return out;
}

ValueBreakdown firm_value(std::span<const FirmParams> params,
                          std::span<const FirmState> initial, std::size_t firm, double e,
                          double t_end, double h) {
    if (firm >= initial.size())
        throw input_error("firm_value: firm index out of range");
    if (e < 0 || e > 1)
        throw input_error("firm_value: e must lie in [0,1]");
    std::vector<FirmState> y(initial.begin(), initial.end());
    y[firm].e = e;
    const Trajectory traj = integrate(std::move(y), params, t_end, h);
    return discounted_profit(traj, params, firm);
}

WelfareBreakdown discounted_welfare(const Trajectory& traj, std::span<const FirmParams> params,
                                    std::size_t firm, const WelfareWeights& w) {
    if (firm >= params.size())
        throw input_error("discounted_welfare: firm index out of range");
    WelfareBreakdown out;
    const double r = params[0].discount_rate;
    const std::size_t n = traj.times.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = traj.times[k];
        const double wt = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        const double h = k + 1 < n ? traj.times[k + 1] - traj.times[k]
                                   : traj.times[k] - traj.times[k - 1];
        const double disc = wt * h * std::exp(-r * t);
        const Flow f = instantaneous_flow(traj.states[k], params);
        const FirmState& s0 = traj.states[k][firm];
        out.cs_pv += disc * f.cs;
        out.ps_pv += disc * (params[firm].price_slope * s0.e * s0.q -
                             params[firm].cost_algo * s0.i_a -
                             params[firm].cost_compute * s0.i_c);
        double xpos = 0, xneg = 0;
        for (const auto& s : traj.states[k]) {
            xpos += s.x_pos;
            xneg += s.x_neg;
        }
        out.xpos_pv += disc * xpos;
        out.xneg_pv += disc * xneg;
    }
    out.total = w.cs * out.cs_pv + w.ps * out.ps_pv + w.ext * (out.xpos_pv - out.xneg_pv);
    return out;
}

namespace {

long grid_points(double grid_step) {
    if (!(grid_step > 0) || grid_step > 1)
        throw input_error("grid step must lie in (0,1]");
    const long n = std::lround(1.0 / grid_step);
    if (std::abs(double(n) * grid_step - 1.0) > 1e-9)
        throw input_error("grid step must divide 1 evenly");
    return n;
}

} // namespace

std::vector<SweepPoint> sweep_excludability(std::span<const FirmParams> params,
                                            std::span<const FirmState> initial,
                                            std::size_t firm, const WelfareWeights& w,
                                            double grid_step, double t_end, double h) {
    if (firm >= initial.size())
        throw input_error("sweep_excludability: firm index out of range");
    const long n = grid_points(grid_step);
    std::vector<SweepPoint> out;
    out.reserve(std::size_t(n) + 1);
    for (long i = 0; i <= n; ++i) {
        const double e = double(i) / double(n);
        std::vector<FirmState> y(initial.begin(), initial.end());
        y[firm].e = e;
        const Trajectory traj = integrate(std::move(y), params, t_end, h);
        SweepPoint p;
        p.e = e;
        p.private_value = discounted_profit(traj, params, firm);
        p.welfare = discounted_welfare(traj, params, firm, w);
        out.push_back(p);
    }
    return out;
}

OptimumE optimize_excludability_private(std::span<const FirmParams> params,
                                        std::span<const FirmState> initial, std::size_t firm,
                                        double grid_step, double t_end, double h) {
    const auto sweep = sweep_excludability(params, initial, firm, {}, grid_step, t_end, h);
    OptimumE best{sweep.front().e, sweep.front().private_value.value};
    for (const auto& p : sweep)
        if (p.private_value.value > best.objective) best = {p.e, p.private_value.value};
    return best;
}

OptimumE optimize_excludability_social(std::span<const FirmParams> params,
                                       std::span<const FirmState> initial, std::size_t firm,
                                       const WelfareWeights& w, double grid_step,
                                       double t_end, double h) {
    const auto sweep = sweep_excludability(params, initial, firm, w, grid_step, t_end, h);
    OptimumE best{sweep.front().e, sweep.front().welfare.total};
    for (const auto& p : sweep)
        if (p.welfare.total > best.objective) best = {p.e, p.welfare.total};
    return best;
}

namespace {

double terminal_pgi(std::span<const FirmParams> params, std::span<const FirmState> initial,
                    std::size_t firm, double e, double t_end, double h) {
    std::vector<FirmState> y(initial.begin(), initial.end());
    y[firm].e = e;
    const Trajectory traj = integrate(std::move(y), params, t_end, h);
    return pgi::pgi_linear(traj.pgi_dims.back()[firm], pgi::Weights::equal());
}

} // namespace

MarketFailureReport verify_market_failure(std::span<const MarketScenario> scenarios,
                                          const WelfareWeights& w, double grid_step,
                                          double t_end, double h) {
    if (scenarios.empty())
        throw input_error("verify_market_failure: empty scenario grid");
    MarketFailureReport rep;
    for (const auto& sc : scenarios) {
        const auto sweep =
            sweep_excludability(sc.params, sc.initial, 0, w, grid_step, t_end, h);
        MarketFailurePoint pt;
        pt.label = sc.label;
        double best_v = sweep.front().private_value.value;
        double best_w = sweep.front().welfare.total;
        pt.e_private = pt.e_social = sweep.front().e;
        for (const auto& p : sweep) {
            if (p.private_value.value > best_v) {
                best_v = p.private_value.value;
                pt.e_private = p.e;
            }
            if (p.welfare.total > best_w) {
                best_w = p.welfare.total;
                pt.e_social = p.e;
            }
        }
        pt.pgi_private = terminal_pgi(sc.params, sc.initial, 0, pt.e_private, t_end, h);
        pt.pgi_social = terminal_pgi(sc.params, sc.initial, 0, pt.e_social, t_end, h);
        pt.pgi_gap = pt.pgi_social - pt.pgi_private;
        pt.ok = pt.e_private >= pt.e_social && pt.pgi_gap >= -1e-9;
        rep.all_ok = rep.all_ok && pt.ok;
        rep.points.push_back(std::move(pt));
    }
    return rep;
}

SubsidyResult pigouvian_subsidy(std::span<const FirmParams> params,
                                std::span<const FirmState> initial, std::size_t firm,
                                const WelfareWeights& w, double grid_step, double t_end,
                                double h) {
    const auto sweep = sweep_excludability(params, initial, firm, w, grid_step, t_end, h);
    const long n = long(sweep.size()) - 1;

    long i_star = 0;
    for (long i = 0; i <= n; ++i)
        if (sweep[std::size_t(i)].private_value.value >
            sweep[std::size_t(i_star)].private_value.value)
            i_star = i;
    long i_social = 0;
    for (long i = 0; i <= n; ++i)
        if (sweep[std::size_t(i)].welfare.total > sweep[std::size_t(i_social)].welfare.total)
            i_social = i;

    // the part of welfare the firm ignores: consumer surplus plus net externality
    auto csx = [&](long i) {
        const auto& wf = sweep[std::size_t(i)].welfare;
        return w.cs * wf.cs_pv + w.ext * (wf.xpos_pv - wf.xneg_pv);
    };

    SubsidyResult out;
    out.e_private = sweep[std::size_t(i_star)].e;
    out.e_social = sweep[std::size_t(i_social)].e;
    out.boundary = i_star == 0 || i_star == n;
    if (out.boundary) {
        const long j = i_star == 0 ? 1 : n - 1;
        out.s_star = -(csx(std::max(i_star, j)) - csx(std::min(i_star, j))) / grid_step;
    } else {
        out.s_star = -(csx(i_star + 1) - csx(i_star - 1)) / (2.0 * grid_step);
    }

    long i_sub = 0;
    auto subsidized = [&](long i) {
        return sweep[std::size_t(i)].private_value.value +
               out.s_star * (1.0 - sweep[std::size_t(i)].e);
    };
    for (long i = 0; i <= n; ++i)
        if (subsidized(i) > subsidized(i_sub)) i_sub = i;
    out.e_subsidized = sweep[std::size_t(i_sub)].e;
    return out;
}

std::vector<double> comparative_static_lambda_a(std::vector<FirmParams> params,
                                                std::span<const FirmState> initial,
                                                std::size_t firm,
                                                std::span<const double> lambdas,
                                                double grid_step, double t_end, double h) {
    if (lambdas.size() < 2)
        throw input_error("comparative_static_lambda_a: need at least two values");
    std::vector<double> e_stars;
    for (double la : lambdas) {
        for (auto& p : params) p.lambda_a = la;
        e_stars.push_back(
            optimize_excludability_private(params, initial, firm, grid_step, t_end, h).e);
    }
    return e_stars;
}

DuopolyResult duopoly_equilibrium(std::span<const FirmParams> params,
                                  std::span<const FirmState> initial, double grid_step,
                                  double t_end, double h, int max_iter) {
    if (params.size() != 2 || initial.size() != 2)
        throw input_error("duopoly_equilibrium: exactly two firms required");
    DuopolyResult out;
    std::vector<FirmState> state(initial.begin(), initial.end());
    std::vector<std::pair<double, double>> history{{state[0].e, state[1].e}};

    for (int it = 0; it < max_iter; ++it) {
        const double prev0 = state[0].e, prev1 = state[1].e;
        state[0].e = optimize_excludability_private(params, state, 0, grid_step, t_end, h).e;
        state[1].e = optimize_excludability_private(params, state, 1, grid_step, t_end, h).e;
        out.iterations = it + 1;
        const std::pair<double, double> profile{state[0].e, state[1].e};
        if (profile.first == prev0 && profile.second == prev1) {
            out.converged = true;
            break;
        }
        const auto seen = std::find(history.begin(), history.end(), profile);
        if (seen != history.end()) {
            out.cycle.assign(seen, history.end());
            out.cycle.push_back(profile);
            break;
        }
        history.push_back(profile);
    }
    out.e1 = state[0].e;
    out.e2 = state[1].e;
    out.separating = std::abs(out.e1 - out.e2) > 0.05;
    return out;
}

TippingResult tipping_experiment(std::span<const FirmParams> params,
                                 std::span<const FirmState> symmetric_initial,
                                 double eps_frac, double t_end, double h) {
    if (params.size() != 2 || symmetric_initial.size() != 2)
        throw input_error("tipping_experiment: exactly two symmetric firms required");
    if (eps_frac < 0)
        throw input_error("tipping_experiment: eps_frac must be >= 0");
    std::vector<FirmState> y(symmetric_initial.begin(), symmetric_initial.end());
    const double q0 = y[0].q;
    y[0].q = q0 * (1.0 + eps_frac);
    y[1].q = q0 * (1.0 - eps_frac);
    const Trajectory traj = integrate(std::move(y), params, t_end, h);
    TippingResult out;
    out.q_high = traj.terminal()[0].q;
    out.q_low = traj.terminal()[1].q;
    if (out.q_low <= 0)
        throw numeric_error("tipping_experiment: dented firm's user base hit zero");
    out.share_ratio = out.q_high / out.q_low;
    return out;
}

WelfareGradient welfare_pgi_gradient(std::span<const FirmParams> params,
                                     std::span<const FirmState> initial, std::size_t firm,
                                     const GradientWeights& gw, double t_end, double h) {
    if (firm >= initial.size())
        throw input_error("welfare_pgi_gradient: firm index out of range");
    const double e0 = initial[firm].e;
    const double step = 0.01;
    if (e0 < step || e0 > 1.0 - step)
        throw input_error("welfare_pgi_gradient: excludability too close to the boundary");

    struct Eval {
        double pgi, cs, xpos, xneg;
    };
    auto eval = [&](double e) {
        std::vector<FirmState> y(initial.begin(), initial.end());
        y[firm].e = e;
        const Trajectory traj = integrate(std::move(y), params, t_end, h);
        const auto wf = discounted_welfare(traj, params, firm, {});
        return Eval{pgi::pgi_linear(traj.pgi_dims.back()[firm], pgi::Weights::equal()),
                    wf.cs_pv, wf.xpos_pv, wf.xneg_pv};
    };
    const Eval lo = eval(e0 - step);
    const Eval mid = eval(e0);
    const Eval hi = eval(e0 + step);

    WelfareGradient out;
    const double d_pgi = hi.pgi - lo.pgi;
    const double left = mid.pgi - lo.pgi, right = hi.pgi - mid.pgi;
    out.defined = std::abs(d_pgi) > 1e-9 && left * right > 0;
    if (!out.defined) return out;
    out.cs_term = gw.cs * (hi.cs - lo.cs) / d_pgi;
    out.xpos_term = gw.xpos * (hi.xpos - lo.xpos) / d_pgi;
    out.xneg_term = -gw.xneg * (hi.xneg - lo.xneg) / d_pgi;
    out.total = out.cs_term + out.xpos_term + out.xneg_term;
    return out;
}

double arbitrage_residual(std::span<const FirmState> states, std::span<const FirmParams> params,
                          std::size_t firm, double lambda_q_price, double lambda_t_price,
                          double lambda_r_price) {
    if (firm >= states.size())
        throw input_error("arbitrage_residual: firm index out of range");
    const double d = 1e-4;
    auto rates_at = [&](double e) {
        std::vector<FirmState> y(states.begin(), states.end());
        y[firm].e = std::clamp(e, 0.0, 1.0);
        return derivatives(y, params);
    };
    const double e0 = states[firm].e;
    const auto up = rates_at(e0 + d);
    const auto dn = rates_at(e0 - d);
    const double dq = (up[firm].q - dn[firm].q) / (2 * d);
    const double dta = (up[firm].t_a - dn[firm].t_a) / (2 * d);
    const double drep = (up[firm].rep - dn[firm].rep) / (2 * d);
    const double marginal_profit = params[firm].price_slope * states[firm].q;
    return marginal_profit - (lambda_q_price * std::abs(dq) + lambda_t_price * std::abs(dta) +
                              lambda_r_price * std::abs(drep));
}

std::vector<FirmParams> baseline_params() { return {FirmParams{}, FirmParams{}}; }

std::vector<FirmState> baseline_initial() {
    FirmState challenger; // unit stocks, q = 5
    challenger.e = 0.25;  // open entrant near its private optimum
    FirmState incumbent;  // larger algorithmic stock and R&D, half-closed
    incumbent.t_a = 1.5;
    incumbent.i_a = 0.6;
    return {challenger, incumbent};
}

std::vector<FirmParams> symmetric_params() { return {FirmParams{}, FirmParams{}}; }

std::vector<FirmState> symmetric_initial() {
    FirmState s;
    s.q = FirmParams{}.market_size / 2.0;
    return {s, s};
}

std::vector<MarketScenario> baseline_grid27() {
    std::vector<MarketScenario> out;
    for (double la : {0.03, 0.06, 0.10})
        for (double kp : {0.03, 0.06, 0.12})
            for (double p1 : {2.8, 3.2, 3.6}) {
                MarketScenario sc;
                std::ostringstream label;
                label << "lambda_a=" << la << ",kappa_pos=" << kp << ",p1=" << p1;
                sc.label = label.str();
                sc.params = baseline_params();
                for (auto& p : sc.params) {
                    p.lambda_a = la;
                    p.kappa_pos = kp;
                    p.price_slope = p1;
                }
                sc.initial = baseline_initial();
                out.push_back(std::move(sc));
            }
    return out;
}

namespace {

bool apply_param(FirmParams& p, const std::string& key, double v) {
    if (key == "omega_a") p.omega_a = v;
    else if (key == "omega_d") p.omega_d = v;
    else if (key == "omega_c") p.omega_c = v;
    else if (key == "rho_t") p.rho_t = v;
    else if (key == "phi_a") p.phi_a = v;
    else if (key == "beta_a") p.beta_a = v;
    else if (key == "lambda_a") p.lambda_a = v;
    else if (key == "delta_a") p.delta_a = v;
    else if (key == "phi_d") p.phi_d = v;
    else if (key == "gamma_d") p.gamma_d = v;
    else if (key == "delta_d") p.delta_d = v;
    else if (key == "g_c") p.g_c = v;
    else if (key == "phi_c") p.phi_c = v;
    else if (key == "delta_c") p.delta_c = v;
    else if (key == "lambda_q") p.lambda_q = v;
    else if (key == "phi_r") p.phi_r = v;
    else if (key == "psi_r") p.psi_r = v;
    else if (key == "delta_r") p.delta_r = v;
    else if (key == "kappa_pos") p.kappa_pos = v;
    else if (key == "eta") p.eta = v;
    else if (key == "delta_pos") p.delta_pos = v;
    else if (key == "kappa_neg") p.kappa_neg = v;
    else if (key == "zeta") p.zeta = v;
    else if (key == "xi") p.xi = v;
    else if (key == "delta_neg") p.delta_neg = v;
    else if (key == "safety") p.safety = v;
    else if (key == "discount_rate") p.discount_rate = v;
    else if (key == "price_slope") p.price_slope = v;
    else if (key == "market_size") p.market_size = v;
    else if (key == "logit_scale") p.logit_scale = v;
    else if (key == "cost_algo") p.cost_algo = v;
    else if (key == "cost_compute") p.cost_compute = v;
    else return false;
    return true;
}

bool apply_state(FirmState& s, const std::string& key, double v) {
    if (key == "t_a") s.t_a = v;
    else if (key == "t_d") s.t_d = v;
    else if (key == "t_c") s.t_c = v;
    else if (key == "q") s.q = v;
    else if (key == "rep") s.rep = v;
    else if (key == "x_pos") s.x_pos = v;
    else if (key == "x_neg") s.x_neg = v;
    else if (key == "e") s.e = v;
    else if (key == "i_a") s.i_a = v;
    else if (key == "i_c") s.i_c = v;
    else return false;
    return true;
}

} // namespace

Calibration parse_calibration(std::istream& in, const std::string& origin) {
    const config::File file = config::parse(in, origin);
    Calibration cal;
    const config::Section* defaults = nullptr;
    std::vector<const config::Section*> firms;
    for (const auto& sec : file.sections) {
        if (sec.name == "defaults") defaults = &sec;
        else if (sec.name.rfind("firm", 0) == 0) firms.push_back(&sec);
        else
            throw input_error(origin + ": unknown section [" + sec.name + "]");
    }
    if (firms.empty())
        throw input_error(origin + ": no [firm ...] sections");
    for (const auto* fsec : firms) {
        FirmParams p;
        FirmState s;
        auto apply = [&](const config::Section& sec) {
            for (const auto& [key, raw] : sec.values) {
                const double v = csv::parse_number(raw, origin + ": " + key);
                if (!apply_param(p, key, v) && !apply_state(s, key, v))
                    throw input_error(origin + ": unknown calibration key '" + key + "'");
            }
        };
        if (defaults) apply(*defaults);
        apply(*fsec);
        p.validate();
        s.validate();
        cal.params.push_back(p);
        cal.initial.push_back(s);
    }
    return cal;
}

Calibration load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open " + path);
    return parse_calibration(in, path);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          const std::string& header_comment) {
    if (!header_comment.empty())
        out << "# " << header_comment << "\n";
    out << "t,firm_id,t_a,t_d,t_c,q,rep,x_pos,x_neg,e,c_q,c_e,c_x,pgi\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        for (std::size_t i = 0; i < traj.states[k].size(); ++i) {
            const FirmState& s = traj.states[k][i];
            const auto& d = traj.pgi_dims[k][i];
            out << csv::fmt(traj.times[k]) << ',' << i << ',' << csv::fmt(s.t_a) << ','
                << csv::fmt(s.t_d) << ',' << csv::fmt(s.t_c) << ',' << csv::fmt(s.q) << ','
                << csv::fmt(s.rep) << ',' << csv::fmt(s.x_pos) << ',' << csv::fmt(s.x_neg)
                << ',' << csv::fmt(s.e) << ',' << csv::fmt(d.c_q) << ',' << csv::fmt(d.c_e)
                << ',' << csv::fmt(d.c_x) << ','
                << csv::fmt(pgi::pgi_linear(d, pgi::Weights::equal())) << "\n";
        }
    }
}

} // namespace pglab::dyn
