#pragma once

#include "pglab/pgi.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pglab::dyn {

// Continuous-time oligopoly of openness choice. Each firm accumulates
// algorithmic, data and compute capital, users, reputation and externality
// stocks; excludability e and the investment flows are constant controls
// over a run.
struct FirmParams {
    // CES technology aggregation
    double omega_a = 1.0 / 3.0, omega_d = 1.0 / 3.0, omega_c = 1.0 / 3.0;
    double rho_t = 0.5;
    // algorithmic capital: own R&D plus spillover absorption scaled by openness
    double phi_a = 0.4, beta_a = 0.5, lambda_a = 0.05, delta_a = 0.08;
    // data capital fed by the user base
    double phi_d = 0.4, gamma_d = 1.0, delta_d = 0.35;
    // compute capital with exogenous progress
    double g_c = 0.01, phi_c = 0.8, delta_c = 0.06;
    // user-base adjustment toward the logit demand level
    double lambda_q = 0.6;
    // reputation: word of mouth plus community sentiment toward openness
    double phi_r = 0.02, psi_r = 0.2, delta_r = 0.1;
    // positive externalities, superlinear in openness
    double kappa_pos = 0.08, eta = 1.5, delta_pos = 0.05;
    // negative externalities, superlinear in market share, offset by safety
    double kappa_neg = 0.1, zeta = 1.5, xi = 0.05, delta_neg = 0.05;
    double safety = 0.2;
    double discount_rate = 0.05;
    double price_slope = 3.0;  // P(e) = price_slope * e
    double market_size = 10.0;
    double logit_scale = 2.0;
    double cost_algo = 0.1, cost_compute = 0.1; // investment flow costs

    void validate() const;
};

struct FirmState {
    double t_a = 1, t_d = 1, t_c = 1;
    double q = 5;
    double rep = 0.5;
    double x_pos = 0.1, x_neg = 0.1;
    double e = 0.5;        // excludability in [0,1], constant policy
    double i_a = 0.5, i_c = 0.5; // investment flows, constant

    void validate() const;
};

struct Rates {
    double t_a = 0, t_d = 0, t_c = 0, q = 0, rep = 0, x_pos = 0, x_neg = 0;
};

// [omega_a*t_a^rho + omega_d*t_d^rho + omega_c*t_c^rho]^(1/rho)
double tech_aggregate(double t_a, double t_d, double t_c, const FirmParams&);

// sum over j != i of (1 - e_j) * t_a_j
double spillover_pool(std::span<const FirmState>, std::size_t i);

// Logit market shares over representative utilities u_j = tech_j - p1*e_j.
std::vector<double> demand_shares(std::span<const FirmState>, std::span<const FirmParams>);

// Desired user base: market_size * logit share of firm i.
double user_demand(std::size_t i, std::span<const FirmState>, std::span<const FirmParams>);

// The seven accumulation rates per firm. The negative-externality rate is
// floored at the x_neg = 0 boundary so the stock cannot be driven below zero;
// the market-share term is defined as 0 when total usage is zero.
std::vector<Rates> derivatives(std::span<const FirmState>, std::span<const FirmParams>);

struct Trajectory {
    std::vector<double> times;
    // states[step][firm]; controls (e, i_a, i_c) ride along unchanged
    std::vector<std::vector<FirmState>> states;
    std::vector<std::vector<pgi::DimensionScores>> pgi_dims; // theoretical variant
    std::vector<double> welfare_flow; // CS + total profit + net externality stock
    long clamp_events = 0;

    const std::vector<FirmState>& terminal() const { return states.back(); }
};

// Classical fixed-step RK4. The negative-externality stock is floored at
// zero (its drain term can legitimately exhaust it); any other stock crossing
// zero is clamped and counted as an event. A stock above 1e12 aborts with the
// timestamp; when `partial_on_failure` is given, the steps recorded before
// the abort are copied there so callers can dump the trajectory.
Trajectory integrate(std::vector<FirmState> initial, std::span<const FirmParams>,
                     double t_end, double h, Trajectory* partial_on_failure = nullptr);

// Theoretical dimension triple at a state: capacity proxied by compute
// capital, openness 1-e, externality balance (0 when both stocks are zero).
pgi::DimensionScores pgi_from_state(const FirmState&, double market_total_q);

struct ValueBreakdown {
    double value = 0;      // revenue_pv - cost_pv
    double revenue_pv = 0; // discounted price_slope * e * q
    double cost_pv = 0;    // discounted investment outlays
};

// Discounted profit of one firm along a trajectory (trapezoid on the grid).
ValueBreakdown discounted_profit(const Trajectory&, std::span<const FirmParams>,
                                 std::size_t firm);

// Integrates with initial[firm].e = e and evaluates the discounted profit.
ValueBreakdown firm_value(std::span<const FirmParams>, std::span<const FirmState> initial,
                          std::size_t firm, double e, double t_end, double h);

struct WelfareWeights {
    double cs = 1.0;  // consumer surplus
    double ps = 1.0;  // producer surplus (all firms)
    double ext = 1.0; // net externality stock
};

struct WelfareBreakdown {
    double total = 0;
    double cs_pv = 0;
    double ps_pv = 0; // the target firm's own discounted profit
    double xpos_pv = 0;
    double xneg_pv = 0;
};

// Social objective for the planner choosing firm `firm`'s excludability:
// w.ps * (that firm's profit) + w.cs * CS + w.ext * (market X+ - X-), all
// discounted. With w.cs = w.ext = 0 it coincides with the private objective.
WelfareBreakdown discounted_welfare(const Trajectory&, std::span<const FirmParams>,
                                    std::size_t firm, const WelfareWeights&);

struct SweepPoint {
    double e = 0;
    ValueBreakdown private_value;
    WelfareBreakdown welfare;
};

// One trajectory per grid value of firm `firm`'s excludability; both the
// firm's objective and social welfare are evaluated on each trajectory.
std::vector<SweepPoint> sweep_excludability(std::span<const FirmParams>,
                                            std::span<const FirmState> initial,
                                            std::size_t firm, const WelfareWeights&,
                                            double grid_step, double t_end, double h);

struct OptimumE {
    double e = 0;
    double objective = 0;
};

// Exhaustive grid argmax of the firm's discounted profit; ties take the
// smaller e.
OptimumE optimize_excludability_private(std::span<const FirmParams>,
                                        std::span<const FirmState> initial,
                                        std::size_t firm = 0, double grid_step = 0.01,
                                        double t_end = 40.0, double h = 0.01);

// Same grid, social objective w.ps*PS + w.cs*CS + w.ext*(X+ - X-).
OptimumE optimize_excludability_social(std::span<const FirmParams>,
                                       std::span<const FirmState> initial,
                                       std::size_t firm = 0,
                                       const WelfareWeights& = {},
                                       double grid_step = 0.01, double t_end = 40.0,
                                       double h = 0.01);

struct MarketScenario {
    std::string label;
    std::vector<FirmParams> params;
    std::vector<FirmState> initial;
};

struct MarketFailurePoint {
    std::string label;
    double e_private = 0;
    double e_social = 0;
    double pgi_private = 0; // composite theoretical PGI at trajectory end
    double pgi_social = 0;
    double pgi_gap = 0;     // social - private
    bool ok = false;        // e_private >= e_social and gap >= 0
};

struct MarketFailureReport {
    std::vector<MarketFailurePoint> points;
    bool all_ok = true;
};

MarketFailureReport verify_market_failure(std::span<const MarketScenario>,
                                          const WelfareWeights& = {},
                                          double grid_step = 0.01, double t_end = 40.0,
                                          double h = 0.01);

struct SubsidyResult {
    double s_star = 0;       // marginal uninternalized social benefit at e*
    bool boundary = false;   // e* on the grid boundary (one-sided difference)
    double e_private = 0;
    double e_social = 0;
    double e_subsidized = 0; // argmax of profit + s_star*(1-e)
};

SubsidyResult pigouvian_subsidy(std::span<const FirmParams>,
                                std::span<const FirmState> initial,
                                std::size_t firm = 0, const WelfareWeights& = {},
                                double grid_step = 0.01, double t_end = 40.0,
                                double h = 0.01);

// e* of firm `firm` as the industry-wide spillover absorption rate sweeps
// through `lambdas` (applied to every firm).
std::vector<double> comparative_static_lambda_a(std::vector<FirmParams>,
                                                std::span<const FirmState> initial,
                                                std::size_t firm,
                                                std::span<const double> lambdas,
                                                double grid_step = 0.01,
                                                double t_end = 40.0, double h = 0.01);

struct DuopolyResult {
    double e1 = 0, e2 = 0;
    bool converged = false;
    bool separating = false; // |e1 - e2| > 0.05 at the fixed point
    int iterations = 0;
    std::vector<std::pair<double, double>> cycle; // populated when a limit cycle is hit
};

// Alternating best response on the excludability grid, at most `max_iter`
// rounds; detects revisited profiles as limit cycles.
DuopolyResult duopoly_equilibrium(std::span<const FirmParams>,
                                  std::span<const FirmState> initial,
                                  double grid_step = 0.01, double t_end = 40.0,
                                  double h = 0.01, int max_iter = 200);

struct TippingResult {
    double share_ratio = 0; // terminal q of the boosted firm over the dented firm
    double q_high = 0, q_low = 0;
};

// Two symmetric firms started at q0*(1 +- eps_frac).
TippingResult tipping_experiment(std::span<const FirmParams>,
                                 std::span<const FirmState> symmetric_initial,
                                 double eps_frac, double t_end = 40.0, double h = 0.01);

struct GradientWeights {
    double cs = 1.0, xpos = 1.0, xneg = 1.0;
};

struct WelfareGradient {
    bool defined = false; // PGI locally strictly monotone in e
    double cs_term = 0;   // w_cs * dCS/dPGI
    double xpos_term = 0; // w_xp * dX+/dPGI
    double xneg_term = 0; // -w_xn * dX-/dPGI
    double total = 0;
};

// Finite-difference decomposition of dW/dPGI through the excludability
// channel, step 0.01 in e around the firm's current policy.
WelfareGradient welfare_pgi_gradient(std::span<const FirmParams>,
                                     std::span<const FirmState> initial,
                                     std::size_t firm = 0, const GradientWeights& = {},
                                     double t_end = 40.0, double h = 0.01);

// Intertemporal arbitrage-condition residual at a state, with caller-supplied
// shadow prices: dpi/dE - sum_k lambda_k * |d(kdot)/dE| for k in {Q, T_A, R}.
double arbitrage_residual(std::span<const FirmState>, std::span<const FirmParams>,
                          std::size_t firm, double lambda_q_price, double lambda_t_price,
                          double lambda_r_price);

// Bundled duopoly calibration: firm 0 is a challenger facing an incumbent
// with a persistently larger algorithmic stock, so spillover absorption has
// private value for the optimizing firm.
std::vector<FirmParams> baseline_params();
std::vector<FirmState> baseline_initial();

// Twin-firm variant (both firms identical to the challenger, equal initial
// user split) for tipping and equilibrium experiments.
std::vector<FirmParams> symmetric_params();
std::vector<FirmState> symmetric_initial();

// 27 scenarios varying spillover absorption, positive-externality intensity
// and the price slope around the baseline.
std::vector<MarketScenario> baseline_grid27();

struct Calibration {
    std::vector<FirmParams> params;
    std::vector<FirmState> initial;
};

// Key-value calibration format: optional [defaults] section applied to all
// firms, then one [firm N] section per firm.
Calibration load_calibration(const std::string& path);
Calibration parse_calibration(std::istream&, const std::string& origin);

void write_trajectory_csv(std::ostream&, const Trajectory&,
                          const std::string& header_comment = "");

} // namespace pglab::dyn
