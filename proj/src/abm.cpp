#include "pglab/abm.hpp"

#include "pglab/config.hpp"
#include "pglab/csv.hpp"
#include "pglab/error.hpp"
#include "pglab/kernels.hpp"
#include "pglab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

namespace pglab::abm {

namespace {

// substream tags
constexpr std::uint64_t tag_prefs = 1;
constexpr std::uint64_t tag_init_choice = 2;
constexpr std::uint64_t tag_step_choice = 3;
constexpr std::uint64_t tag_cap_redraw = 4;

constexpr double tech_ceiling = 110.0;

struct SegmentShapes {
    int tech_a, tech_b, price_a, price_b, safety_a, safety_b, loyal_a, loyal_b;
};

// Beta shape parameters per segment (tech, price, safety, loyalty).
constexpr SegmentShapes segment_shapes[n_segments] = {
    {6, 2, 2, 5, 4, 3, 3, 4}, // tech experts
    {2, 5, 6, 2, 2, 4, 4, 3}, // price sensitive
    {3, 3, 3, 4, 6, 2, 5, 2}, // safety priority
    {3, 3, 3, 3, 3, 3, 6, 2}, // brand loyal
    {4, 2, 3, 3, 2, 4, 2, 5}, // early adopters
    {3, 3, 3, 3, 3, 3, 3, 3}, // balanced
};

struct FirmRow {
    const char* name;
    const char* strategy;
    double capital, tech, share, excl, safety, rd;
};

constexpr FirmRow firm_rows[6] = {
    {"OpenAI", "club_good", 10000, 95, 0.35, 0.70, 0.15, 0.12},
    {"Anthropic", "safety_club", 6000, 94, 0.18, 0.60, 0.35, 0.18},
    {"Google", "hybrid", 15000, 96, 0.22, 0.50, 0.25, 0.16},
    {"Alibaba", "hybrid", 8000, 90, 0.12, 0.40, 0.20, 0.16},
    {"Meta", "strong_public", 12000, 92, 0.10, 0.25, 0.15, 0.15},
    {"DeepSeek", "strong_public", 4000, 91, 0.03, 0.20, 0.18, 0.15},
};

double tech_norm(const FirmAgent& f) { return f.tech_level / tech_ceiling; }
double price_norm(const FirmAgent& f) { return 1.0 - f.price; }

// Empirical PGI proxy of one firm: congestion from capacity vs load,
// openness, and a safety/spillover externality balance mapped to [0,1].
double firm_pgi(const FirmAgent& f, double share, const SimConfig& cfg) {
    const double capacity = cfg.capacity_per_million * f.capital;
    const double c_q = (capacity + f.users) > 0 ? capacity / (capacity + double(f.users)) : 0.0;
    const double c_e = 1.0 - f.excludability;
    const double pos = (1.0 - f.excludability) * tech_norm(f);
    const double neg = std::pow(share, cfg.pollution_exponent) * (1.0 - f.safety_investment);
    const double c_x = (pos + neg) > 0 ? (1.0 + (pos - neg) / (pos + neg)) / 2.0 : 0.5;
    return (c_q + c_e + c_x) / 3.0;
}

double pollution_of(const FirmAgent& f, double n_users, const SimConfig& cfg) {
    const double share = n_users > 0 ? double(f.users) / n_users : 0.0;
    return std::pow(share, cfg.pollution_exponent) * double(f.users) *
           (1.0 - f.safety_investment);
}

} // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::S0: return "S0";
        case Scenario::S1: return "S1";
        case Scenario::S2: return "S2";
        case Scenario::S3: return "S3";
        case Scenario::S4: return "S4";
    }
    return "S?";
}

Scenario scenario_from(const std::string& s) {
    if (s == "S0") return Scenario::S0;
    if (s == "S1") return Scenario::S1;
    if (s == "S2") return Scenario::S2;
    if (s == "S3") return Scenario::S3;
    if (s == "S4") return Scenario::S4;
    throw input_error("unknown scenario '" + s + "' (expected S0..S4)");
}

std::string to_string(Segment s) {
    switch (s) {
        case Segment::tech_experts: return "tech_experts";
        case Segment::price_sensitive: return "price_sensitive";
        case Segment::safety_priority: return "safety_priority";
        case Segment::brand_loyal: return "brand_loyal";
        case Segment::early_adopters: return "early_adopters";
        case Segment::balanced: return "balanced";
    }
    return "?";
}

PolicyScenario SimConfig::policy() const {
    PolicyScenario p;
    p.id = scenario;
    switch (scenario) {
        case Scenario::S0: break;
        case Scenario::S1: p.subsidy_rate = subsidy_rate; break;
        case Scenario::S2: p.pollution_tax_rate = pollution_tax_rate; break;
        case Scenario::S3: p.share_cap = share_cap; break;
        case Scenario::S4:
            p.subsidy_rate = subsidy_rate;
            p.pollution_tax_rate = pollution_tax_rate;
            p.share_cap = share_cap;
            break;
    }
    return p;
}

double user_utility(const UserAgent& u, const FirmAgent& f, double network_share,
                    const SimConfig& cfg) {
    // single-lane pass through the same kernels as the batched loop, so both
    // paths agree bit for bit
    const auto& be = kernels::active();
    double out = 0;
    be.blend4(1, &u.tech_savvy, &u.price_sens, &u.safety_pref, &u.brand_loyalty,
              tech_norm(f), price_norm(f), f.safety_investment,
              cfg.network_weight * network_share, &out);
    const std::int32_t provider = u.provider;
    const double bonus = cfg.loyalty_bonus * u.brand_loyalty;
    be.incumbency_adjust(1, &provider, f.id, &bonus, &u.switching_cost, &out);
    return out;
}

int choose_provider(const UserAgent& u, std::span<const FirmAgent> firms, const SimConfig& cfg,
                    std::uint64_t step_seed) {
    if (firms.empty())
        throw input_error("choose_provider: no firms");
    std::vector<double> prob(firms.size());
    double m = -1e300;
    for (std::size_t j = 0; j < firms.size(); ++j) {
        prob[j] = user_utility(u, firms[j], firms[j].market_share, cfg);
        m = std::max(m, prob[j]);
    }
    double total = 0;
    for (double& p : prob) {
        p = kernels::exp1((p - m) / cfg.choice_temp);
        total += p;
    }
    rng::Stream s(rng::hash64(step_seed, std::uint64_t(u.id)));
    const double r = s.next_unit() * total;
    double cum = 0;
    for (std::size_t j = 0; j < firms.size(); ++j) {
        cum += prob[j];
        if (r < cum) return int(j);
    }
    return int(firms.size()) - 1;
}

MarketState init_market(const SimConfig& cfg) {
    if (cfg.n_users < 6)
        throw input_error("init_market: need at least 6 users");
    if (cfg.steps < 1)
        throw input_error("init_market: steps must be >= 1");
    if (cfg.choice_temp <= 0)
        throw input_error("init_market: choice temperature must be positive");

    MarketState m;
    m.cfg = cfg;
    m.firms.reserve(6);
    for (int j = 0; j < 6; ++j) {
        const FirmRow& row = firm_rows[j];
        FirmAgent f;
        f.id = j;
        f.name = row.name;
        f.strategy = row.strategy;
        f.capital = row.capital;
        f.tech_level = row.tech;
        f.market_share = row.share;
        f.excludability = row.excl;
        f.safety_investment = row.safety;
        f.rd_rate = row.rd;
        f.price = row.excl; // price_base = 1
        m.firms.push_back(std::move(f));
    }

    const std::size_t n = std::size_t(cfg.n_users);
    m.users.resize(n);
    auto& c = m.cols;
    c.tech_savvy.resize(n);
    c.price_sens.resize(n);
    c.safety_pref.resize(n);
    c.loyalty.resize(n);
    c.bonus.resize(n);
    c.sw_cost.resize(n);
    c.satisfaction.resize(n);
    c.provider.assign(n, -1);
    for (auto& col : c.utility) col.resize(n);
    for (auto& col : c.prob) col.resize(n);
    c.scratch_max.resize(n);
    c.scratch_sum.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        UserAgent& u = m.users[i];
        u.id = int(i);
        u.segment = Segment(i % n_segments);
        const SegmentShapes& sh = segment_shapes[i % n_segments];
        rng::Stream s = rng::stream_for(cfg.seed, tag_prefs, std::uint64_t(i));
        u.tech_savvy = rng::beta_int(s, sh.tech_a, sh.tech_b);
        u.price_sens = rng::beta_int(s, sh.price_a, sh.price_b);
        u.safety_pref = rng::beta_int(s, sh.safety_a, sh.safety_b);
        u.brand_loyalty = rng::beta_int(s, sh.loyal_a, sh.loyal_b);
        u.switching_cost = cfg.switch_cost_base + cfg.switch_cost_loyal * u.brand_loyalty;
        u.provider = choose_provider(u, m.firms, cfg, rng::hash64(cfg.seed, tag_init_choice));
        m.firms[std::size_t(u.provider)].users += 1;

        c.tech_savvy[i] = u.tech_savvy;
        c.price_sens[i] = u.price_sens;
        c.safety_pref[i] = u.safety_pref;
        c.loyalty[i] = u.brand_loyalty;
        c.bonus[i] = cfg.loyalty_bonus * u.brand_loyalty;
        c.sw_cost[i] = u.switching_cost;
        c.provider[i] = std::int32_t(u.provider);
    }
    return m;
}

namespace {

void rebuild_utilities(MarketState& m) {
    const auto& be = kernels::active();
    const std::size_t n = m.users.size();
    auto& c = m.cols;
    for (std::size_t j = 0; j < m.firms.size(); ++j) {
        const FirmAgent& f = m.firms[j];
        be.blend4(n, c.tech_savvy.data(), c.price_sens.data(), c.safety_pref.data(),
                  c.loyalty.data(), tech_norm(f), price_norm(f), f.safety_investment,
                  m.cfg.network_weight * f.market_share, c.utility[j].data());
        be.incumbency_adjust(n, c.provider.data(), f.id, c.bonus.data(), c.sw_cost.data(),
                             c.utility[j].data());
    }
}

void softmax_probs(MarketState& m) {
    const auto& be = kernels::active();
    auto& c = m.cols;
    const double* u[6];
    double* p[6];
    for (std::size_t j = 0; j < 6; ++j) {
        u[j] = c.utility[j].data();
        p[j] = c.prob[j].data();
    }
    be.softmax(m.users.size(), 6, u, 1.0 / m.cfg.choice_temp, p, c.scratch_max.data(),
               c.scratch_sum.data());
}

long cap_count(const MarketState& m, const PolicyScenario& pol) {
    return std::lround(std::ceil(pol.share_cap * double(m.users.size())));
}

// Moves members of over-cap firms (highest user ids first, a deterministic
// rule) to firms with headroom, chosen by logit weights on the user's redraw
// substream. Returns
// the number of displaced users so callers can skip refreshes when the cap
// never bound (keeping capped runs bit-identical to laissez-faire until the
// first real cap event).
std::size_t enforce_share_cap(MarketState& m, const PolicyScenario& pol) {
    if (pol.share_cap >= 1.0) return 0;
    const long limit = cap_count(m, pol);
    std::vector<long> count(m.firms.size(), 0);
    for (std::int32_t p : m.cols.provider)
        if (p >= 0) ++count[std::size_t(p)];

    std::vector<std::size_t> displaced;
    for (std::size_t j = 0; j < m.firms.size(); ++j) {
        if (count[j] <= limit) continue;
        long excess = count[j] - limit;
        for (std::size_t i = m.users.size(); i-- > 0 && excess > 0;) {
            if (m.cols.provider[i] == std::int32_t(j)) {
                displaced.push_back(i);
                --excess;
            }
        }
        count[j] = limit;
    }

    std::sort(displaced.begin(), displaced.end());
    if (displaced.empty()) return 0;

    for (std::size_t i : displaced) {
        UserAgent seeker = m.users[i];
        seeker.provider = -1; // forced move: no incumbency in the redraw
        double weight[6];
        double total = 0, mx = -1e300;
        for (std::size_t j = 0; j < m.firms.size(); ++j) {
            weight[j] = count[j] < limit
                            ? user_utility(seeker, m.firms[j], m.firms[j].market_share, m.cfg)
                            : -1e300;
            mx = std::max(mx, weight[j]);
        }
        for (std::size_t j = 0; j < m.firms.size(); ++j) {
            weight[j] =
                weight[j] <= -1e300 ? 0.0 : kernels::exp1((weight[j] - mx) / m.cfg.choice_temp);
            total += weight[j];
        }
        rng::Stream s = rng::stream_for(m.cfg.seed, tag_cap_redraw, std::uint64_t(m.step),
                                        std::uint64_t(i));
        const double r = s.next_unit() * total;
        double cum = 0;
        std::size_t pick = std::size_t(-1);
        for (std::size_t j = 0; j < m.firms.size(); ++j) {
            if (weight[j] == 0.0) continue;
            cum += weight[j];
            pick = j;
            if (r < cum) break;
        }
        m.cols.provider[i] = std::int32_t(pick);
        m.users[i].provider = int(pick);
        ++count[pick];
    }

    for (std::size_t j = 0; j < m.firms.size(); ++j)
        m.firms[j].users = int(count[j]);
    return displaced.size();
}

void refresh_shares(MarketState& m) {
    const double n = double(m.users.size());
    for (auto& f : m.firms) f.market_share = double(f.users) / n;
}

void choice_phase(MarketState& m) {
    rebuild_utilities(m);
    softmax_probs(m);
    auto& c = m.cols;
    const std::uint64_t step_seed =
        rng::hash64(m.cfg.seed, tag_step_choice, std::uint64_t(m.step));
    std::vector<long> count(m.firms.size(), 0);
    for (std::size_t i = 0; i < m.users.size(); ++i) {
        rng::Stream s(rng::hash64(step_seed, std::uint64_t(i)));
        const double r = s.next_unit();
        double cum = 0;
        std::size_t pick = m.firms.size() - 1;
        for (std::size_t j = 0; j < m.firms.size(); ++j) {
            cum += c.prob[j][i];
            if (r < cum) {
                pick = j;
                break;
            }
        }
        c.provider[i] = std::int32_t(pick);
        m.users[i].provider = int(pick);
        ++count[pick];
    }
    for (std::size_t j = 0; j < m.firms.size(); ++j)
        m.firms[j].users = int(count[j]);

    const PolicyScenario pol = m.cfg.policy();
    if (pol.share_cap < 1.0)
        enforce_share_cap(m, pol);

    // realized experience: the held option's deterministic utility, also kept
    // raw (column 0 scratch) for the welfare index
    for (std::size_t i = 0; i < m.users.size(); ++i) {
        const auto j = std::size_t(c.provider[i]);
        const double u = user_utility(m.users[i], m.firms[j], m.firms[j].market_share, m.cfg);
        const double ceiling = c.tech_savvy[i] + c.price_sens[i] + c.safety_pref[i] +
                               c.loyalty[i] + c.bonus[i];
        c.satisfaction[i] = std::clamp(u / ceiling, 0.0, 1.0);
        c.utility[0][i] = u;
    }
}

void firm_phase(MarketState& m) {
    const PolicyScenario pol = m.cfg.policy();
    const auto& be = kernels::active();
    auto& c = m.cols;
    const double n = double(m.users.size());
    m.gov_budget = 0;

    // column 0 was reused for realized utilities during the choice phase
    rebuild_utilities(m);

    std::vector<double> cand_u(m.users.size());
    for (auto& f : m.firms) {
        if (f.dormant) {
            f.last_profit = 0;
            f.last_tech_growth = 0;
            continue;
        }
        const double users_f = double(f.users);
        const double revenue = f.price * users_f * m.cfg.rev_per_user;
        const double subsidy =
            pol.subsidy_rate * (1.0 - f.excludability) * users_f * m.cfg.rev_per_user;
        const double tax =
            pol.pollution_tax_rate * pollution_of(f, n, m.cfg) * m.cfg.rev_per_user;
        const double rd_spend = f.rd_rate * f.capital;
        f.last_profit = revenue + subsidy - tax - rd_spend;
        f.capital += f.last_profit;
        m.gov_budget += tax - subsidy;
        if (f.capital <= 0) {
            f.capital = 0;
            f.dormant = true;
        }

        const double before = f.tech_level;
        f.tech_level = std::clamp(
            f.tech_level + m.cfg.tech_gain * std::log1p(std::max(rd_spend, 0.0)) *
                               (1.0 - f.tech_level / tech_ceiling),
            0.0, tech_ceiling);
        f.last_tech_growth = f.tech_level - before;

        if (pol.pollution_tax_rate > 0) {
            const double before_s = f.safety_investment;
            f.safety_investment = std::clamp(
                f.safety_investment + m.cfg.safety_response * pol.pollution_tax_rate *
                                          f.rd_rate * (1.0 - f.safety_investment),
                0.0, 1.0);
            const double ds = f.safety_investment - before_s;
            if (ds != 0)
                be.axpy(m.users.size(), c.safety_pref.data(), ds,
                        c.utility[std::size_t(f.id)].data());
        }

        // myopic excludability: best of {e-step, e, e+step} under the current
        // policy, predicted over the whole population; ties prefer openness
        double best_e = 0;
        double best_value = -1e300;
        for (int k = -1; k <= 1; ++k) {
            const double cand =
                std::clamp(f.excludability + double(k) * m.cfg.e_step, 0.0, 1.0);
            const double dprice = -(cand - f.excludability); // price_norm delta
            cand_u = c.utility[std::size_t(f.id)];
            if (dprice != 0)
                be.axpy(m.users.size(), c.price_sens.data(), dprice, cand_u.data());

            const double* u[6];
            double* p[6];
            for (std::size_t j = 0; j < 6; ++j) {
                u[j] = c.utility[j].data();
                p[j] = c.prob[j].data();
            }
            u[std::size_t(f.id)] = cand_u.data();
            be.softmax(m.users.size(), 6, u, 1.0 / m.cfg.choice_temp, p,
                       c.scratch_max.data(), c.scratch_sum.data());
            double expected = 0;
            for (double v : c.prob[std::size_t(f.id)]) expected += v;

            const double share = expected / n;
            const double est_rev = cand * expected * m.cfg.rev_per_user;
            const double est_sub =
                pol.subsidy_rate * (1.0 - cand) * expected * m.cfg.rev_per_user;
            const double est_tax = pol.pollution_tax_rate *
                                   std::pow(share, m.cfg.pollution_exponent) * expected *
                                   (1.0 - f.safety_investment) * m.cfg.rev_per_user;
            const double value = est_rev + est_sub - est_tax;
            if (value > best_value) {
                best_value = value;
                best_e = cand;
            }
        }
        if (best_e != f.excludability) {
            const double dprice = -(best_e - f.excludability);
            f.excludability = best_e;
            f.price = best_e; // price_base = 1
            be.axpy(m.users.size(), c.price_sens.data(), dprice,
                    c.utility[std::size_t(f.id)].data());
        }
    }
    refresh_shares(m);
}

} // namespace

void apply_policy(MarketState& m) {
    const PolicyScenario pol = m.cfg.policy();
    if (pol.share_cap < 1.0 && enforce_share_cap(m, pol) > 0)
        refresh_shares(m);
}

MarketMetrics compute_metrics(const MarketState& m) {
    MarketMetrics out;
    out.step = m.step;
    const double n = double(m.users.size());

    double hhi = 0;
    for (const auto& f : m.firms) hhi += f.market_share * f.market_share;
    out.hhi = hhi;

    double pgi_sum = 0, growth = 0, pollution = 0, profit = 0, data_quality = 0, safety = 0;
    std::map<std::string, std::pair<double, int>> strat;
    int active = 0;
    for (const auto& f : m.firms) {
        const double pgi = firm_pgi(f, f.market_share, m.cfg);
        if (!f.dormant) {
            pgi_sum += pgi;
            ++active;
        }
        growth += f.last_tech_growth;
        pollution += pollution_of(f, n, m.cfg);
        profit += f.last_profit;
        data_quality += f.market_share * f.safety_investment;
        safety += f.safety_investment;
        auto& [acc, cnt] = strat[f.strategy];
        acc += pgi;
        cnt += 1;
    }
    out.avg_pgi = active > 0 ? pgi_sum / active : 0.0;
    out.innovation = growth / double(m.firms.size());
    out.data_quality = data_quality;
    out.safety_index = safety / double(m.firms.size());
    for (const auto& [tag, pair] : strat)
        out.strategy_pgi[tag] = pair.first / double(pair.second);

    std::array<double, n_segments> seg_sum{};
    std::array<int, n_segments> seg_n{};
    double utility_sum = 0;
    for (std::size_t i = 0; i < m.users.size(); ++i) {
        const auto seg = std::size_t(m.users[i].segment);
        seg_sum[seg] += m.cols.satisfaction[i];
        seg_n[seg] += 1;
        utility_sum += m.cols.utility[0][i];
    }
    for (std::size_t s = 0; s < n_segments; ++s)
        out.segment_satisfaction[s] = seg_n[s] ? seg_sum[s] / seg_n[s] : 0.0;

    const double cs_term = utility_sum / n;
    const double ps_term = (profit + m.gov_budget) / m.cfg.ps_norm;
    const double neg_term = pollution / n;
    out.welfare = m.cfg.welfare_scale *
                  (m.cfg.w_cs * cs_term + m.cfg.w_ps * ps_term +
                   m.cfg.w_innov * out.innovation - m.cfg.w_neg * neg_term);
    return out;
}

MarketMetrics market_step(MarketState& m) {
    m.step += 1;
    apply_policy(m);
    choice_phase(m);
    firm_phase(m);
    return compute_metrics(m);
}

RunResult run_scenario(const SimConfig& cfg) {
    MarketState m = init_market(cfg);
    RunResult out;
    out.cfg = cfg;
    out.series.reserve(std::size_t(cfg.steps));
    for (int s = 0; s < cfg.steps; ++s)
        out.series.push_back(market_step(m));
    out.final_firms = m.firms;
    return out;
}

SegmentReport segment_report(const std::map<Scenario, std::vector<RunResult>>& runs) {
    const auto s0 = runs.find(Scenario::S0);
    if (s0 == runs.end() || s0->second.empty())
        throw input_error("segment_report: need at least one S0 run as the baseline");

    SegmentReport rep;
    auto terminal_satisfaction = [](const std::vector<RunResult>& rs) {
        std::array<double, n_segments> acc{};
        for (const auto& r : rs)
            for (std::size_t s = 0; s < n_segments; ++s)
                acc[s] += r.terminal().segment_satisfaction[s];
        for (auto& v : acc) v /= double(rs.size());
        return acc;
    };
    auto strategy_summary = [](const std::vector<RunResult>& rs) {
        std::map<std::string, std::array<double, 3>> acc; // pgi, safety, share
        std::map<std::string, int> cnt;
        for (const auto& r : rs)
            for (const auto& f : r.final_firms) {
                auto& a = acc[f.strategy];
                a[0] += firm_pgi(f, f.market_share, r.cfg);
                a[1] += f.safety_investment;
                a[2] += f.market_share;
                cnt[f.strategy] += 1;
            }
        for (auto& [tag, a] : acc)
            for (auto& v : a) v /= double(cnt[tag]);
        return acc;
    };

    rep.baseline_satisfaction = terminal_satisfaction(s0->second);
    const auto base_strat = strategy_summary(s0->second);

    for (const auto& [scenario, rs] : runs) {
        if (rs.empty()) continue;
        rep.scenarios.push_back(scenario);
        const auto sat = terminal_satisfaction(rs);
        std::array<double, n_segments> delta{};
        for (std::size_t s = 0; s < n_segments; ++s)
            delta[s] = sat[s] - rep.baseline_satisfaction[s];
        rep.satisfaction_delta[scenario] = delta;

        const auto strat = strategy_summary(rs);
        for (const auto& [tag, vals] : strat) {
            const auto base = base_strat.at(tag);
            rep.strategy_delta[scenario][tag] = SegmentReport::StrategyDelta{
                vals[0] - base[0], vals[1] - base[1], vals[2] - base[2]};
        }
    }
    return rep;
}

SimConfig parse_scenario_config(std::istream& in, const std::string& origin) {
    const config::File f = config::parse(in, origin);
    if (!f.sections.empty())
        throw input_error(origin + ": scenario config takes no sections");
    SimConfig cfg;
    for (const auto& [key, raw] : f.globals) {
        if (key == "scenario") cfg.scenario = scenario_from(raw);
        else if (key == "steps") cfg.steps = int(csv::parse_number(raw, key));
        else if (key == "users") cfg.n_users = int(csv::parse_number(raw, key));
        else if (key == "seed") cfg.seed = std::uint64_t(csv::parse_number(raw, key));
        else if (key == "subsidy_rate") cfg.subsidy_rate = csv::parse_number(raw, key);
        else if (key == "pollution_tax") cfg.pollution_tax_rate = csv::parse_number(raw, key);
        else if (key == "share_cap") cfg.share_cap = csv::parse_number(raw, key);
        else if (key == "choice_temp") cfg.choice_temp = csv::parse_number(raw, key);
        else if (key == "network_weight") cfg.network_weight = csv::parse_number(raw, key);
        else if (key == "w_cs") cfg.w_cs = csv::parse_number(raw, key);
        else if (key == "w_ps") cfg.w_ps = csv::parse_number(raw, key);
        else if (key == "w_innov") cfg.w_innov = csv::parse_number(raw, key);
        else if (key == "w_neg") cfg.w_neg = csv::parse_number(raw, key);
        else if (key == "welfare_scale") cfg.welfare_scale = csv::parse_number(raw, key);
        else
            throw input_error(origin + ": unknown scenario key '" + key + "'");
    }
    if (cfg.steps < 1)
        throw input_error(origin + ": steps must be >= 1");
    if (cfg.share_cap <= 0 || cfg.share_cap > 1)
        throw input_error(origin + ": share_cap must lie in (0,1]");
    return cfg;
}

SimConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open " + path);
    return parse_scenario_config(in, path);
}

void write_metrics_csv(std::ostream& out, const RunResult& r,
                       const std::string& header_comment) {
    if (!header_comment.empty())
        out << "# " << header_comment << "\n";
    out << "step,scenario,seed,welfare,avg_pgi,hhi,innovation,data_quality,safety\n";
    for (const auto& m : r.series) {
        out << m.step << ',' << to_string(r.cfg.scenario) << ',' << r.cfg.seed << ','
            << csv::fmt(m.welfare) << ',' << csv::fmt(m.avg_pgi) << ',' << csv::fmt(m.hhi)
            << ',' << csv::fmt(m.innovation) << ',' << csv::fmt(m.data_quality) << ','
            << csv::fmt(m.safety_index) << "\n";
    }
}

} // namespace pglab::abm
