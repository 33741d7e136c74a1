#include "pglab/pgi.hpp"

#include "pglab/error.hpp"
#include "pglab/kernels.hpp"
#include "pglab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pglab::pgi {

void DimensionScores::validate() const {
    auto unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
    if (!unit(c_q) || !unit(c_e))
        throw input_error("dimension scores c_q, c_e must lie in [0,1]");
    if (variant == Variant::empirical) {
        if (!unit(c_x))
            throw input_error("empirical c_x must lie in [0,1]");
    } else if (!std::isfinite(c_x) || c_x < -1.0 || c_x > 1.0) {
        throw input_error("theoretical c_x must lie in [-1,1]");
    }
}

Weights Weights::normalized(double a, double b, double g) {
    if (a < 0 || b < 0 || g < 0)
        throw input_error("weights must be non-negative");
    const double s = a + b + g;
    if (s <= 0)
        throw input_error("weights must not all be zero");
    return Weights{a / s, b / s, g / s};
}

void Weights::validate() const {
    if (alpha < 0 || beta < 0 || gamma < 0)
        throw input_error("weights must be non-negative");
    if (std::abs(alpha + beta + gamma - 1.0) > 1e-9)
        throw input_error("weights must sum to one");
}

double nonrivalry_ratio(double q_star, double load) {
    if (q_star < 0 || load < 0)
        throw input_error("nonrivalry_ratio: arguments must be >= 0");
    if (q_star + load == 0)
        throw numeric_error("nonrivalry_ratio: q_star + load must be positive");
    return q_star / (q_star + load);
}

double compose_dimension_mean(std::span<const double> subscores) {
    if (subscores.empty())
        throw input_error("compose_dimension_mean: empty sub-score list");
    double s = 0;
    for (double v : subscores) s += v;
    return s / double(subscores.size());
}

double externality_ratio(double x_pos, double x_neg) {
    if (x_pos < 0 || x_neg < 0)
        throw input_error("externality_ratio: arguments must be >= 0");
    if (x_pos + x_neg == 0)
        throw numeric_error("externality_ratio: x_pos + x_neg must be positive");
    return (x_pos - x_neg) / (x_pos + x_neg);
}

ExternalityComposition compose_externality_empirical(std::span<const double> pos,
                                                     std::span<const double> neg_inverted,
                                                     double w_pos,
                                                     std::optional<double> override_value) {
    if (w_pos < 0 || w_pos > 1)
        throw input_error("w_pos must lie in [0,1]");
    ExternalityComposition out;
    out.computed = w_pos * compose_dimension_mean(pos) +
                   (1.0 - w_pos) * compose_dimension_mean(neg_inverted);
    out.overridden = override_value.has_value();
    out.value = out.overridden ? *override_value : out.computed;
    return out;
}

double pgi_linear(const DimensionScores& d, const Weights& w) {
    d.validate();
    w.validate();
    return w.alpha * d.c_q + w.beta * d.c_e + w.gamma * d.c_x;
}

double pgi_ces(const DimensionScores& d, const Weights& w, double rho) {
    d.validate();
    w.validate();
    if (rho == 0.0)
        throw input_error("pgi_ces: rho = 0 (geometric limit) is unsupported");
    const bool fractional = rho != std::floor(rho);
    for (double c : {d.c_q, d.c_e, d.c_x})
        if (c < 0 && fractional)
            throw numeric_error("pgi_ces: negative component with fractional rho");
    const double s = w.alpha * std::pow(d.c_q, rho) + w.beta * std::pow(d.c_e, rho) +
                     w.gamma * std::pow(d.c_x, rho);
    return std::pow(s, 1.0 / rho);
}

std::vector<Ranked> rank_models(std::span<const std::pair<std::string, double>> entries) {
    if (entries.empty())
        throw input_error("rank_models: empty input");
    std::vector<Ranked> out(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        out[i] = Ranked{entries[i].first, entries[i].second, 0};
    std::sort(out.begin(), out.end(), [](const Ranked& a, const Ranked& b) {
        if (a.composite != b.composite) return a.composite > b.composite;
        return a.model_id < b.model_id;
    });
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i].rank = int(i) + 1;
    return out;
}

DimensionScores dimensions_for(const score::Scorecard& c, double w_pos) {
    DimensionScores d;
    d.variant = Variant::empirical;
    if (c.dimension_overrides) {
        d.c_q = (*c.dimension_overrides)[0];
        d.c_e = (*c.dimension_overrides)[1];
        d.c_x = (*c.dimension_overrides)[2];
        return d;
    }
    const double cq_subs[] = {c.load_score, c.capacity_score};
    const double ce_subs[] = {c.legal_score, c.economic_score};
    const double pos[] = {c.citation_score, c.download_score};
    const double neg[] = {c.misuse_inv, c.bias_inv, c.env_inv};
    d.c_q = compose_dimension_mean(cq_subs);
    d.c_e = compose_dimension_mean(ce_subs);
    d.c_x = compose_externality_empirical(pos, neg, w_pos, c.cx_override).value;
    return d;
}

std::vector<Result> score_models(std::span<const score::Scorecard> cards, const Weights& w,
                                 Aggregator agg, double rho, double w_pos) {
    if (cards.empty())
        throw input_error("score_models: no scorecards");
    std::vector<Result> results(cards.size());
    std::vector<std::pair<std::string, double>> entries(cards.size());
    for (std::size_t i = 0; i < cards.size(); ++i) {
        results[i].model_id = cards[i].model_id;
        results[i].dims = dimensions_for(cards[i], w_pos);
        results[i].composite = agg == Aggregator::linear
                                   ? pgi_linear(results[i].dims, w)
                                   : pgi_ces(results[i].dims, w, rho);
        entries[i] = {results[i].model_id, results[i].composite};
    }
    const auto ranked = rank_models(entries);
    for (auto& r : results)
        for (const auto& q : ranked)
            if (q.model_id == r.model_id) r.rank = q.rank;
    return results;
}

double SensitivityReport::rank_rate(std::size_t model, int rank) const {
    return double(rank_count.at(model).at(std::size_t(rank - 1))) / double(n_draws);
}

double SensitivityReport::outrank_rate(std::size_t a, std::size_t b) const {
    return double(outrank_count.at(a).at(b)) / double(n_draws);
}

SensitivityReport weight_sensitivity(std::span<const score::Scorecard> cards, long n_draws,
                                     double box_lo, double box_hi, std::uint64_t seed,
                                     double w_pos) {
    if (n_draws < 1)
        throw input_error("weight_sensitivity: n_draws must be >= 1");
    if (!(box_lo < box_hi))
        throw input_error("weight_sensitivity: box_lo must be < box_hi");
    const std::size_t m = cards.size();
    if (m == 0)
        throw input_error("weight_sensitivity: no scorecards");

    SensitivityReport rep;
    rep.n_draws = n_draws;
    rep.seed = seed;
    rep.box_lo = box_lo;
    rep.box_hi = box_hi;
    rep.rank_count.assign(m, std::vector<long>(m, 0));
    rep.outrank_count.assign(m, std::vector<long>(m, 0));

    std::vector<DimensionScores> dims(m);
    for (std::size_t i = 0; i < m; ++i) {
        rep.model_ids.push_back(cards[i].model_id);
        rep.open_weight.push_back(cards[i].access_mode == score::AccessMode::open);
        dims[i] = dimensions_for(cards[i], w_pos);
        dims[i].validate();
    }

    // Per-draw weights from independent substreams, renormalized to sum one.
    const std::size_t n = std::size_t(n_draws);
    std::vector<double> wa(n), wb(n), wc(n);
    for (std::size_t d = 0; d < n; ++d) {
        rng::Stream s = rng::stream_for(seed, 1, d);
        double a = s.next_range(box_lo, box_hi);
        double b = s.next_range(box_lo, box_hi);
        double g = s.next_range(box_lo, box_hi);
        const double total = a + b + g;
        wa[d] = a / total;
        wb[d] = b / total;
        wc[d] = g / total;
    }

    // Composite per draw for each model via the batched blend kernel.
    const auto& be = kernels::active();
    std::vector<std::vector<double>> composite(m, std::vector<double>(n));
    for (std::size_t i = 0; i < m; ++i)
        be.blend3(n, wa.data(), wb.data(), wc.data(), dims[i].c_q, dims[i].c_e,
                  dims[i].c_x, composite[i].data());

    std::vector<std::size_t> order(m);
    for (std::size_t d = 0; d < n; ++d) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            if (composite[x][d] != composite[y][d]) return composite[x][d] > composite[y][d];
            return cards[x].model_id < cards[y].model_id;
        });
        for (std::size_t r = 0; r < m; ++r) {
            rep.rank_count[order[r]][r] += 1;
            for (std::size_t r2 = r + 1; r2 < m; ++r2)
                rep.outrank_count[order[r]][order[r2]] += 1;
        }
        if (m >= 2 && rep.open_weight[order[0]] && rep.open_weight[order[1]])
            rep.top2_open_count += 1;
        bool bottom_closed = true;
        for (std::size_t r = m >= 3 ? m - 3 : 0; r < m; ++r)
            bottom_closed = bottom_closed && !rep.open_weight[order[r]];
        if (bottom_closed) rep.bottom3_closed_count += 1;
    }
    return rep;
}

CaseSeries openai_case() {
    // Generation matrix fixture: dimension triples and equally weighted
    // composites for GPT-2, GPT-3, GPT-4.
    const struct {
        const char* label;
        double c_q, c_e, c_x;
    } fixture[] = {
        {"GPT-2", 0.95, 0.85, 0.78},
        {"GPT-3", 0.70, 0.45, 0.65},
        {"GPT-4", 0.45, 0.25, 0.42},
    };
    CaseSeries series;
    for (const auto& f : fixture) {
        CasePoint p;
        p.label = f.label;
        p.dims = DimensionScores{f.c_q, f.c_e, f.c_x, Variant::empirical};
        p.composite = pgi_linear(p.dims, Weights::equal());
        series.points.push_back(std::move(p));
    }
    series.relative_decline =
        1.0 - series.points.back().composite / series.points.front().composite;
    return series;
}

double pgi_gap(double pgi_social, double pgi_private) {
    if (!std::isfinite(pgi_social) || !std::isfinite(pgi_private))
        throw input_error("pgi_gap: non-finite input");
    return pgi_social - pgi_private;
}

} // namespace pglab::pgi
