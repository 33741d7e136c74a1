#include "pglab/scorecard.hpp"

#include "pglab/csv.hpp"
#include "pglab/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

namespace pglab::score {

std::string to_string(AccessMode m) {
    return m == AccessMode::open ? "open" : "closed";
}

AccessMode access_mode_from(const std::string& s) {
    if (s == "open") return AccessMode::open;
    if (s == "closed") return AccessMode::closed;
    throw input_error("access_mode must be 'open' or 'closed', got '" + s + "'");
}

Rubric Rubric::defaults() {
    Rubric r;
    r.license_map = {{"Proprietary", 0.0}, {"Restricted", 0.5}, {"Open", 1.0}};
    r.pricing_map = {{"Paid", 0.2}, {"Freemium", 0.6}, {"Free", 1.0}};
    r.misuse_map = {{"HighRisk", 0.8}, {"Med", 0.6}, {"Low", 0.4}};
    return r;
}

void Rubric::validate() const {
    auto check_map = [](const std::map<std::string, double>& m, const char* name) {
        for (const auto& [label, v] : m)
            if (v < 0.0 || v > 1.0)
                throw input_error(std::string(name) + " score for '" + label +
                                  "' outside [0,1]");
    };
    check_map(license_map, "license");
    check_map(pricing_map, "pricing");
    check_map(misuse_map, "misuse");
    if (bias_range.first < 0 || bias_range.second > 1 || bias_range.first > bias_range.second)
        throw input_error("bias_range must be an ordered subrange of [0,1]");
    for (const auto& [cohort, bounds] : cohort_bounds)
        if (bounds.first > bounds.second)
            throw input_error("cohort '" + cohort + "' has min > max");
}

double normalize_minmax(double x, double min, double max, bool invert,
                        std::optional<double> degenerate_default) {
    if (!std::isfinite(x))
        throw input_error("normalize_minmax: non-finite value");
    if (min == max) {
        if (degenerate_default)
            return *degenerate_default;
        throw numeric_error("normalize_minmax: degenerate range (min == max)");
    }
    if (min > max)
        throw input_error("normalize_minmax: min > max");
    double s = (x - min) / (max - min);
    // cohort bounds are implicit in the source tables; out-of-range raw
    // values clamp rather than reject
    s = std::clamp(s, 0.0, 1.0);
    return invert ? 1.0 - s : s;
}

double score_categorical(const std::string& indicator_id, const std::string& label,
                         const Rubric& rubric) {
    const std::map<std::string, double>* m = nullptr;
    if (indicator_id == "license") m = &rubric.license_map;
    else if (indicator_id == "pricing") m = &rubric.pricing_map;
    else if (indicator_id == "misuse") m = &rubric.misuse_map;
    else
        throw input_error("no categorical rubric for indicator '" + indicator_id + "'");
    auto it = m->find(label);
    if (it == m->end())
        throw input_error("unknown category '" + label + "' for indicator '" +
                          indicator_id + "'");
    return it->second;
}

double score_indicator(const RawIndicator& ind, const Rubric& rubric) {
    if (std::holds_alternative<std::string>(ind.value))
        return score_categorical(ind.indicator_id, std::get<std::string>(ind.value), rubric);

    const double x = std::get<double>(ind.value);
    if (!std::isfinite(x) || x < 0)
        throw input_error("indicator '" + ind.indicator_id +
                          "': numeric value must be finite and >= 0");
    if (ind.indicator_id == "bias") {
        if (x < rubric.bias_range.first || x > rubric.bias_range.second)
            throw input_error("bias score outside the qualitative range");
        return x;
    }
    auto it = rubric.cohort_bounds.find(ind.cohort_id);
    if (it == rubric.cohort_bounds.end())
        throw input_error("indicator '" + ind.indicator_id + "': unknown cohort '" +
                          ind.cohort_id + "'");
    return normalize_minmax(x, it->second.first, it->second.second,
                            ind.direction == RawIndicator::Direction::cost);
}

void Scorecard::validate(const std::string& context) const {
    if (model_id.empty())
        throw input_error(context + ": empty model_id");
    const std::pair<const char*, double> unit_fields[] = {
        {"load_score", load_score},       {"capacity_score", capacity_score},
        {"legal_score", legal_score},     {"economic_score", economic_score},
        {"citation_score", citation_score}, {"download_score", download_score},
        {"misuse_inv", misuse_inv},       {"bias_inv", bias_inv},
        {"env_inv", env_inv},
    };
    for (const auto& [name, v] : unit_fields)
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw input_error(context + ": " + name + " outside [0,1]");
    if (cx_override && (*cx_override < 0.0 || *cx_override > 1.0))
        throw input_error(context + ": cx_override outside [0,1]");
    if (dimension_overrides)
        for (double v : *dimension_overrides)
            if (v < 0.0 || v > 1.0)
                throw input_error(context + ": dimension override outside [0,1]");
}

std::vector<Scorecard> parse_scorecards(std::istream& in, const std::string& origin) {
    const csv::Table t = csv::read_table(in, origin);
    const auto expected = csv::split(csv_header);
    if (t.header != expected)
        throw input_error(origin + ": header does not match the scorecard schema");

    std::vector<Scorecard> cards;
    std::set<std::string> seen;
    for (const auto& row : t.rows) {
        const std::string where = origin + ":" + std::to_string(row.line);
        if (row.fields.size() != expected.size())
            throw input_error(where + ": expected " + std::to_string(expected.size()) +
                              " fields, got " + std::to_string(row.fields.size()));
        Scorecard c;
        c.model_id = row.fields[0];
        c.access_mode = access_mode_from(row.fields[1]);
        auto num = [&](std::size_t idx) {
            return csv::parse_number(row.fields[idx], where + " " + expected[idx]);
        };
        c.load_score = num(2);
        c.capacity_score = num(3);
        c.legal_score = num(4);
        c.economic_score = num(5);
        c.citation_score = num(6);
        c.download_score = num(7);
        c.misuse_inv = num(8);
        c.bias_inv = num(9);
        c.env_inv = num(10);
        if (!row.fields[11].empty())
            c.cx_override = num(11);
        c.validate(where);
        if (!seen.insert(c.model_id).second)
            throw input_error(where + ": duplicate model_id '" + c.model_id + "'");
        cards.push_back(std::move(c));
    }
    return cards;
}

std::vector<Scorecard> load_scorecards(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open " + path);
    return parse_scorecards(in, path);
}

void write_scorecards(std::ostream& out, std::span<const Scorecard> cards,
                      const std::string& header_comment) {
    if (!header_comment.empty())
        out << "# " << header_comment << "\n";
    out << csv_header << "\n";
    for (const auto& c : cards) {
        out << c.model_id << ',' << to_string(c.access_mode) << ','
            << csv::fmt(c.load_score) << ',' << csv::fmt(c.capacity_score) << ','
            << csv::fmt(c.legal_score) << ',' << csv::fmt(c.economic_score) << ','
            << csv::fmt(c.citation_score) << ',' << csv::fmt(c.download_score) << ','
            << csv::fmt(c.misuse_inv) << ',' << csv::fmt(c.bias_inv) << ','
            << csv::fmt(c.env_inv) << ','
            << (c.cx_override ? csv::fmt(*c.cx_override) : "") << "\n";
    }
}

namespace {

Scorecard make_card(std::string id, AccessMode mode, double load, double cap,
                    double legal, double econ, double cites, double dl,
                    double misuse, double bias, double env, double cx,
                    std::array<double, 3> dims) {
    Scorecard c;
    c.model_id = std::move(id);
    c.access_mode = mode;
    c.load_score = load;
    c.capacity_score = cap;
    c.legal_score = legal;
    c.economic_score = econ;
    c.citation_score = cites;
    c.download_score = dl;
    c.misuse_inv = misuse;
    c.bias_inv = bias;
    c.env_inv = env;
    c.cx_override = cx;
    c.dimension_overrides = dims;
    return c;
}

} // namespace

const std::vector<Scorecard>& builtin_models() {
    // Published sub-scores, externality overrides and dimension triples for
    // the five-model comparison set. Negative-externality entries are stored
    // post-inversion.
    static const std::vector<Scorecard> cards = {
        make_card("ChatGPT", AccessMode::closed, 0.00, 1.00, 0.00, 0.60, 0.80, 0.00,
                  0.60, 0.40, 0.30, 0.35, {0.50, 0.30, 0.35}),
        make_card("Claude", AccessMode::closed, 0.95, 1.00, 0.00, 0.60, 0.40, 0.00,
                  0.60, 0.30, 0.50, 0.33, {0.98, 0.30, 0.33}),
        make_card("Llama", AccessMode::open, 0.99, 1.00, 0.50, 1.00, 1.00, 1.00,
                  0.20, 0.50, 0.40, 0.55, {1.00, 0.75, 0.55}),
        make_card("Qwen", AccessMode::open, 0.00, 0.60, 1.00, 1.00, 0.90, 0.80,
                  0.20, 0.50, 0.60, 0.60, {0.30, 1.00, 0.60}),
        make_card("Gemini", AccessMode::closed, 0.75, 1.00, 0.00, 0.60, 0.95, 0.00,
                  0.60, 0.50, 0.30, 0.38, {0.88, 0.30, 0.38}),
    };
    return cards;
}

} // namespace pglab::score
