#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pglab::score {

enum class AccessMode { open, closed };

std::string to_string(AccessMode);
AccessMode access_mode_from(const std::string&);

// One raw observation before scoring: either a non-negative measurement
// (normalized against its cohort's bounds) or a categorical label (mapped
// through the rubric).
struct RawIndicator {
    std::string indicator_id;
    std::variant<double, std::string> value;
    enum class Direction { benefit, cost } direction = Direction::benefit;
    std::string cohort_id;
    std::string source_note;
};

// Published discrete scoring maps plus per-cohort min-max bounds. Misuse and
// bias values come out pre-inversion; the ingest path applies 1-s so stored
// negative-externality scores are uniformly "higher = more publicness".
struct Rubric {
    std::map<std::string, double> license_map;
    std::map<std::string, double> pricing_map;
    std::map<std::string, double> misuse_map;
    std::pair<double, double> bias_range{0.3, 0.9};
    std::map<std::string, std::pair<double, double>> cohort_bounds;

    static Rubric defaults();
    void validate() const;
};

// Normalized sub-indicator scores for one model. All unit-interval;
// misuse_inv/bias_inv/env_inv are stored post-inversion. dimension_overrides
// carries published dimension triples (c_q, c_e, c_x) for table-exact
// reproduction; the CSV interchange format has no columns for it.
struct Scorecard {
    std::string model_id;
    AccessMode access_mode = AccessMode::closed;
    double load_score = 0;
    double capacity_score = 0;
    double legal_score = 0;
    double economic_score = 0;
    double citation_score = 0;
    double download_score = 0;
    double misuse_inv = 0;
    double bias_inv = 0;
    double env_inv = 0;
    std::optional<double> cx_override;
    std::optional<std::array<double, 3>> dimension_overrides;

    void validate(const std::string& context) const;
};

// (x - min) / (max - min), clamped to [0, 1]; 1-s when invert. A degenerate
// range (min == max) throws unless a default score is supplied.
double normalize_minmax(double x, double min, double max, bool invert,
                        std::optional<double> degenerate_default = std::nullopt);

// Rubric lookup for a categorical indicator; throws input_error naming the
// indicator and label when unknown. Misuse values are returned pre-inversion.
double score_categorical(const std::string& indicator_id, const std::string& label,
                         const Rubric& rubric);

// Scores one raw observation: categorical via the rubric, numeric via the
// cohort bounds (inverted for cost direction).
double score_indicator(const RawIndicator&, const Rubric&);

std::vector<Scorecard> parse_scorecards(std::istream&, const std::string& origin);
std::vector<Scorecard> load_scorecards(const std::string& path);
void write_scorecards(std::ostream&, std::span<const Scorecard>,
                      const std::string& header_comment = "");

// Five-model fixture with published sub-scores, externality overrides and
// published dimension triples.
const std::vector<Scorecard>& builtin_models();

inline constexpr const char* csv_header =
    "model_id,access_mode,load_score,capacity_score,legal_score,economic_score,"
    "citation_score,download_score,misuse_inv,bias_inv,env_inv,cx_override";

} // namespace pglab::score
