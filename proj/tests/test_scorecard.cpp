#include "pglab/scorecard.hpp"

#include "pglab/error.hpp"
#include "pglab/rng.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace pglab;
using score::Scorecard;

TEST_CASE("normalize_minmax fixtures and grid oracle") {
    CHECK(score::normalize_minmax(3, 1, 5, false) == 0.5);
    CHECK(score::normalize_minmax(5, 1, 5, true) == 0.0);
    CHECK(score::normalize_minmax(1, 1, 5, false) == 0.0);
    CHECK(score::normalize_minmax(5, 1, 5, false) == 1.0);

    // brute-force grid oracle over [0,10]
    for (int i = 0; i <= 100; ++i) {
        const double x = 10.0 * i / 100.0;
        const double expected = (x - 0.0) / (10.0 - 0.0);
        CHECK(score::normalize_minmax(x, 0, 10, false) == doctest::Approx(expected).epsilon(1e-15));
    }
}

TEST_CASE("normalize_minmax monotonicity, clamping, degenerate range") {
    double prev = -1;
    for (int i = 0; i <= 50; ++i) {
        const double v = score::normalize_minmax(2.0 + i * 0.1, 2.0, 7.0, false);
        CHECK(v >= prev);
        prev = v;
    }
    double prev_inv = 2;
    for (int i = 0; i <= 50; ++i) {
        const double v = score::normalize_minmax(2.0 + i * 0.1, 2.0, 7.0, true);
        CHECK(v <= prev_inv);
        prev_inv = v;
    }
    CHECK(score::normalize_minmax(-5, 0, 1, false) == 0.0);
    CHECK(score::normalize_minmax(9, 0, 1, false) == 1.0);
    CHECK_THROWS_AS(score::normalize_minmax(1, 2, 2, false), numeric_error);
    CHECK(score::normalize_minmax(1, 2, 2, false, 0.5) == 0.5);
}

TEST_CASE("categorical rubric scores") {
    const auto rubric = score::Rubric::defaults();
    rubric.validate();
    CHECK(score::score_categorical("license", "Proprietary", rubric) == 0.0);
    CHECK(score::score_categorical("license", "Restricted", rubric) == 0.5);
    CHECK(score::score_categorical("license", "Open", rubric) == 1.0);
    CHECK(score::score_categorical("pricing", "Freemium", rubric) == 0.6);
    CHECK(score::score_categorical("pricing", "Free", rubric) == 1.0);
    CHECK(score::score_categorical("misuse", "HighRisk", rubric) == 0.8);

    CHECK_THROWS_WITH_AS(score::score_categorical("license", "Copyleft", rubric),
                         doctest::Contains("Copyleft"), input_error);
    CHECK_THROWS_WITH_AS(score::score_categorical("flavor", "Open", rubric),
                         doctest::Contains("flavor"), input_error);
}

TEST_CASE("categorical outputs stay in the published value set") {
    const auto rubric = score::Rubric::defaults();
    const std::set<double> allowed{0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0};
    for (const auto* ind : {"license", "pricing", "misuse"}) {
        const auto& m = ind == std::string("license")   ? rubric.license_map
                        : ind == std::string("pricing") ? rubric.pricing_map
                                                        : rubric.misuse_map;
        for (const auto& [label, _] : m)
            CHECK(allowed.count(score::score_categorical(ind, label, rubric)) == 1);
    }
}

TEST_CASE("raw indicator scoring covers numeric cohorts and bias") {
    auto rubric = score::Rubric::defaults();
    rubric.cohort_bounds["open_load"] = {0.0, 50.0};
    score::RawIndicator load{"user_load", 10.0, score::RawIndicator::Direction::cost,
                             "open_load", "monthly visits"};
    CHECK(score::score_indicator(load, rubric) == doctest::Approx(0.8));

    score::RawIndicator bias{"bias", 0.5, score::RawIndicator::Direction::cost, "", ""};
    CHECK(score::score_indicator(bias, rubric) == 0.5);
    bias.value = 0.95;
    CHECK_THROWS_AS(score::score_indicator(bias, rubric), input_error);

    score::RawIndicator negative{"user_load", -1.0, score::RawIndicator::Direction::cost,
                                 "open_load", ""};
    CHECK_THROWS_AS(score::score_indicator(negative, rubric), input_error);

    score::RawIndicator cat{"license", std::string("Open"), score::RawIndicator::Direction::benefit,
                            "", ""};
    CHECK(score::score_indicator(cat, rubric) == 1.0);
}

TEST_CASE("builtin master table carries the published sub-scores") {
    const auto& cards = score::builtin_models();
    REQUIRE(cards.size() == 5);

    const Scorecard* llama = nullptr;
    const Scorecard* qwen = nullptr;
    for (const auto& c : cards) {
        if (c.model_id == "Llama") llama = &c;
        if (c.model_id == "Qwen") qwen = &c;
    }
    REQUIRE(llama != nullptr);
    REQUIRE(qwen != nullptr);
    CHECK(llama->access_mode == score::AccessMode::open);
    CHECK(llama->load_score == 0.99);
    CHECK(llama->legal_score == 0.5);   // custom restricted license
    CHECK(llama->misuse_inv == 0.2);    // high risk, stored post-inversion
    CHECK(qwen->legal_score == 1.0);    // Apache 2.0
    CHECK(qwen->capacity_score == 0.6);
    for (const auto& c : cards) {
        c.validate(c.model_id);
        CHECK(c.cx_override.has_value());
        CHECK(c.dimension_overrides.has_value());
    }
}

TEST_CASE("scorecard CSV loading validates rows") {
    std::ostringstream buf;
    score::write_scorecards(buf, score::builtin_models(), "fixture");
    const std::string csv_text = buf.str();

    SUBCASE("round trip is field-identical") {
        std::istringstream in(csv_text);
        const auto cards = score::parse_scorecards(in, "mem");
        REQUIRE(cards.size() == 5);
        const auto& orig = score::builtin_models();
        for (std::size_t i = 0; i < cards.size(); ++i) {
            CHECK(cards[i].model_id == orig[i].model_id);
            CHECK(cards[i].access_mode == orig[i].access_mode);
            CHECK(cards[i].load_score == orig[i].load_score);
            CHECK(cards[i].capacity_score == orig[i].capacity_score);
            CHECK(cards[i].legal_score == orig[i].legal_score);
            CHECK(cards[i].economic_score == orig[i].economic_score);
            CHECK(cards[i].citation_score == orig[i].citation_score);
            CHECK(cards[i].download_score == orig[i].download_score);
            CHECK(cards[i].misuse_inv == orig[i].misuse_inv);
            CHECK(cards[i].bias_inv == orig[i].bias_inv);
            CHECK(cards[i].env_inv == orig[i].env_inv);
            CHECK(cards[i].cx_override == orig[i].cx_override);
            // dimension overrides are not part of the interchange format
            CHECK_FALSE(cards[i].dimension_overrides.has_value());
        }
    }

    SUBCASE("stable input order is preserved") {
        std::istringstream in(csv_text);
        const auto cards = score::parse_scorecards(in, "mem");
        CHECK(cards.front().model_id == "ChatGPT");
        CHECK(cards.back().model_id == "Gemini");
    }

    SUBCASE("header-only file gives an empty list") {
        std::istringstream in(std::string(score::csv_header) + "\n");
        CHECK(score::parse_scorecards(in, "mem").empty());
    }

    SUBCASE("out-of-range score is a validation error with the line number") {
        std::istringstream in(std::string(score::csv_header) +
                              "\nM1,open,0.1,0.2,1.2,0.4,0.5,0.6,0.7,0.8,0.9,\n");
        CHECK_THROWS_WITH_AS(score::parse_scorecards(in, "mem"),
                             doctest::Contains("mem:2"), input_error);
    }

    SUBCASE("malformed row names its line") {
        std::istringstream in(std::string(score::csv_header) +
                              "\nM1,open,0.1,0.2\n");
        CHECK_THROWS_WITH_AS(score::parse_scorecards(in, "mem"),
                             doctest::Contains("mem:2"), input_error);
    }

    SUBCASE("duplicate model ids are rejected") {
        std::istringstream in(std::string(score::csv_header) +
                              "\nM1,open,0,0,0,0,0,0,0,0,0,\nM1,open,0,0,0,0,0,0,0,0,0,\n");
        CHECK_THROWS_WITH_AS(score::parse_scorecards(in, "mem"),
                             doctest::Contains("duplicate"), input_error);
    }

    SUBCASE("bad access mode is rejected") {
        std::istringstream in(std::string(score::csv_header) +
                              "\nM1,hybrid,0,0,0,0,0,0,0,0,0,\n");
        CHECK_THROWS_AS(score::parse_scorecards(in, "mem"), input_error);
    }

    SUBCASE("wrong header is rejected") {
        std::istringstream in(std::string("model,stuff\nM1,1\n"));
        CHECK_THROWS_AS(score::parse_scorecards(in, "mem"), input_error);
    }
}
