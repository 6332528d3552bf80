#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "somnotherm/rng.hpp"
#include "somnotherm/rr.hpp"

using namespace somnotherm;

TEST_CASE("parse_rr reads one value per line and accumulates timestamps", "[rr]") {
    const auto s = parse_rr("0.8\n0.9\n0.85");
    REQUIRE(s.intervals == std::vector<double>{0.8, 0.9, 0.85});
    REQUIRE(s.timestamps.size() == 3);
    CHECK(s.timestamps[0] == Catch::Approx(0.8).margin(1e-12));
    CHECK(s.timestamps[1] == Catch::Approx(1.7).margin(1e-12));
    CHECK(s.timestamps[2] == Catch::Approx(2.55).margin(1e-12));
    CHECK_NOTHROW(validate(s));
}

TEST_CASE("parse_rr autodetects millisecond recordings", "[rr]") {
    // Oracle: the millisecond parse must agree with the explicit-seconds parse.
    const auto ms = parse_rr("800\n900\n850");
    const auto sec = parse_rr("0.8\n0.9\n0.85");
    REQUIRE(ms.size() == sec.size());
    for (std::size_t i = 0; i < ms.size(); ++i)
        CHECK(ms.intervals[i] == Catch::Approx(sec.intervals[i]).margin(1e-12));
}

TEST_CASE("parse_rr reports the offending line", "[rr]") {
    try {
        parse_rr("0.8\nabc\n0.9");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }

    try {
        parse_rr("0.8\n# note\n\n-0.5\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(e.line() == 4);
    }
}

TEST_CASE("parse_rr skips comments and blank lines, rejects empty input", "[rr]") {
    const auto s = parse_rr("# header comment\n\n0.8\n  \n0.9\n");
    CHECK(s.size() == 2);
    CHECK_THROWS_AS(parse_rr(""), EmptyRecordingError);
    CHECK_THROWS_AS(parse_rr("# only comments\n\n"), EmptyRecordingError);
}

TEST_CASE("serialize/parse round-trip is the identity on 6-decimal series", "[rr]") {
    SeededRng rng(11);
    std::vector<double> intervals;
    for (int i = 0; i < 500; ++i)
        intervals.push_back(std::round(rng.uniform(0.4, 1.6) * 1e6) / 1e6);
    const auto original = make_rr_series(intervals, "roundtrip");
    const auto parsed = parse_rr(serialize_rr(original));
    REQUIRE(parsed.size() == original.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed.intervals[i] == Catch::Approx(original.intervals[i]).margin(1e-12));
        CHECK(parsed.timestamps[i] == Catch::Approx(original.timestamps[i]).margin(1e-9));
    }
}

TEST_CASE("filter_artifacts interpolates an out-of-range beat", "[rr]") {
    const auto s = make_rr_series({0.8, 0.8, 3.0, 0.8});
    const auto result = filter_artifacts(s);
    CHECK(result.replaced == 1);
    REQUIRE(result.series.size() == 4);
    CHECK(result.series.intervals[2] == Catch::Approx(0.8).margin(1e-12));
    CHECK_NOTHROW(validate(result.series));
}

TEST_CASE("filter_artifacts is the identity on clean recordings", "[rr]") {
    const auto s = make_rr_series({0.8, 0.82, 0.85, 0.84, 0.8});
    const auto result = filter_artifacts(s);
    CHECK(result.replaced == 0);
    CHECK(result.series.intervals == s.intervals);
}

TEST_CASE("filter_artifacts rejects recordings with over 20% artifacts", "[rr]") {
    // 3 of 10 beats out of range.
    const auto s = make_rr_series({0.8, 3.0, 0.8, 3.0, 0.8, 3.0, 0.8, 0.8, 0.8, 0.8});
    CHECK_THROWS_AS(filter_artifacts(s), DataQualityError);
}

TEST_CASE("filter_artifacts preserves beat count and is idempotent", "[rr]") {
    SeededRng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> intervals;
        for (int i = 0; i < 200; ++i) intervals.push_back(rng.uniform(0.76, 0.84));
        // Sprinkle a few isolated artifacts (well under the 20% budget).
        for (int k = 0; k < 6; ++k) {
            const auto idx = static_cast<std::size_t>(rng.uniform(1.0, 198.0));
            intervals[idx] = rng.uniform01() < 0.5 ? rng.uniform(2.5, 4.0) : rng.uniform(0.05, 0.2);
        }
        const auto s = make_rr_series(intervals);
        const auto once = filter_artifacts(s);
        CHECK(once.series.size() == s.size());
        const auto twice = filter_artifacts(once.series);
        REQUIRE(twice.series.size() == once.series.size());
        for (std::size_t i = 0; i < once.series.size(); ++i)
            CHECK(twice.series.intervals[i] == Catch::Approx(once.series.intervals[i]).margin(1e-12));
    }
}

TEST_CASE("ingest config invariants are enforced", "[rr]") {
    IngestConfig bad;
    bad.min_rr = 2.5;  // above max_rr
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
    bad = IngestConfig{};
    bad.max_relative_jump = 1.5;
    CHECK_THROWS_AS(bad.validate(), ArgumentError);
}
