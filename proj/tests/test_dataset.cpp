#include "lcr/dataset.hpp"
#include "lcr/error.hpp"
#include "lcr/synthkit.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace lcr;

namespace {

std::string header() {
    std::string h = "RowID,Label";
    for (const auto& v : canonical_variables()) h += "," + v;
    return h + "\n";
}

std::string row(int id, const std::string& label, double base) {
    std::ostringstream s;
    s << id << ',' << label;
    for (std::size_t j = 0; j < canonical_variables().size(); ++j) s << ',' << base + 0.5 * static_cast<double>(j);
    s << '\n';
    return s.str();
}

Dataset parse(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

Dataset random_dataset(std::uint64_t seed, std::size_t n) {
    synth::Rng rng(seed);
    Dataset d;
    d.variables = canonical_variables();
    for (std::size_t i = 0; i < n; ++i) {
        LocationRecord r;
        r.row_id = static_cast<std::int64_t>(i + 1);
        r.label = "loc_" + std::to_string(i);
        for (std::size_t j = 0; j < d.variables.size(); ++j) r.values.push_back(rng.normal() * (1.0 + j) + 3.0 * j);
        d.records.push_back(r);
    }
    return d;
}

}  // namespace

TEST_CASE("parse_csv reads one record per data row in file order") {
    std::string text = header();
    for (int i = 1; i <= 211; ++i) text += row(i, "city_" + std::to_string(i), i * 0.01);
    const auto d = parse(text);
    CHECK(d.size() == 211);
    CHECK(d.records.front().row_id == 1);
    CHECK(d.records.back().label == "city_211");
    CHECK(d.records[4].values[d.index_of("Change PM")] == doctest::Approx(0.05 + 2.0));
    CHECK(d.warnings.empty());
}

TEST_CASE("parse_csv on a header-only file yields an empty dataset") {
    const auto d = parse(header());
    CHECK(d.size() == 0);
    CHECK(d.variables == canonical_variables());
}

TEST_CASE("parse_csv reports non-numeric cells with row and column") {
    std::string text = header() + row(1, "a", 1.0);
    std::string bad = row(2, "b", 1.0);
    // Change PM is the fifth value column, i.e. the seventh cell.
    std::size_t pos = 0;
    for (int i = 0; i < 6; ++i) pos = bad.find(',', pos) + 1;
    bad.replace(pos, bad.find(',', pos) - pos, "abc");
    try {
        parse(text + bad);
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        const std::string msg = e.what();
        CHECK(msg.find("line 3") != std::string::npos);
        CHECK(msg.find("Change PM") != std::string::npos);
    }
}

TEST_CASE("parse_csv schema and validation errors") {
    SUBCASE("missing required column is named") {
        std::string h = header();
        h.replace(h.find(",copd_d"), 7, ",copd");
        try {
            parse(h);
            FAIL("expected schema error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Schema);
            CHECK(std::string(e.what()).find("copd_d") != std::string::npos);
        }
    }
    SUBCASE("duplicate RowID") {
        try {
            parse(header() + row(7, "a", 1.0) + row(7, "b", 2.0));
            FAIL("expected validation error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Validation);
        }
    }
    SUBCASE("non-finite values are rejected") {
        std::string r = row(1, "a", 1.0);
        r.replace(r.rfind(',') + 1, std::string::npos, "nan\n");
        CHECK_THROWS_AS(parse(header() + r), Error);
    }
    SUBCASE("missing values are rejected") {
        std::string r = row(1, "a", 1.0);
        r.replace(r.rfind(',') + 1, std::string::npos, "\n");
        CHECK_THROWS_AS(parse(header() + r), Error);
    }
}

TEST_CASE("parse_csv ignores extra columns with a warning and accepts quoted labels") {
    std::string h = header();
    h.pop_back();
    h += ",TrueCluster\n";
    std::string r = row(3, "\"Salt Lake, UT\"", 1.0);
    r.pop_back();
    r += ",4\n";
    const auto d = parse(h + r);
    REQUIRE(d.size() == 1);
    CHECK(d.records[0].label == "Salt Lake, UT");
    REQUIRE(d.warnings.size() == 1);
    CHECK(d.warnings[0].find("TrueCluster") != std::string::npos);
}

TEST_CASE("write_csv then parse_csv reproduces every record") {
    auto d = random_dataset(11, 40);
    d.records[3].label = "has,comma";
    std::stringstream s;
    write_csv(d, s);
    const auto back = parse_csv(s);
    REQUIRE(back.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(back.records[i].row_id == d.records[i].row_id);
        CHECK(back.records[i].label == d.records[i].label);
        for (std::size_t j = 0; j < d.variables.size(); ++j) {
            CHECK(std::fabs(back.records[i].values[j] - d.records[i].values[j]) <= 1e-12 * std::max(1.0, std::fabs(d.records[i].values[j])));
        }
    }
}

TEST_CASE("exclude_rows") {
    const auto d = random_dataset(3, 211);
    SUBCASE("drops the listed row and records why") {
        const auto e = exclude_rows(d, {128}, "outlier (5600_NYOR_NY)");
        CHECK(e.size() == 210);
        REQUIRE(e.excluded.size() == 1);
        CHECK(e.excluded[0].row_id == 128);
        CHECK(e.excluded[0].reason == "outlier (5600_NYOR_NY)");
        for (const auto& r : e.records) CHECK(r.row_id != 128);
        CHECK(e.records[126].row_id == 127);
        CHECK(e.records[127].row_id == 129);
    }
    SUBCASE("empty list is the identity") {
        const auto e = exclude_rows(d, {}, "none");
        CHECK(e.records == d.records);
        CHECK(e.excluded.empty());
    }
    SUBCASE("repeated ids exclude once") {
        const auto once = exclude_rows(d, {128}, "x");
        const auto twice = exclude_rows(d, {128, 128}, "x");
        CHECK(once.records == twice.records);
        CHECK(once.excluded == twice.excluded);
    }
    SUBCASE("absent ids only warn") {
        const auto e = exclude_rows(d, {9999}, "x");
        CHECK(e.size() == 211);
        REQUIRE(e.warnings.size() == 1);
        CHECK(e.warnings[0].find("9999") != std::string::npos);
    }
}

TEST_CASE("summary_stats uses the n-1 denominator") {
    Dataset d;
    d.variables = {"v"};
    d.records = {{1, "a", {1.0}}, {2, "b", {3.0}}};
    const auto s = summary_stats(d);
    CHECK(s.at("v").mean == doctest::Approx(2.0));
    CHECK(s.at("v").sd == doctest::Approx(std::sqrt(2.0)));
    CHECK(s.at("v").n == 2);

    d.records = {{1, "a", {4.5}}, {2, "b", {4.5}}, {3, "c", {4.5}}};
    CHECK(summary_stats(d).at("v").sd == 0.0);
    CHECK(summary_stats(d).at("v").mean == doctest::Approx(4.5));

    d.records.resize(1);
    CHECK_THROWS_AS(summary_stats(d), Error);
}

TEST_CASE("standardize") {
    SUBCASE("symmetric column") {
        Dataset d;
        d.variables = {"v"};
        d.records = {{1, "a", {1.0}}, {2, "b", {2.0}}, {3, "c", {3.0}}};
        const auto z = standardize(d, {"v"});
        CHECK(z.values(0, 0) == doctest::Approx(-1.0));
        CHECK(z.values(1, 0) == doctest::Approx(0.0));
        CHECK(z.values(2, 0) == doctest::Approx(1.0));
        CHECK(z.centers[0] == doctest::Approx(2.0));
        CHECK(z.scales[0] == doctest::Approx(1.0));
    }
    SUBCASE("constant column names the variable") {
        Dataset d;
        d.variables = {"flat"};
        d.records = {{1, "a", {2.0}}, {2, "b", {2.0}}};
        try {
            standardize(d, {"flat"});
            FAIL("expected degenerate-column error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DegenerateColumn);
            CHECK(std::string(e.what()).find("flat") != std::string::npos);
        }
    }
    SUBCASE("columns have mean 0 and sd 1; standardizing twice changes nothing") {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            const auto d = random_dataset(seed, 37);
            const auto z = standardize(d, d.variables);
            for (std::size_t c = 0; c < z.values.cols(); ++c) {
                const auto col = z.values.column(c);
                CHECK(std::fabs(sample_mean(col)) <= 1e-10);
                CHECK(std::fabs(sample_sd(col) - 1.0) <= 1e-10);
            }
            const auto zz = standardize(z.values, z.columns);
            for (std::size_t r = 0; r < z.values.rows(); ++r) {
                for (std::size_t c = 0; c < z.values.cols(); ++c) {
                    CHECK(std::fabs(zz.values(r, c) - z.values(r, c)) <= 1e-10);
                }
            }
        }
    }
}
