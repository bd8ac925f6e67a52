#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <string>

#include "seqmct/io.hpp"
#include "seqmct/rng.hpp"

using namespace seqmct;

namespace {

struct TempFile {
    std::string path;
    TempFile(const std::string& name, const std::string& content)
        : path("/tmp/seqmct_io_test_" + name) {
        write_file(path, content);
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("read_pvalues: CSV one per line, comments and blanks skipped") {
    TempFile f("p.csv", "# a comment\n0.5\n\n0.01\n1\n");
    CHECK(read_pvalues(f.path) == PValueVector{0.5, 0.01, 1.0});
}

TEST_CASE("read_pvalues: JSON array") {
    TempFile f("p.json", "[0.25, 0.75, 0]");
    CHECK(read_pvalues(f.path) == PValueVector{0.25, 0.75, 0.0});
}

TEST_CASE("read_pvalues: errors carry file and line") {
    TempFile f("bad.csv", "0.5\nnot-a-number\n");
    try {
        read_pvalues(f.path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find(f.path) != std::string::npos);
        CHECK(msg.find(":2") != std::string::npos);
    }
    TempFile out_of_range("range.csv", "1.5\n");
    CHECK_THROWS_AS(read_pvalues(out_of_range.path), ParseError);
    CHECK_THROWS_AS(read_pvalues("/tmp/seqmct_io_test_missing.csv"), ParseError);
}

TEST_CASE("read_matrix: header labels then one row per hypothesis") {
    TempFile f("m.csv", "# note\n0,0,1,1\n1.5,2.5,3.5,4.5\n0,0,0,0\n");
    const auto m = read_matrix(f.path);
    CHECK(m.labels == std::vector<int>{0, 0, 1, 1});
    REQUIRE(m.data.size() == 2);
    CHECK(m.data[0] == std::vector<double>{1.5, 2.5, 3.5, 4.5});

    TempFile ragged("ragged.csv", "0,1\n1.0,2.0\n3.0\n");
    CHECK_THROWS_AS(read_matrix(ragged.path), ParseError);
    TempFile badlabel("badlabel.csv", "0,2\n1.0,2.0\n");
    CHECK_THROWS_AS(read_matrix(badlabel.path), ParseError);
}

TEST_CASE("CsvTable: round trip through to_string and parse") {
    CsvTable t;
    t.metadata = {{"version", kVersion}, {"seed", "42"}};
    t.columns = {"method", "param", "mis"};
    t.rows = {{"naive", "1000", "2.5"}, {"mcfdr", "20", "0"}};
    const auto parsed = parse_csv_table(t.to_string());
    CHECK(parsed.metadata == t.metadata);
    CHECK(parsed.columns == t.columns);
    CHECK(parsed.rows == t.rows);
}

TEST_CASE("format_double: integral values print without exponent") {
    CHECK(format_double(10000.0) == "10000");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-3.0) == "-3");
}

TEST_CASE("format_double: shortest exact round trip") {
    CHECK(std::stod(format_double(0.1)) == 0.1);
    CHECK(format_double(0.1) == "0.1");
    SplitMix64 rng(8);
    for (int rep = 0; rep < 1000; ++rep) {
        const double x = (rng.next_double() - 0.5) * std::pow(10.0, rep % 20 - 10);
        CHECK(std::stod(format_double(x)) == x);
    }
}

TEST_CASE("format_index_set_1based") {
    CHECK(format_index_set_1based({}) == "");
    CHECK(format_index_set_1based({0, 2, 5}) == "1 3 6");
}
