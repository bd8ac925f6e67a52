#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqmct/procedures.hpp"

namespace seqmct {

inline constexpr const char* kVersion = "0.1.0";

/// Malformed input; message names the offending file and line.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Reads a p-value vector. A file whose first non-space character is '['
/// (or whose name ends in .json) is parsed as a JSON array; otherwise CSV
/// with one value per line. Lines starting with '#' and blank lines are
/// skipped.
PValueVector read_pvalues(const std::string& path);

/// Data matrix for the permutation source. CSV whose header row holds the
/// binary group label (0 or 1) of each observation column; every following
/// row is one hypothesis.
struct LabeledMatrix {
    std::vector<std::vector<double>> data;  // [hypothesis][observation]
    std::vector<int> labels;
};
LabeledMatrix read_matrix(const std::string& path);

/// CSV with '#'-prefixed metadata lines, then a header row, then rows.
struct CsvTable {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const;
};
CsvTable parse_csv_table(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Full-precision decimal formatting for doubles (up to 17 significant
/// digits, shortest exact round trip).
std::string format_double(double x);

std::string format_index_set_1based(const IndexSet& s);

}  // namespace seqmct
