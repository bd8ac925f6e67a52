#include "seqmct/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace seqmct {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
}

std::string format_double(double x) {
    char buf[40];
    if (x == static_cast<double>(static_cast<long long>(x)) &&
        std::fabs(x) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(x));
        return buf;
    }
    // Shortest representation that round-trips exactly.
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == x) return buf;
    }
    return buf;
}

std::string format_index_set_1based(const IndexSet& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ' ';
        out += std::to_string(s[i] + 1);
    }
    return out;
}

namespace {

double parse_pvalue(const std::string& token, const std::string& path,
                    std::size_t line_no) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": not a number: '" + token + "'");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": p-value out of [0,1]: " + token);
    }
    return value;
}

std::string strip(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(strip(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

PValueVector read_pvalues(const std::string& path) {
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool is_json = path.ends_with(".json") ||
                         (first != std::string::npos && text[first] == '[');
    PValueVector values;

    if (is_json) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(path + ": " + e.what());
        }
        if (!j.is_array()) throw ParseError(path + ": expected a JSON array");
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (!j[i].is_number()) {
                throw ParseError(path + ": element " + std::to_string(i + 1) +
                                 " is not a number");
            }
            const double v = j[i].get<double>();
            if (!(v >= 0.0 && v <= 1.0)) {
                throw ParseError(path + ": element " + std::to_string(i + 1) +
                                 " out of [0,1]");
            }
            values.push_back(v);
        }
    } else {
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string token = strip(line);
            if (token.empty() || token[0] == '#') continue;
            values.push_back(parse_pvalue(token, path, line_no));
        }
    }
    if (values.empty()) throw ParseError(path + ": no p-values found");
    return values;
}

LabeledMatrix read_matrix(const std::string& path) {
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    LabeledMatrix out;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = strip(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto cells = split_csv_line(stripped);
        if (out.labels.empty()) {
            for (const std::string& c : cells) {
                if (c == "0") {
                    out.labels.push_back(0);
                } else if (c == "1") {
                    out.labels.push_back(1);
                } else {
                    throw ParseError(path + ":" + std::to_string(line_no) +
                                     ": header label must be 0 or 1, got '" + c + "'");
                }
            }
            continue;
        }
        if (cells.size() != out.labels.size()) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(out.labels.size()) + " columns, got " +
                             std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const std::string& c : cells) {
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc{} || ptr != c.data() + c.size()) {
                throw ParseError(path + ":" + std::to_string(line_no) +
                                 ": not a number: '" + c + "'");
            }
            row.push_back(v);
        }
        out.data.push_back(std::move(row));
    }
    if (out.labels.empty()) throw ParseError(path + ": missing label header row");
    if (out.data.empty()) throw ParseError(path + ": no data rows");
    return out;
}

std::string CsvTable::to_string() const {
    std::ostringstream out;
    for (const auto& [key, value] : metadata) {
        out << "# " << key << "=" << value << "\n";
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out << ",";
        out << columns[i];
    }
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << row[i];
        }
        out << "\n";
    }
    return out.str();
}

CsvTable parse_csv_table(const std::string& text) {
    CsvTable table;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        const std::string stripped = strip(line);
        if (stripped.empty()) continue;
        if (stripped[0] == '#') {
            const std::string body = strip(stripped.substr(1));
            const auto eq = body.find('=');
            if (eq == std::string::npos) {
                table.metadata.emplace_back(body, "");
            } else {
                table.metadata.emplace_back(strip(body.substr(0, eq)),
                                            strip(body.substr(eq + 1)));
            }
            continue;
        }
        if (!header_seen) {
            table.columns = split_csv_line(stripped);
            header_seen = true;
        } else {
            table.rows.push_back(split_csv_line(stripped));
        }
    }
    return table;
}

}  // namespace seqmct
