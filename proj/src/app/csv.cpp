#include "simlm/app/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace simlm::app {

std::size_t CsvTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw std::out_of_range("csv: no column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::numeric_column(std::string_view name) const {
    const auto c = column_index(name);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(parse_number(r.at(c)));
    return out;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view s) {
    if (s == "nan" || s == "-nan") return NAN;
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double x = 0.0;
    const char* first = s.data();
    if (!s.empty() && s.front() == '+') ++first;
    const auto res = std::from_chars(first, s.data() + s.size(), x);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw std::invalid_argument("csv: not a number: '" + std::string(s) + "'");
    }
    return x;
}

std::vector<std::string> format_row(std::span<const double> values) {
    std::vector<std::string> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(format_number(v));
    return out;
}

namespace {

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i].find_first_of(",\r\n") != std::string::npos) {
            throw std::invalid_argument("csv: cell contains a separator: '" + cells[i] + "'");
        }
        if (i) os << ',';
        os << cells[i];
    }
    os << '\n';
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

}  // namespace

void write_csv(std::ostream& os, const CsvTable& table) {
    write_line(os, table.header);
    for (const auto& r : table.rows) {
        if (r.size() != table.header.size()) throw std::invalid_argument("csv: ragged row");
        write_line(os, r);
    }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("csv: cannot open " + path.string() + " for writing");
    write_csv(os, table);
    if (!os) throw std::runtime_error("csv: write failed for " + path.string());
}

CsvTable read_csv(std::istream& is) {
    CsvTable t;
    std::string line;
    if (!std::getline(is, line)) throw std::invalid_argument("csv: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split(line);
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.header.size()) throw std::invalid_argument("csv: ragged row: " + line);
        t.rows.push_back(std::move(cells));
    }
    return t;
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("csv: cannot open " + path.string());
    return read_csv(is);
}

}  // namespace simlm::app
