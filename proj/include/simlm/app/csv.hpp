#pragma once

// Minimal CSV tables: comma-separated, one header line, no quoting.
// Numbers are written in shortest round-trip form, so read(write(t)) == t.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simlm::app {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws std::out_of_range if absent.
    [[nodiscard]] std::size_t column_index(std::string_view name) const;
    /// Column parsed as numbers.
    [[nodiscard]] std::vector<double> numeric_column(std::string_view name) const;

    friend bool operator==(const CsvTable&, const CsvTable&) = default;
};

/// Shortest decimal string that parses back to the same double; "nan", "inf", "-inf" otherwise.
std::string format_number(double x);
/// Throws std::invalid_argument on trailing garbage or empty input.
double parse_number(std::string_view s);

std::vector<std::string> format_row(std::span<const double> values);

/// Throws std::invalid_argument if a cell contains a comma or line break, or a row is ragged.
void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::filesystem::path& path, const CsvTable& table);

CsvTable read_csv(std::istream& is);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace simlm::app
