#pragma once

// Tidy-table result emission: CSV (UTF-8, comma separated, header row, LF
// endings) and JSON (array of row objects). Floats are printed in the
// shortest decimal form that round-trips to the same double.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace owc {

using Cell = std::variant<std::string, double, long long>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// Shortest round-trip decimal representation of a double.
std::string format_double(double value);

std::string to_csv(const Table& table);
std::string to_json(const Table& table);

/// Write a fully rendered document to `path`, or to stdout when the path
/// is empty. Throws std::runtime_error when the file cannot be written.
void write_output(const std::string& path, const std::string& content);

} // namespace owc
