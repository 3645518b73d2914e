#include "owc/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <json.hpp>

namespace owc {

void Table::add_row(std::vector<Cell> row)
{
    if (row.size() != columns.size())
        throw std::invalid_argument("row width does not match the header");
    rows.push_back(std::move(row));
}

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, res.ptr};
}

namespace {

std::string cell_text(const Cell& cell)
{
    if (const auto* s = std::get_if<std::string>(&cell))
        return *s;
    if (const auto* d = std::get_if<double>(&cell))
        return format_double(*d);
    return std::to_string(std::get<long long>(cell));
}

} // namespace

std::string to_csv(const Table& table)
{
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i)
            out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += cell_text(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Table& table)
{
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            const auto& key = table.columns[i];
            if (const auto* s = std::get_if<std::string>(&row[i]))
                obj[key] = *s;
            else if (const auto* d = std::get_if<double>(&row[i]))
                obj[key] = *d;
            else
                obj[key] = std::get<long long>(row[i]);
        }
        doc.push_back(std::move(obj));
    }
    return doc.dump(2) + "\n";
}

void write_output(const std::string& path, const std::string& content)
{
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw std::runtime_error("cannot open output file: " + path);
    file << content;
    if (!file)
        throw std::runtime_error("failed writing output file: " + path);
}

} // namespace owc
