#pragma once

// Minimal CSV for the numeric artifacts: no quoting, '\n' line endings,
// numbers in shortest round-trip form. Parsing an emitted file and writing
// it again reproduces it byte for byte.

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sabroots/io/format.hpp"

namespace sabroots::io {

struct Empty {
    friend bool operator==(Empty, Empty) = default;
};

using Cell = std::variant<Empty, double, std::string>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

inline std::string cell_text(const Cell& c) {
    if (std::holds_alternative<Empty>(c)) return {};
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    const auto& s = std::get<std::string>(c);
    if (s.find_first_of(",\n\r") != std::string::npos) {
        throw std::invalid_argument("CSV text cell contains a separator: " + s);
    }
    return s;
}

inline std::string to_csv(const CsvTable& t) {
    std::string out;
    for (std::size_t k = 0; k < t.header.size(); ++k) {
        if (k) out += ',';
        out += cell_text(Cell{t.header[k]});
    }
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += cell_text(row[k]);
        }
        out += '\n';
    }
    return out;
}

inline Cell parse_cell(std::string_view s) {
    if (s.empty()) return Empty{};
    if (const auto v = parse_double(s); v && trim(s).size() == s.size()) return *v;
    return std::string(s);
}

inline CsvTable parse_csv(std::string_view text) {
    CsvTable t;
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw std::invalid_argument("CSV is empty");
    for (auto h : split(lines.front(), ',')) t.header.emplace_back(h);
    for (std::size_t k = 1; k < lines.size(); ++k) {
        std::vector<Cell> row;
        for (auto c : split(lines[k], ',')) row.push_back(parse_cell(c));
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace sabroots::io
