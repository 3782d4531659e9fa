// Minimal CSV reader: comma-separated UTF-8 with an optional header row.
// Handles double-quoted fields with embedded commas/quotes, trims ASCII
// whitespace on unquoted cells, and rejects ragged rows with the offending
// 1-based row number.

#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace aocids::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

inline std::vector<std::string> split_line(const std::string& line, std::size_t row_no) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"' && trim(cell).empty()) {
            quoted = true;
            cell.clear();
        } else if (c == ',') {
            cells.push_back(trim(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    if (quoted) {
        throw std::runtime_error("csv: unterminated quote at row " + std::to_string(row_no));
    }
    cells.push_back(trim(cell));
    return cells;
}

}  // namespace detail

// `column_names`: supplies the header for headerless files; must be empty
// when has_header is true.
inline Table read(std::istream& in, bool has_header,
                  const std::vector<std::string>& column_names = {}) {
    Table table;
    std::string line;
    std::size_t row_no = 0;
    bool header_done = false;

    if (!has_header) {
        if (column_names.empty()) {
            throw std::invalid_argument("csv: headerless input requires column names");
        }
        table.header = column_names;
        header_done = true;
    }

    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        auto cells = detail::split_line(line, row_no);
        if (!header_done) {
            table.header = cells;
            header_done = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw std::runtime_error("csv: row " + std::to_string(row_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (!header_done) throw std::runtime_error("csv: empty input");
    return table;
}

inline Table read_file(const std::string& path, bool has_header,
                       const std::vector<std::string>& column_names = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("csv: cannot open " + path);
    try {
        return read(in, has_header, column_names);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(e.what()) + " (" + path + ")");
    }
}

}  // namespace aocids::csv
