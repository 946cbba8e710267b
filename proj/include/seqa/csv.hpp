#pragma once

// Minimal CSV support: comma separator, optional double-quoted fields with
// "" escapes. No multi-line fields.

#include <string>
#include <vector>

namespace seqa::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers; // 1-based source line of each row
};

std::vector<std::string> split_record(const std::string& line, std::size_t line_number);

// Reads header + records. Trailing blank lines are ignored; an interior
// blank line is an error.
Table read_file(const std::string& path);
Table read_string(const std::string& text, const std::string& origin = "<string>");

std::string quote_field(const std::string& field);
std::string join_record(const std::vector<std::string>& fields);

} // namespace seqa::csv
