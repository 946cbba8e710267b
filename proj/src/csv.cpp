#include "seqa/csv.hpp"

#include "seqa/error.hpp"

#include <fstream>
#include <sstream>

namespace seqa::csv {

std::vector<std::string> split_record(const std::string& line, std::size_t line_number) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    std::size_t i = 0;
    const std::size_t n = line.size();
    out.reserve(8);
    while (i <= n) {
        if (i == n) {
            if (quoted)
                throw DataError("line " + std::to_string(line_number) + ": unterminated quoted field");
            out.push_back(field);
            break;
        }
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < n && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            out.push_back(field);
            field.clear();
        } else {
            field.push_back(c);
        }
        ++i;
    }
    return out;
}

static Table read_stream(std::istream& in, const std::string& origin) {
    Table t;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::size_t> blank_lines;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            blank_lines.push_back(line_no);
            continue;
        }
        if (!blank_lines.empty())
            throw DataError(origin + ": blank line " + std::to_string(blank_lines.front()));
        auto fields = split_record(line, line_no);
        if (!have_header) {
            t.header = std::move(fields);
            have_header = true;
        } else {
            t.rows.push_back(std::move(fields));
            t.line_numbers.push_back(line_no);
        }
    }
    if (!have_header) throw DataError(origin + ": empty file, header expected");
    return t;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return read_stream(in, path);
}

Table read_string(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    return read_stream(in, origin);
}

std::string quote_field(const std::string& field) {
    bool needs_quote = false;
    for (char c : field)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') { needs_quote = true; break; }
    if (!needs_quote) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string join_record(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += quote_field(fields[i]);
    }
    return out;
}

} // namespace seqa::csv
