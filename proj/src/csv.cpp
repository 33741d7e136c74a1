#include "pglab/csv.hpp"

#include "pglab/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pglab::csv {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

Table read_table(std::istream& in, const std::string& origin) {
    Table t;
    std::string line;
    long lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (!have_header) {
            t.header = split(line);
            have_header = true;
            continue;
        }
        t.rows.push_back(Row{lineno, split(line)});
    }
    if (!have_header)
        throw input_error(origin + ": missing header row");
    return t;
}

Table read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open " + path);
    return read_table(in, path);
}

double parse_number(const std::string& field, const std::string& context) {
    try {
        std::size_t pos = 0;
        double v = std::stod(field, &pos);
        while (pos < field.size() && (field[pos] == ' ' || field[pos] == '\t')) ++pos;
        if (pos != field.size() || !std::isfinite(v))
            throw input_error("");
        return v;
    } catch (const std::exception&) {
        throw input_error(context + ": not a finite number: '" + field + "'");
    }
}

std::string fmt(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += fields[i];
    }
    return out;
}

} // namespace pglab::csv
