#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pglab::csv {

// One parsed CSV body row plus the 1-based line number it came from,
// so validation errors can point at the offending line.
struct Row {
    long line = 0;
    std::vector<std::string> fields;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;
};

std::vector<std::string> split(const std::string& line);

// Reads a comma-separated table. Lines starting with '#' are provenance
// comments and are skipped; the first remaining line is the header.
Table read_table(std::istream& in, const std::string& origin);
Table read_file(const std::string& path);

// Strict finite-number parse; throws input_error naming `context` on failure.
double parse_number(const std::string& field, const std::string& context);

std::string join(const std::vector<std::string>& fields);

// Shortest decimal form that round-trips the exact double, so written tables
// reload field-identical.
std::string fmt(double v);

} // namespace pglab::csv
