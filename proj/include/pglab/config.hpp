#pragma once

#include <map>
#include <string>
#include <vector>

namespace pglab::config {

// Key-value text with optional bracketed sections:
//
//   steps = 20
//   [defaults]
//   delta_a = 0.05
//   [firm 1]
//   e = 0.5
//
// Keys before the first section header land in `globals`. Section order is
// preserved. '#' starts a comment; blank lines are ignored.
struct Section {
    std::string name;
    std::map<std::string, std::string> values;
};

struct File {
    std::map<std::string, std::string> globals;
    std::vector<Section> sections;

    bool has(const std::string& key) const { return globals.count(key) != 0; }
    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
};

File parse(std::istream& in, const std::string& origin);
File load(const std::string& path);

double section_number(const Section&, const std::string& key, double fallback);

} // namespace pglab::config
