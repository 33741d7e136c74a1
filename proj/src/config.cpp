#include "pglab/config.hpp"

#include "pglab/csv.hpp"
#include "pglab/error.hpp"

#include <fstream>

namespace pglab::config {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

File parse(std::istream& in, const std::string& origin) {
    File f;
    std::string line;
    long lineno = 0;
    Section* current = nullptr;
    while (std::getline(in, line)) {
        ++lineno;
        std::string::size_type hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string s = trim(line);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw input_error(origin + ":" + std::to_string(lineno) + ": unterminated section header");
            f.sections.push_back(Section{trim(s.substr(1, s.size() - 2)), {}});
            current = &f.sections.back();
            continue;
        }
        std::string::size_type eq = s.find('=');
        if (eq == std::string::npos)
            throw input_error(origin + ":" + std::to_string(lineno) + ": expected 'name = value'");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty())
            throw input_error(origin + ":" + std::to_string(lineno) + ": empty key");
        auto& dst = current ? current->values : f.globals;
        dst[key] = val;
    }
    return f;
}

File load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open " + path);
    return parse(in, path);
}

double File::number(const std::string& key) const {
    auto it = globals.find(key);
    if (it == globals.end())
        throw input_error("missing config key '" + key + "'");
    return csv::parse_number(it->second, key);
}

double File::number_or(const std::string& key, double fallback) const {
    auto it = globals.find(key);
    return it == globals.end() ? fallback : csv::parse_number(it->second, key);
}

std::string File::text_or(const std::string& key, const std::string& fallback) const {
    auto it = globals.find(key);
    return it == globals.end() ? fallback : it->second;
}

double section_number(const Section& s, const std::string& key, double fallback) {
    auto it = s.values.find(key);
    return it == s.values.end() ? fallback : csv::parse_number(it->second, key);
}

} // namespace pglab::config
