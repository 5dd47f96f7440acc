#include "smslab/toml.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace smslab::toml {

namespace {

std::string trim(const std::string& s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg)
{
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

// strip a trailing comment that is not inside a quoted string
std::string strip_comment(const std::string& s)
{
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

}  // namespace

Table parse_string(const std::string& text, const std::string& origin)
{
    Table table;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;

    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, lineno, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail(origin, lineno, "empty section name");
            continue;
        }

        auto eq = line.find('=');
        if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail(origin, lineno, "empty key");
        if (val.empty()) fail(origin, lineno, "empty value for key '" + key + "'");

        Value v;
        v.line = lineno;
        if (val.front() == '"') {
            if (val.size() < 2 || val.back() != '"') fail(origin, lineno, "unterminated string");
            v.v = val.substr(1, val.size() - 2);
        } else if (val == "true" || val == "false") {
            v.v = (val == "true");
        } else {
            try {
                std::size_t used = 0;
                v.v = std::stod(val, &used);
                if (used != val.size()) fail(origin, lineno, "malformed number '" + val + "'");
            } catch (const std::invalid_argument&) {
                fail(origin, lineno, "malformed value '" + val + "' (strings need quotes)");
            }
        }

        const std::string full = section.empty() ? key : section + "." + key;
        if (table.entries.count(full)) fail(origin, lineno, "duplicate key '" + full + "'");
        table.entries[full] = std::move(v);
    }
    return table;
}

Table parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str(), path);
}

}  // namespace smslab::toml
