#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>

namespace smslab::toml {

/// Minimal TOML subset: [section] headers, key = value lines, # comments.
/// Values are strings ("..."), booleans, or numbers. Parse errors carry
/// line numbers.
struct Value {
    std::variant<double, bool, std::string> v;
    int line = 0;

    bool is_number() const { return std::holds_alternative<double>(v); }
    bool is_bool() const { return std::holds_alternative<bool>(v); }
    bool is_string() const { return std::holds_alternative<std::string>(v); }
    double number() const { return std::get<double>(v); }
    bool boolean() const { return std::get<bool>(v); }
    const std::string& text() const { return std::get<std::string>(v); }
};

struct Table {
    // keys are "section.key"
    std::map<std::string, Value> entries;

    const Value* find(const std::string& key) const
    {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    }
};

Table parse_file(const std::string& path);
Table parse_string(const std::string& text, const std::string& origin = "<string>");

}  // namespace smslab::toml
