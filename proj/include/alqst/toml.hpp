#ifndef ALQST_TOML_HPP
#define ALQST_TOML_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace alqst::toml {

// Minimal TOML subset: [table] headers, key = value lines with strings,
// integers, floats, booleans and flat arrays, plus # comments. Enough
// for run configs; nested tables and multi-line values are not parsed.
struct Value {
    std::variant<std::string, std::int64_t, double, bool,
                 std::vector<std::string>, std::vector<double>>
        data;

    const std::string& as_string() const;
    std::int64_t as_integer() const;
    double as_number() const;  // accepts integers too
    bool as_boolean() const;
    std::vector<std::string> as_string_array() const;
    std::vector<double> as_number_array() const;
};

class Table {
public:
    // keys are "section.key", or bare "key" for the root table
    std::map<std::string, Value> entries;

    bool contains(const std::string& key) const { return entries.count(key) > 0; }
    const Value& at(const std::string& key) const;
    std::optional<Value> get(const std::string& key) const;
    std::vector<std::string> keys_with_prefix(const std::string& prefix) const;
};

Table parse(const std::string& text, const std::string& origin = "<string>");
Table parse_file(const std::filesystem::path& path);

} // namespace alqst::toml

#endif
