#include "alqst/toml.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace alqst::toml {

namespace {

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + message);
}

std::string_view trim(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' ||
                             text.back() == '\r')) {
        text.remove_suffix(1);
    }
    return text;
}

// strips a trailing comment that is not inside a string literal
std::string_view strip_comment(std::string_view text) {
    bool in_string = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '"') {
            in_string = !in_string;
        } else if (text[i] == '#' && !in_string) {
            return text.substr(0, i);
        }
    }
    return text;
}

Value parse_scalar(std::string_view token, const std::string& origin, int line) {
    if (token.empty()) {
        fail(origin, line, "empty value");
    }
    if (token.front() == '"') {
        if (token.size() < 2 || token.back() != '"') {
            fail(origin, line, "unterminated string");
        }
        return Value{std::string(token.substr(1, token.size() - 2))};
    }
    if (token == "true") {
        return Value{true};
    }
    if (token == "false") {
        return Value{false};
    }
    // integer first, then float
    std::int64_t integer = 0;
    auto int_result = std::from_chars(token.data(), token.data() + token.size(), integer);
    if (int_result.ec == std::errc{} && int_result.ptr == token.data() + token.size()) {
        return Value{integer};
    }
    try {
        std::size_t used = 0;
        const double number = std::stod(std::string(token), &used);
        if (used == token.size()) {
            return Value{number};
        }
    } catch (const std::exception&) {
    }
    fail(origin, line, "cannot parse value '" + std::string(token) + "'");
}

Value parse_array(std::string_view body, const std::string& origin, int line) {
    std::vector<std::string> strings;
    std::vector<double> numbers;
    bool any_string = false, any_number = false;
    std::size_t start = 0;
    bool in_string = false;
    auto flush = [&](std::string_view token) {
        token = trim(token);
        if (token.empty()) {
            return;
        }
        const Value value = parse_scalar(token, origin, line);
        if (std::holds_alternative<std::string>(value.data)) {
            any_string = true;
            strings.push_back(std::get<std::string>(value.data));
        } else if (std::holds_alternative<std::int64_t>(value.data)) {
            any_number = true;
            numbers.push_back(static_cast<double>(std::get<std::int64_t>(value.data)));
        } else if (std::holds_alternative<double>(value.data)) {
            any_number = true;
            numbers.push_back(std::get<double>(value.data));
        } else {
            fail(origin, line, "unsupported array element");
        }
    };
    for (std::size_t i = 0; i < body.size(); ++i) {
        if (body[i] == '"') {
            in_string = !in_string;
        } else if (body[i] == ',' && !in_string) {
            flush(body.substr(start, i - start));
            start = i + 1;
        }
    }
    flush(body.substr(start));
    if (any_string && any_number) {
        fail(origin, line, "mixed array element types");
    }
    if (any_string) {
        return Value{strings};
    }
    return Value{numbers};
}

} // namespace

const std::string& Value::as_string() const {
    if (!std::holds_alternative<std::string>(data)) {
        throw std::runtime_error("config value is not a string");
    }
    return std::get<std::string>(data);
}

std::int64_t Value::as_integer() const {
    if (std::holds_alternative<std::int64_t>(data)) {
        return std::get<std::int64_t>(data);
    }
    throw std::runtime_error("config value is not an integer");
}

double Value::as_number() const {
    if (std::holds_alternative<double>(data)) {
        return std::get<double>(data);
    }
    if (std::holds_alternative<std::int64_t>(data)) {
        return static_cast<double>(std::get<std::int64_t>(data));
    }
    throw std::runtime_error("config value is not a number");
}

bool Value::as_boolean() const {
    if (!std::holds_alternative<bool>(data)) {
        throw std::runtime_error("config value is not a boolean");
    }
    return std::get<bool>(data);
}

std::vector<std::string> Value::as_string_array() const {
    if (!std::holds_alternative<std::vector<std::string>>(data)) {
        throw std::runtime_error("config value is not a string array");
    }
    return std::get<std::vector<std::string>>(data);
}

std::vector<double> Value::as_number_array() const {
    if (std::holds_alternative<std::vector<double>>(data)) {
        return std::get<std::vector<double>>(data);
    }
    throw std::runtime_error("config value is not a numeric array");
}

const Value& Table::at(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) {
        throw std::runtime_error("missing config key '" + key + "'");
    }
    return it->second;
}

std::optional<Value> Table::get(const std::string& key) const {
    auto it = entries.find(key);
    if (it == entries.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<std::string> Table::keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> keys;
    for (const auto& [key, value] : entries) {
        if (key.rfind(prefix, 0) == 0) {
            keys.push_back(key);
        }
    }
    return keys;
}

Table parse(const std::string& text, const std::string& origin) {
    Table table;
    std::istringstream stream(text);
    std::string raw_line;
    std::string section;
    int line_number = 0;
    while (std::getline(stream, raw_line)) {
        ++line_number;
        const std::string_view line = trim(strip_comment(raw_line));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                fail(origin, line_number, "malformed table header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(origin, line_number, "expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) {
            fail(origin, line_number, "empty key");
        }
        const std::string_view value_text = trim(line.substr(eq + 1));
        const std::string full_key = section.empty() ? key : section + "." + key;
        if (table.entries.count(full_key)) {
            fail(origin, line_number, "duplicate key '" + full_key + "'");
        }
        if (!value_text.empty() && value_text.front() == '[') {
            if (value_text.back() != ']') {
                fail(origin, line_number, "unterminated array");
            }
            table.entries.emplace(
                full_key,
                parse_array(value_text.substr(1, value_text.size() - 2), origin,
                            line_number));
        } else {
            table.entries.emplace(full_key, parse_scalar(value_text, origin, line_number));
        }
    }
    return table;
}

Table parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), path.string());
}

} // namespace alqst::toml
