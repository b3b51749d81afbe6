#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "wtrace/core.hpp"

namespace wtrace {

/// One documented configuration key.
struct ConfigKey {
    std::string_view name;
    std::string_view default_value;
    std::string_view help;
};

/// Every key the toolkit understands, with its default.
const std::vector<ConfigKey>& config_keys();

/// Flat `key = value` configuration.
///
/// Grammar: one assignment per line; `#` starts a comment; blank lines are
/// ignored; keys are dotted identifiers from config_keys(); values run to the
/// end of the line with surrounding blanks trimmed; lists are comma
/// separated. Unknown or repeated keys are rejected with the line number.
class Config {
public:
    Config() = default;

    static Config parse(std::string_view text, std::string_view origin = "<config>");
    static Config load(const std::string& path);

    /// Overrides (or sets) one key; the key must be known.
    void set(std::string_view key, std::string value);

    bool is_set(std::string_view key) const;
    /// The configured value or the documented default.
    std::string text(std::string_view key) const;
    double number(std::string_view key) const;
    long long integer(std::string_view key) const;
    std::uint64_t unsigned_integer(std::string_view key) const;
    bool boolean(std::string_view key) const;
    std::vector<double> numbers(std::string_view key) const;

    /// All keys with their effective values, sorted by name.
    std::map<std::string, std::string> effective() const;

private:
    std::map<std::string, std::string, std::less<>> values_;
};

}  // namespace wtrace
