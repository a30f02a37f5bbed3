#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "tentkit/exponents.hpp"

namespace tentkit {

// Flat key=value configuration. '#' starts a comment; blank lines are
// ignored. Later assignments (and overrides) win over earlier ones.
class Config {
public:
    static Config parse(std::string_view text, const std::string& origin = "<string>");
    static Config load(const std::string& path);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& entries() const { return values_; }

    std::optional<std::string> get(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    Exponent get_exponent(const std::string& key, Exponent fallback) const;

    // Throws config.unknown_key naming the first key not in `allowed`.
    void reject_unknown(const std::set<std::string>& allowed) const;

private:
    std::map<std::string, std::string> values_;
};

// Keys: dimension, p_minus_L, q_plus_L, p_minus_Lstar, q_plus_Lstar.
// Missing critical numbers default to the Laplacian's. The strict
// invariant is enforced unless `hypothetical` is set to true.
ExponentProfile profile_from_config(const Config& config);

} // namespace tentkit
