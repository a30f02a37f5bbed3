#include "tentkit/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "tentkit/error.hpp"

namespace tentkit {

namespace {

std::string trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

} // namespace

Config Config::parse(std::string_view text, const std::string& origin)
{
    Config c;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            fail("config.syntax", origin + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) fail("config.syntax", origin + ":" + std::to_string(lineno) + ": empty key");
        c.values_[key] = value;
    }
    return c;
}

Config Config::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail("config.io", "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

std::optional<std::string> Config::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const
{
    return get(key).value_or(fallback);
}

double Config::get_double(const std::string& key, double fallback) const
{
    auto v = get(key);
    if (!v) return fallback;
    double out = 0;
    const char* b = v->data();
    const char* e = b + v->size();
    auto [ptr, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || ptr != e) {
        // allow ratios like 1/2
        try {
            return Exponent::parse(*v).value();
        } catch (const Error&) {
            fail("config.value", "key '" + key + "': not a number: '" + *v + "'");
        }
    }
    return out;
}

long Config::get_int(const std::string& key, long fallback) const
{
    auto v = get(key);
    if (!v) return fallback;
    long out = 0;
    const char* b = v->data();
    const char* e = b + v->size();
    auto [ptr, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || ptr != e) fail("config.value", "key '" + key + "': not an integer: '" + *v + "'");
    return out;
}

Exponent Config::get_exponent(const std::string& key, Exponent fallback) const
{
    auto v = get(key);
    if (!v) return fallback;
    try {
        return Exponent::parse(*v);
    } catch (const Error& e) {
        fail("config.value", "key '" + key + "': " + e.what());
    }
}

void Config::reject_unknown(const std::set<std::string>& allowed) const
{
    for (const auto& [k, v] : values_)
        if (!allowed.count(k)) fail("config.unknown_key", "unknown key '" + k + "'");
}

ExponentProfile profile_from_config(const Config& config)
{
    const int n = static_cast<int>(config.get_int("dimension", 1));
    const ExponentProfile lap = ExponentProfile::laplacian(n);
    const Exponent pm = config.get_exponent("p_minus_L", lap.p_minus_L);
    const Exponent qp = config.get_exponent("q_plus_L", lap.q_plus_L);
    const Exponent pms = config.get_exponent("p_minus_Lstar", lap.p_minus_Lstar);
    const Exponent qps = config.get_exponent("q_plus_Lstar", lap.q_plus_Lstar);
    const std::string hyp = config.get_string("hypothetical", "false");
    if (hyp == "true" || hyp == "1") return ExponentProfile::hypothetical(n, pm, qp, pms, qps);
    return ExponentProfile::make(n, pm, qp, pms, qps);
}

} // namespace tentkit
