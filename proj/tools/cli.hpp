#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace tentkit::cli {

// Exit codes CI keys off.
inline constexpr int kExitPass = 0;
inline constexpr int kExitBudget = 1;
inline constexpr int kExitConfig = 2;

struct RunManifest {
    std::string command;
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::map<std::string, std::string> overrides; // key=value, win over the config file
    bool json = false;
};

// Every key a config file or --set may carry.
const std::vector<std::string>& known_keys();
const std::vector<std::string>& commands();

// Flat key=value lines; '#' starts a comment. Throws config.* errors.
std::map<std::string, std::string> parse_config(const std::string& text);

int dispatch(const RunManifest& manifest, std::ostream& out, std::ostream& err);
// Full entry point: argument parsing plus dispatch.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tentkit::cli
