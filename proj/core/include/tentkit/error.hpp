#pragma once

#include <stdexcept>
#include <string>

namespace tentkit {

// All library failures surface as this type. `reason()` is a stable dotted
// identifier (e.g. "exponent.out_of_domain") that callers can switch on;
// `what()` is the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string reason, const std::string& message);

    const std::string& reason() const noexcept { return reason_; }

private:
    std::string reason_;
};

[[noreturn]] void fail(const std::string& reason, const std::string& message);

inline void require(bool condition, const char* reason, const std::string& message)
{
    if (!condition) fail(reason, message);
}

} // namespace tentkit
