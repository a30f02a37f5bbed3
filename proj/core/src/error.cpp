#include "tentkit/error.hpp"

namespace tentkit {

Error::Error(std::string reason, const std::string& message)
    : std::runtime_error(reason + ": " + message), reason_(std::move(reason))
{
}

void fail(const std::string& reason, const std::string& message)
{
    throw Error(reason, message);
}

} // namespace tentkit
