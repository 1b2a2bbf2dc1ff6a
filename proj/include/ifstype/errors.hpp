#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ifstype {

// All library failures carry a stable machine-readable code ("SupportGap",
// "CapExceeded", ...) next to the human-readable message.  The CLI exits with
// the code on stderr so scripts can dispatch on it.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& message) {
    throw Error(code, message);
}

} // namespace ifstype
