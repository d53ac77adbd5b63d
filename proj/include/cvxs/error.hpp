#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace cvxs {

/// Domain error carrying a stable machine-readable code ("MissingColumn",
/// "KTooLarge", ...). The CLI turns these into single-line JSON on stderr,
/// so codes are part of the external contract and must not change casually.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
    throw Error(std::move(code), message);
}

} // namespace cvxs
