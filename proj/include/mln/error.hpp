#pragma once

#include <stdexcept>
#include <string>

namespace mln {

/// Exception carrying a machine-readable code (e.g. "unknown-state-node").
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace mln
