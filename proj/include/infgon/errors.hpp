#pragma once

#include <stdexcept>
#include <string>

namespace infgon {

// Domain error with a stable machine-readable code ("LimitArcNotFlippable",
// "NotCrossing", ...).  The CLI maps codes onto exit status 2.
struct Error : std::runtime_error {
    std::string code;
    Error(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

}  // namespace infgon
