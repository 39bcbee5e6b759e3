#pragma once

#include <stdexcept>
#include <string>

namespace complearn {

/// Caller mistakes: bad selectors, mismatched alphabets, invalid configuration.
/// The CLI maps these to exit code 1; anything else is an internal error (exit 2).
struct UsageError : std::invalid_argument {
    explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace complearn
