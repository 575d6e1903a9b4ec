#pragma once

#include <stdexcept>
#include <string>

namespace ridge {

/// Precondition violated by caller-supplied data (dimension mismatch, out-of-range parameter).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested object is too large to materialize (cover enumeration cap, integer overflow).
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Bad or unknown configuration key. Carries the offending key so callers can report it.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

} // namespace ridge
