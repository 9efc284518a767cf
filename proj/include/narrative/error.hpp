#pragma once

#include <stdexcept>
#include <string>

namespace narrative {

/// Broad failure class; the CLI maps each one to its own exit code.
enum class ErrorCategory { config, input, provider, internal };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCategory::config, what) {}
};

class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(ErrorCategory::input, what) {}
};

}  // namespace narrative
