// errors.hpp — exception hierarchy; each error maps to a stable CLI exit code

#pragma once

#include <stdexcept>
#include <string>

namespace optoent {

enum class ExitCode : int {
    Ok = 0,
    Config = 2,
    Unstable = 3,
    Regime = 4,
    Numerical = 5,
};

class Error : public std::runtime_error {
public:
    Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ExitCode exit_code() const noexcept { return code_; }

private:
    ExitCode code_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ExitCode::Config, what) {}
};

// Invalid bisection bracket: the endpoints do not straddle the boundary.
class BracketInvalid : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class StepTooLarge : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class UnstableSystem : public Error {
public:
    explicit UnstableSystem(const std::string& what) : Error(ExitCode::Unstable, what) {}
};

class RegimeViolation : public Error {
public:
    explicit RegimeViolation(const std::string& what) : Error(ExitCode::Regime, what) {}
};

class NumericalFailure : public Error {
public:
    explicit NumericalFailure(const std::string& what) : Error(ExitCode::Numerical, what) {}
};

class NonConvergence : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

class UnphysicalState : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

} // namespace optoent
