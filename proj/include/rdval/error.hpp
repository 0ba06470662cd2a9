#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace rdval {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A density whose total mass is too small to normalize.
class DegenerateDensityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A stage whose success probability is effectively zero, so conditional
/// statistics are undefined. Carries the 1-based stage index once known.
class DegenerateStageError : public std::runtime_error {
public:
    explicit DegenerateStageError(const std::string& what,
                                  std::optional<std::size_t> stage = std::nullopt)
        : std::runtime_error(what), stage_(stage) {}

    [[nodiscard]] std::optional<std::size_t> stage() const noexcept { return stage_; }

private:
    std::optional<std::size_t> stage_;
};

/// Two independent computation routes disagree beyond tolerance.
class NumericalIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs violate an operation's precondition (e.g. comparing pipelines
/// whose progression probabilities differ).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace rdval
