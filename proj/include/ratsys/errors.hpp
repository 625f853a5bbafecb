#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ratsys {

/// A scalar (or initial condition) that must be strictly positive was not.
class NonPositiveInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A coefficient sequence emitted (or declared) an unusable value.
class InvalidCoefficient : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IndexOutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// The operation requires a coefficient regime the input does not have.
class RegimeMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// An exact value outgrew its bit budget. `index()` is the first orbit
/// index at which it happened (or -1 when not tied to an orbit).
class ExactBudgetExceeded : public std::runtime_error {
public:
    ExactBudgetExceeded(std::int64_t index, std::uint64_t bits, std::uint64_t budget)
        : std::runtime_error("exact bit budget exceeded at step " + std::to_string(index) + " (" +
                             std::to_string(bits) + " bits > budget " + std::to_string(budget) + ")"),
          index_(index) {}

    std::int64_t index() const noexcept { return index_; }

private:
    std::int64_t index_;
};

} // namespace ratsys
