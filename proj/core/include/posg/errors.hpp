#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posg {

/// Raised on malformed textual input (LTL formulas, HOA automata).
/// `position` is a byte offset into the input where the problem was detected.
class parse_error : public std::runtime_error {
public:
    parse_error(std::string message, std::size_t position)
        : std::runtime_error("parse error at " + std::to_string(position) + ": " + message),
          position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Raised when a JSON document does not match the expected model schema.
/// `path` is a JSON-pointer-style location of the offending element.
class schema_error : public std::runtime_error {
public:
    explicit schema_error(const std::string& path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(path) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

/// Raised when a loaded or constructed model violates a structural invariant
/// (non-stochastic rows, dangling indices, dead mask rows, ...).
class validation_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when a formula falls outside the supported translation fragment.
/// Carries a printable rendering of the offending subformula.
class unsupported_fragment_error : public std::runtime_error {
public:
    explicit unsupported_fragment_error(std::string subformula)
        : std::runtime_error("formula outside the supported fragment: " + subformula),
          subformula_(std::move(subformula)) {}

    const std::string& subformula() const { return subformula_; }

private:
    std::string subformula_;
};

/// Raised when a numeric routine fails to produce a trustworthy result
/// (pivot-count blowout, singular linear systems, verification failures).
class numerical_error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace posg
