#pragma once

#include <stdexcept>
#include <string>

namespace dlfm {

/// Input data that violates a documented format or invariant.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Barcode-JSON / CSV parse failure; carries the 1-based line (0 if unknown).
class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t line)
        : DataError(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Shapes or preconditions of an operation do not match.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace dlfm
