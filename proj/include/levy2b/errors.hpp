#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace levy2b {

/// Malformed expression source. `offset` is the 0-based character position.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t offset, const std::string& what)
        : std::runtime_error(what + " (offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Arithmetic left the real domain (division by zero, sqrt of a negative,
/// non-integer power of a negative base, overflow to non-finite).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A contract of an operation was violated (missing jump value, empty grid,
/// inadmissible slope, ...). Indicates a badly posed problem instance.
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration (CFL violation, off-mesh split time, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace levy2b
