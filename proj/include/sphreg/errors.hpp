#pragma once

#include <stdexcept>
#include <string>

namespace sphreg {

/// Caller supplied something outside an operation's domain (bad index,
/// mismatched radius, wrong sample count, nonmonotone symbol, ...).
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// An iteration failed to converge or a linear system turned out singular.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// An input file does not exist or cannot be opened.
class MissingInput : public std::runtime_error {
public:
    explicit MissingInput(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw InvalidInput(msg);
}

}  // namespace detail
}  // namespace sphreg
