#pragma once

#include <stdexcept>
#include <string>

namespace dicho {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad user input: invalid parameters, malformed scenarios, violated preconditions.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// A matrix in the sequence is (numerically) singular or too ill-conditioned.
class DegeneracyError : public Error {
public:
    explicit DegeneracyError(const std::string& msg) : Error(msg) {}
};

/// A series did not meet its truncation budget on the available window.
class WindowTooSmall : public Error {
public:
    explicit WindowTooSmall(const std::string& msg) : Error(msg) {}
};

/// An iteration that should contract (by hypothesis) was measured diverging.
class ContractionFailure : public Error {
public:
    explicit ContractionFailure(const std::string& msg) : Error(msg) {}
};

}  // namespace dicho
