#pragma once

#include <stdexcept>
#include <string>

namespace holekp {

// Invalid physical/model parameters or malformed configuration. CLI exit code 2.
class InvalidParameter : public std::runtime_error {
public:
    explicit InvalidParameter(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public InvalidParameter {
public:
    explicit ConfigError(const std::string& what) : InvalidParameter(what) {}
};

// File-format errors; message names the offending record/byte offset.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Solver/quadrature failures (non-convergence, non-finite values). CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class IncompatibleFields : public std::runtime_error {
public:
    explicit IncompatibleFields(const std::string& what) : std::runtime_error(what) {}
};

} // namespace holekp
