// errors.hpp
// Exception taxonomy shared by every module. Types map onto the CLI exit
// buckets: configuration/usage errors (1), numerical violations (2), I/O (3).

#pragma once

#include <stdexcept>
#include <string>

namespace qpol {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration, bad arguments, unknown names. Exit bucket 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

class ShapeError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class LabelError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class LabelCollision : public LabelError {
public:
    using LabelError::LabelError;
};

class NameError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class ScheduleError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

// Malformed input text; carries the position that broke the parse.
class ParseError : public ConfigError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : ConfigError("parse error at line " + std::to_string(line) + ", column " +
                      std::to_string(column) + ": " + what),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// A quantity left its mathematically allowed range by more than the
// documented slack. Exit bucket 2.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Filesystem trouble. Exit bucket 3.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace qpol
