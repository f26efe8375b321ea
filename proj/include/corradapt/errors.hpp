#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace corradapt {

// Root of every error the library throws. The CLI maps ConfigError to exit
// code 1 and everything else to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed file structure (bad header, unreadable layout).
class FormatError : public Error {
public:
    using Error::Error;
};

// Well-formed input carrying invalid data.
class DataError : public Error {
public:
    using Error::Error;
};

// A cell-level data problem located by 1-based file row and column.
class CellError : public DataError {
public:
    CellError(std::size_t row, std::size_t column, const std::string& what)
        : DataError("row " + std::to_string(row) + ", column " + std::to_string(column) + ": " + what),
          row_(row),
          column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class InsufficientHistory : public DataError {
public:
    using DataError::DataError;
};

class InvalidDepth : public DataError {
public:
    using DataError::DataError;
};

class IndexError : public Error {
public:
    using Error::Error;
};

// File-system failures (unreadable input, unwritable output).
class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace corradapt
