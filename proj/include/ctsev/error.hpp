#pragma once

#include <stdexcept>
#include <string>

namespace ctsev {

// Base for every recoverable failure raised by the library. Precondition
// violations use std::invalid_argument instead.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input data could not be read or is malformed (missing files, bad CSV rows,
// undecodable images).
class DataError : public Error {
public:
    using Error::Error;
};

// A binary container has the wrong magic, version or layout.
class FormatError : public DataError {
public:
    using DataError::DataError;
};

// A binary container ended before its declared payload.
class TruncatedError : public DataError {
public:
    using DataError::DataError;
};

// Tensor dimensions do not match what the consumer expects.
class ShapeError : public DataError {
public:
    using DataError::DataError;
};

class ChecksumError : public DataError {
public:
    ChecksumError(std::string tensor, const std::string& what)
        : DataError(what), tensor_(std::move(tensor)) {}

    const std::string& tensor() const noexcept { return tensor_; }

private:
    std::string tensor_;
};

// Numeric failure during model fitting. Subclasses may carry a partial result.
class TrainingError : public Error {
public:
    using Error::Error;
};

}  // namespace ctsev
