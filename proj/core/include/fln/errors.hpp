#pragma once

#include <stdexcept>
#include <string>

namespace fln {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Incompatible matrix/vector dimensions; the message names both shapes.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid argument value (e.g. an empty range or a bad enum string).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Non-finite values reached a computation that requires finite input.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Out-of-range index, e.g. a class label outside the output dimension.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Malformed input file (wrong magic, truncation, bad CSV field, ...).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Structurally valid file whose content violates a model invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Filesystem failure: missing file, unreadable path, failed write.
class IoError : public Error {
public:
    using Error::Error;
};

/// Training produced a non-finite loss; the message names the iteration.
class TrainingError : public Error {
public:
    using Error::Error;
};

/// A metric is undefined for the given inputs (e.g. AUC with one class).
class MetricError : public Error {
public:
    using Error::Error;
};

} // namespace fln
