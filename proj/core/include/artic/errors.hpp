#pragma once

#include <stdexcept>
#include <string>

namespace artic {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Geometry that does not admit the requested construction
/// (zero-length rotation axis, coincident shaft keypoints, ...).
class DegenerateGeometryError : public Error {
public:
    using Error::Error;
};

/// Binary file does not match the expected layout
/// (wrong PLY properties, truncated payload, ...).
class FormatError : public Error {
public:
    using Error::Error;
};

/// JSON content violates a documented schema (wrong joint count,
/// missing keypoint names, non-finite values, ...).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Config file or flag value cannot be parsed or is inconsistent.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Missing or unreadable/unwritable file.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace artic
