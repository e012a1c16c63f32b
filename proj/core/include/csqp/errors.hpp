// Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <stdexcept>
#include <string>

namespace csqp {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File access or stream decode failure. The message carries the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents: bad magic, truncated stream, unparseable fields.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Input too small for the requested kernel, or an index outside the image.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Operands that cannot be combined: mismatched bin counts or descriptor ids.
class IncompatibleError : public Error {
public:
    using Error::Error;
};

/// Invalid run configuration (cutoffs, crop rectangles, policy parameters).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace csqp
