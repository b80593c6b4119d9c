#pragma once

#include <stdexcept>
#include <string>

namespace clarirank {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file; the message carries the path and line number.
struct ParseError : Error {
    using Error::Error;
};

/// Index file written by an incompatible format version.
struct VersionError : Error {
    using Error::Error;
};

/// Index file is truncated or otherwise corrupt.
struct IntegrityError : Error {
    using Error::Error;
};

}  // namespace clarirank
