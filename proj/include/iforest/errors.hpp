#pragma once

#include <stdexcept>

namespace iforest {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arguments violating an operation's preconditions (dimension mismatch,
// malformed configuration, empty views where forbidden).
struct InvalidInputError : Error {
    using Error::Error;
};

// Problems with the data itself: non-finite features, bad labels,
// single-class training sets, malformed CSV.
struct DataError : Error {
    using Error::Error;
};

// Filesystem failures.
struct IoError : Error {
    using Error::Error;
};

// Model documents that do not parse or violate the schema.
struct ModelFormatError : Error {
    using Error::Error;
};

// Model documents written by an incompatible format version.
struct ModelVersionError : Error {
    using Error::Error;
};

// Model/data dimension disagreement.
struct DimensionError : Error {
    using Error::Error;
};

} // namespace iforest
