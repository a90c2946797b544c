#pragma once

#include <stdexcept>
#include <string>

namespace faw {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input or violated precondition (bad indices, dimension mismatch,
// non-real letters, parse failures).
class ValidationError : public Error {
public:
    using Error::Error;
};

// A configured resource cap was exceeded (enumeration cap, word-length cap,
// Fock size budget, atom-count cap).
class CapError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// A numerical procedure failed or a numeric cross-check disagreed.
class NumericError : public Error {
public:
    using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw ValidationError(what);
}

} // namespace detail
} // namespace faw
