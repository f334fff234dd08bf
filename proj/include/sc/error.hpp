#ifndef SC_ERROR_HPP_
#define SC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller passed a value outside an operation's contract (bad k, bad rate, ...).
struct InvalidParameter : Error {
    using Error::Error;
};

// The data itself is unusable (empty point set, mismatched label lengths, ...).
struct InvalidInput : Error {
    using Error::Error;
};

// Malformed file content; message carries the line number.
struct ParseError : Error {
    using Error::Error;
};

} // namespace sc

#endif
