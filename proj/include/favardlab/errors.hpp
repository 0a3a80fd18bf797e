#pragma once

#include <stdexcept>
#include <string>

namespace favardlab {

// Bad arguments, malformed files, violated preconditions. CLI exit code 4.
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Operation asked of an engine that cannot serve it.
class unsupported_mode_error : public input_error {
public:
    using input_error::input_error;
};

// Counter layout cannot address the requested stream.
class layout_overflow_error : public input_error {
public:
    using input_error::input_error;
};

// A configured memory cap would be exceeded. CLI exit code 3.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace favardlab
