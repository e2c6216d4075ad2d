#pragma once

#include <stdexcept>

namespace hrlnav {

// Configuration or input-document problem (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem or file-format problem (CLI exit code 4).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite value where finite arithmetic is required (CLI exit code 3).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hrlnav
