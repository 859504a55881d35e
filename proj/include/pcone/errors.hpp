#pragma once

#include <stdexcept>
#include <string>

namespace pcone {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct DomainError       : Error { using Error::Error; };
struct NoConvergence     : Error { using Error::Error; };
struct Singular          : Error { using Error::Error; };
struct BaseMismatch      : Error { using Error::Error; };
struct RangeError        : Error { using Error::Error; };
struct DegenerateInput   : Error { using Error::Error; };
struct DegenerateBasis   : Error { using Error::Error; };
struct UnsupportedNorm   : Error { using Error::Error; };
struct NonFinite         : Error { using Error::Error; };
struct EmptySet          : Error { using Error::Error; };
struct NotInSubmanifold  : Error { using Error::Error; };
struct UnknownSuite      : Error { using Error::Error; };
struct IoError           : Error { using Error::Error; };

} // namespace pcone
