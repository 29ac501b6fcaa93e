#pragma once

#include <stdexcept>

namespace blindhd {

// All failures are thrown; there is no error-code path.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotSymmetric : Error { using Error::Error; };
struct NotPositiveDefinite : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct InvalidSmoothness : Error { using Error::Error; };
struct InvalidTau : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct TooShort : Error { using Error::Error; };
struct NonFiniteObjective : Error { using Error::Error; };
struct ZeroTruth : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace blindhd
