#pragma once

#include <stdexcept>
#include <string>

namespace kolmo {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotPositiveDefinite : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct OutOfGrid : Error { using Error::Error; };
struct ReversedInterval : Error { using Error::Error; };
struct DegenerateCovariance : Error { using Error::Error; };
struct UnsupportedOrder : Error { using Error::Error; };
struct ZeroAlpha : Error { using Error::Error; };
struct QuadratureFailure : Error { using Error::Error; };
struct MissingDerivativeField : Error { using Error::Error; };
struct InadmissibleVariant : Error { using Error::Error; };
struct InvalidGamma : Error { using Error::Error; };
struct NoContraction : Error { using Error::Error; };
struct EmptyEnsemble : Error { using Error::Error; };
struct QuadratureBudgetExceeded : Error { using Error::Error; };

} // namespace kolmo
