#pragma once

#include <stdexcept>
#include <string>

namespace fairsample {

// Base for everything thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad configuration or arguments (CLI exit code 2).
struct ConfigError : Error {
  using Error::Error;
};

// Malformed or invalid input data: schema, parse, empty input (CLI exit code 3).
struct DataError : Error {
  using Error::Error;
};

// A resampling target or split that cannot be realized (CLI exit code 4
// when the whole design is infeasible; per-cell it is recorded and skipped).
struct InfeasibleError : Error {
  using Error::Error;
};

// Reference selection ratio of zero; never surfaced as NaN or infinity.
struct UndefinedRatioError : Error {
  using Error::Error;
};

// Single-class training input for a classifier that needs both classes.
struct DegenerateFitError : Error {
  using Error::Error;
};

// Intercept calibration failed to bracket the target.
struct CalibrationError : Error {
  using Error::Error;
};

// A 1-row cell has no neighbors; callers fall back to duplication.
struct NoNeighborError : Error {
  using Error::Error;
};

}  // namespace fairsample
