#pragma once

#include <stdexcept>
#include <string>

namespace nslit {

/// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition (non-finite phase, bad grid, ...).
struct DomainError : Error {
  using Error::Error;
};

/// An operation was applied to data that does not satisfy its contract,
/// e.g. the Kth power of a curve that is not normalized.
struct ContractError : Error {
  using Error::Error;
};

/// The principal peak sits on the grid boundary; the width cannot be read.
struct PeakClippedError : Error {
  using Error::Error;
};

/// No half-maximum crossing exists inside the grid (grid too narrow or flat).
struct LineUnresolvedError : Error {
  using Error::Error;
};

/// The bisection bracket does not enclose the half-maximum crossing.
struct BracketError : Error {
  using Error::Error;
};

/// The two composite peaks cannot be separated on the given grid.
struct IndeterminateDipError : Error {
  using Error::Error;
};

/// Degenerate sample set passed to the scaling fit.
struct FitError : Error {
  using Error::Error;
};

/// Product estimator is undefined (zero mean photon number).
struct EstimatorError : Error {
  using Error::Error;
};

}  // namespace nslit
