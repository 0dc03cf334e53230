#pragma once

#include <stdexcept>
#include <string>

namespace nqrent {

// Base class for every error thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotHermitian : Error {
  using Error::Error;
};

struct BadDimension : Error {
  using Error::Error;
};

struct EtaOutOfRange : Error {
  using Error::Error;
};

struct Overflow : Error {
  using Error::Error;
};

struct NonpositiveTemperature : Error {
  using Error::Error;
};

struct NotFound : Error {
  using Error::Error;
};

struct InvalidDensityMatrix : Error {
  using Error::Error;
};

struct NonphysicalSpectrum : Error {
  using Error::Error;
};

struct OutOfRange : Error {
  using Error::Error;
};

struct NoTransition : Error {
  using Error::Error;
};

// Raised when one grid point of a sweep fails; the message carries the
// offending coordinates and the original diagnostic.
struct SweepPointError : Error {
  using Error::Error;
};

}  // namespace nqrent
