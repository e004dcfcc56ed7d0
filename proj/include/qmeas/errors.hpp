#pragma once

#include <stdexcept>
#include <string>

namespace qmeas {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonHermitianInput : Error {
  using Error::Error;
};

struct NumericalFailure : Error {
  using Error::Error;
};

struct UnknownSpectralPoint : Error {
  using Error::Error;
};

struct DomainMismatch : Error {
  using Error::Error;
};

struct BasisMismatch : Error {
  using Error::Error;
};

struct NotCoarseGraining : Error {
  using Error::Error;
};

struct SearchSpaceTooLarge : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace qmeas
