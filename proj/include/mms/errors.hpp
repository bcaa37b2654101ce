#pragma once

#include <stdexcept>
#include <string>

namespace mms {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidSpec : Error {
  using Error::Error;
};
struct InvalidInput : Error {
  using Error::Error;
};
struct Unsupported : Error {
  using Error::Error;
};
// Raised when a sublattice is not contained in the ambient span.
struct ContainmentError : Error {
  using Error::Error;
};
// The finite presentation failed its rank certificate.
struct PresentationError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
// Bad command line or suite configuration.
struct UsageError : Error {
  using Error::Error;
};

}  // namespace mms
