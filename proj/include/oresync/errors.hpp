#pragma once

#include <stdexcept>
#include <string>

namespace oresync {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AlphabetError : public Error {
 public:
  using Error::Error;
};

// Raised when a construction would exceed its configured size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace oresync
