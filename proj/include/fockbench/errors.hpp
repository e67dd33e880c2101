#pragma once

#include <stdexcept>
#include <string>

namespace fockbench {

// Base class for everything the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad caller input: out-of-range parameters, unknown modes, dimension
// mismatches. The CLI maps these to exit code 2.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Unreadable or wrong-version input files.
class FormatError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// A computation produced something unphysical or failed to converge.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace fockbench
