#pragma once

#include <stdexcept>
#include <string>

namespace flexslice {

// Base class for everything the library throws on bad input. Infeasibility
// is never an error: solvers report it through empty optionals or rejected
// admission decisions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument is out of its domain (gamma outside [0,1], unknown node).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Committing an embedding would drive a remaining capacity below zero.
class CommitError : public Error {
 public:
  using Error::Error;
};

// A slice or network description is internally inconsistent.
class SpecificationError : public Error {
 public:
  using Error::Error;
};

// Malformed text input (graph documents, slice templates, LP solutions).
class ParseError : public Error {
 public:
  using Error::Error;
};

// The exhaustive optimizer refused an instance larger than its guard.
class SizeError : public Error {
 public:
  using Error::Error;
};

// A scenario description cannot be resolved before solving starts.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

}  // namespace flexslice
