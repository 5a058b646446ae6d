#pragma once

#include <stdexcept>
#include <string>

namespace clusterdesc {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: out-of-range ids, inconsistent shapes, bad requirements.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Input exceeds a hard size cap (brute-force tag limit, DP state space, ...).
class SizeError : public Error {
 public:
  using Error::Error;
};

// Operation not supported for this configuration (e.g. k != 2).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Probabilities or tolerances violated beyond the allowed slack.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// LP solver exceeded its iteration limit; carries basis diagnostics.
class SolverStallError : public Error {
 public:
  using Error::Error;
};

// Structured-text input could not be parsed; message carries the locus.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace clusterdesc
