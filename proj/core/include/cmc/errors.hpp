#pragma once

#include <stdexcept>
#include <string>

namespace cmc {

// Base of every error thrown by the library. Callers that only need a
// diagnostic can catch this; the CLI maps the subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// The state left the admissible set f2 > 0, f1^2 + f2^2 < 1.
class DomainBreach : public Error {
 public:
  using Error::Error;
};

class StepSizeUnderflow : public Error {
 public:
  using Error::Error;
};

// A shooting evaluation could not be completed (integration failed).
class NonAdmissible : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class SingularJacobian : public Error {
 public:
  using Error::Error;
};

class NoBracket : public Error {
 public:
  using Error::Error;
};

class RankDrop : public Error {
 public:
  using Error::Error;
};

class NotSpanned : public Error {
 public:
  using Error::Error;
};

}  // namespace cmc
