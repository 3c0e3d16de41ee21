#pragma once

#include <stdexcept>
#include <string>

namespace rcb {

// Every library error carries the CLI exit code it maps to:
// 1 usage, 2 domain/precondition, 3 verification failure, 4 non-convergence.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual int exit_code() const noexcept { return 2; }
};

class UsageError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 1; }
};

// Out-of-domain arguments and violated preconditions.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The requested operation does not exist for this input (e.g. the score of a
// stable law without closed density).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class VerificationFailure : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 3; }
};

class NonConvergenceError : public Error {
 public:
  using Error::Error;
  int exit_code() const noexcept override { return 4; }
};

}  // namespace rcb
