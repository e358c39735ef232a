#pragma once

#include <stdexcept>
#include <string>

namespace heckelab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A prime needed by an evaluation exceeds the table bound of an EigenForm or sample.
class CoverageError : public Error {
 public:
  using Error::Error;
};

// Series precision too small for the requested operation.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

// T_2 has a repeated eigenvalue; simultaneous diagonalization is not attempted.
class RepeatedEigenvalueError : public Error {
 public:
  using Error::Error;
};

// A numerical invariant (Deligne bound, root certification, self-check) failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace heckelab
