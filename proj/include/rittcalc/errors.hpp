#pragma once

#include <stdexcept>
#include <string>

namespace rittcalc {

// Base of every error thrown by the library. The CLI maps these onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not fit together (non-square, wrong state dimension, ...).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A parameter lies outside its documented range.
class DomainError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& what, double rcond)
      : Error(what), rcond_(rcond) {}
  double rcond() const noexcept { return rcond_; }

 private:
  double rcond_;
};

// An iterative kernel hit its iteration cap, or a result failed its residual check.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  OverflowError(const std::string& what, long first_index)
      : Error(what), first_index_(first_index) {}
  long first_index() const noexcept { return first_index_; }

 private:
  long first_index_;
};

// Square-function terms grow instead of decaying.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long first_bad_k)
      : Error(what), first_bad_k_(first_bad_k) {}
  long first_bad_k() const noexcept { return first_bad_k_; }

 private:
  long first_bad_k_;
};

// A function/operator pair does not meet the contour calculus preconditions.
class InadmissibleError : public Error {
 public:
  using Error::Error;
};

// Input files that cannot be read or parsed into a matrix.
class IngestError : public Error {
 public:
  using Error::Error;
};

}  // namespace rittcalc
