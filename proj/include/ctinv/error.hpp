#pragma once

#include <stdexcept>
#include <string>

namespace ctinv {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (x <= 0, eta outside (0,1], ...).
class DomainError : public Error {
  public:
    using Error::Error;
};

/// A T-set that violates distinctness or disjointness from S.
class InvalidTSet : public DomainError {
  public:
    using DomainError::DomainError;
};

/// Dense linear system too ill-conditioned to solve.
class SingularSystem : public Error {
  public:
    SingularSystem(const std::string& what, double condition)
        : Error(what), condition_(condition) {}
    double condition() const noexcept { return condition_; }

  private:
    double condition_;
};

/// Nonlinear solve that did not reach its residual tolerance.
class NonConvergence : public Error {
  public:
    NonConvergence(const std::string& what, double best_residual)
        : Error(what), best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

  private:
    double best_residual_;
};

/// Malformed input file or document.
class ParseError : public Error {
  public:
    using Error::Error;
};

}  // namespace ctinv
