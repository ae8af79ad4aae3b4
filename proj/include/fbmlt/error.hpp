#pragma once

#include <stdexcept>
#include <string>

namespace fbmlt {

// Exit-code classes used by the command-line front end.
enum class ErrorClass { validation = 1, numerical = 2 };

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
  ErrorClass error_class() const noexcept { return cls_; }

 private:
  ErrorClass cls_;
};

/// Bad argument or parameter outside the documented domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorClass::validation, what) {}
};

class NotPositiveDefiniteError : public Error {
 public:
  explicit NotPositiveDefiniteError(const std::string& what)
      : Error(ErrorClass::numerical, "not positive definite: " + what) {}
};

class DegenerateConditioningError : public Error {
 public:
  explicit DegenerateConditioningError(const std::string& what)
      : Error(ErrorClass::numerical, "degenerate conditioning: " + what) {}
};

/// Circulant embedding produced a significantly negative eigenvalue; the
/// caller should fall back to the Cholesky sampler.
class EmbeddingFailureError : public Error {
 public:
  explicit EmbeddingFailureError(const std::string& what)
      : Error(ErrorClass::numerical,
              "circulant embedding failure (use the cholesky sampler): " + what) {}
};

class QuadratureBudgetError : public Error {
 public:
  explicit QuadratureBudgetError(const std::string& what)
      : Error(ErrorClass::numerical, "quadrature budget exhausted: " + what) {}
};

}  // namespace fbmlt
