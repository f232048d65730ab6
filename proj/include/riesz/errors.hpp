#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace riesz {

// Every library failure derives from Error; code() is a stable token used by
// the CLI for its one-line diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error("argument", what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse", what) {}
};

// Carries a 1-based index into the offending vector or matrix.
class IndexedError : public Error {
 public:
  IndexedError(std::string code, const std::string& what, std::size_t index)
      : Error(std::move(code), what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class NotPositiveDefiniteError : public IndexedError {
 public:
  NotPositiveDefiniteError(std::size_t index, double pivot)
      : IndexedError("not-positive-definite",
                     "cholesky pivot " + std::to_string(pivot) + " at index " +
                         std::to_string(index) + " is not above tolerance",
                     index) {}
};

class ConeMembershipError : public IndexedError {
 public:
  ConeMembershipError(std::size_t index, const std::string& what)
      : IndexedError("cone-membership", what, index) {}
};

class InvalidShapeError : public IndexedError {
 public:
  explicit InvalidShapeError(std::size_t index)
      : IndexedError("invalid-shape",
                     "shape vector is not in the Gindikin set (fails at k=" +
                         std::to_string(index) + ")",
                     index) {}
};

class PatternError : public IndexedError {
 public:
  PatternError(std::size_t index, const std::string& what)
      : IndexedError("pattern", what, index) {}
};

class InvalidScaleError : public Error {
 public:
  explicit InvalidScaleError(const std::string& what)
      : Error("invalid-scale", what) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

class OutOfDomainError : public Error {
 public:
  explicit OutOfDomainError(const std::string& what)
      : Error("out-of-domain", what) {}
};

class UnsupportedRegimeError : public Error {
 public:
  explicit UnsupportedRegimeError(const std::string& what)
      : Error("unsupported-regime", what) {}
};

class OverflowError : public IndexedError {
 public:
  explicit OverflowError(std::size_t sample)
      : IndexedError("overflow",
                     "exp(tr(theta X)) overflowed at sample " +
                         std::to_string(sample) +
                         "; theta is outside or too close to the domain boundary",
                     sample) {}
};

}  // namespace riesz
