#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand dimensions disagree ("shape mismatch").
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A system dimension would exceed the global cap ("dimension too large").
class DimensionCapError : public Error {
 public:
  using Error::Error;
};

// Spectrum has an eigenvalue below the clipping tolerance.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

// A constructor or operation argument is outside its domain
// (probability outside [0,1], non-unitary matrix, empty list, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Channel-spec syntax or semantic error, carrying the byte offset.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " at byte " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// A theorem/lemma parameter-validity predicate does not hold.
class ValidityError : public Error {
 public:
  ValidityError(std::string predicate, const std::string& detail)
      : Error("validity predicate " + predicate + " violated: " + detail),
        predicate_(std::move(predicate)) {}
  const std::string& predicate() const noexcept { return predicate_; }

 private:
  std::string predicate_;
};

}  // namespace qcap
