#pragma once

#include <stdexcept>
#include <string>

namespace qaw {

// Base of every error the library raises. The CLI maps the two families
// below onto its exit codes: InputError -> 2, BoundExceeded -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// An enumeration would exceed a configured size bound.
class BoundExceeded : public Error {
 public:
  BoundExceeded(const std::string& what, unsigned long long requested,
                unsigned long long bound)
      : Error(what + ": " + std::to_string(requested) + " exceeds bound " +
              std::to_string(bound)),
        requested_(requested),
        bound_(bound) {}

  unsigned long long requested() const noexcept { return requested_; }
  unsigned long long bound() const noexcept { return bound_; }

 private:
  unsigned long long requested_;
  unsigned long long bound_;
};

class AxiomViolation : public InputError {
 public:
  using InputError::InputError;
};

class UnknownLeaf : public InputError {
 public:
  using InputError::InputError;
};

class UnmappedVariable : public InputError {
 public:
  using InputError::InputError;
};

class NotAChain : public InputError {
 public:
  NotAChain(std::size_t index)
      : InputError("sequence is not ascending at index " +
                   std::to_string(index)),
        index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class InvalidTail : public InputError {
 public:
  using InputError::InputError;
};

class NonStabilizingChain : public InputError {
 public:
  using InputError::InputError;
};

class NotReflexive : public InputError {
 public:
  NotReflexive(std::string which)
      : InputError("parallel pair " + which + " is not reflexive"),
        which_(std::move(which)) {}
  const std::string& which() const noexcept { return which_; }

 private:
  std::string which_;
};

class NotAHomomorphism : public InputError {
 public:
  using InputError::InputError;
};

class ModeMismatch : public InputError {
 public:
  using InputError::InputError;
};

class NotAnEMAlgebra : public InputError {
 public:
  using InputError::InputError;
};

class ArityBudgetExceeded : public InputError {
 public:
  using InputError::InputError;
};

// DSL errors carry a 1-based source position.
class DslError : public InputError {
 public:
  DslError(const std::string& msg, std::size_t line, std::size_t col)
      : InputError(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line),
        col_(col) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t line_;
  std::size_t col_;
};

class SyntaxError : public DslError {
 public:
  using DslError::DslError;
};

class UnresolvedName : public DslError {
 public:
  using DslError::DslError;
};

class DuplicateName : public DslError {
 public:
  using DslError::DslError;
};

class ArityMismatch : public DslError {
 public:
  using DslError::DslError;
};

}  // namespace qaw
