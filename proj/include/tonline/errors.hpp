#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tonline {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DepthOverflow : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SequenceLengthMismatch : public Error {
 public:
  using Error::Error;
};

class ExpertCapExceeded : public Error {
 public:
  using Error::Error;
};

class ProbeNondeterminism : public Error {
 public:
  using Error::Error;
};

/// The adversary emitted a label that no class member agrees with.
class RealizabilityViolation : public Error {
 public:
  explicit RealizabilityViolation(std::size_t round)
      : Error("realizability violated at round " + std::to_string(round)), round_(round) {}
  std::size_t round() const noexcept { return round_; }

 private:
  std::size_t round_;
};

}  // namespace tonline
