#pragma once

#include <stdexcept>
#include <string>

namespace clickstat {

// Base for every domain error. kind() is the stable, hyphenated error name
// that the CLI prints in its diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& message) : Error("invalid-argument", message) {}
};

// A distribution needed more photon-number levels than the hard limit allows.
class CutoffOverflow : public Error {
 public:
  explicit CutoffOverflow(const std::string& message) : Error("cutoff-overflow", message) {}
};

class DegenerateConditioning : public Error {
 public:
  explicit DegenerateConditioning(const std::string& message)
      : Error("degenerate-conditioning", message) {}
};

// A witness denominator vanished (zero mean, or all bins clicking).
class UndefinedWitness : public Error {
 public:
  explicit UndefinedWitness(const std::string& message) : Error("undefined-witness", message) {}
};

class IllConditionedInversion : public Error {
 public:
  IllConditionedInversion(const std::string& message, double condition_number)
      : Error("ill-conditioned-inversion", message), condition_number_(condition_number) {}

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

// Malformed input files or config documents.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error("parse-error", message) {}
};

}  // namespace clickstat
