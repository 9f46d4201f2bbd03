#pragma once

#include <stdexcept>
#include <string>

namespace valdist {

// Common base so callers can catch engine errors apart from std:: logic bugs.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class RankMismatch : public Error {
public:
  explicit RankMismatch(const std::string& what) : Error(what) {}
};

// Requested truncation is not a finite set of terms (cap at or above the
// least accumulation point of the support, or beyond a partial series' wall).
class TruncationUnbounded : public Error {
public:
  explicit TruncationUnbounded(const std::string& what) : Error(what) {}
};

class DivisionByZero : public Error {
public:
  explicit DivisionByZero(const std::string& what) : Error(what) {}
};

// x^p - x = r has no solution in the coefficient field.
class ResidueNotSplit : public Error {
public:
  explicit ResidueNotSplit(const std::string& what) : Error(what) {}
};

class UnsupportedInput : public Error {
public:
  explicit UnsupportedInput(const std::string& what) : Error(what) {}
};

// Sampled evidence contradicts the exact constraint it must satisfy.
class InconsistentSamples : public Error {
public:
  explicit InconsistentSamples(const std::string& what) : Error(what) {}
};

// A kind has no derivation rule and no declared value for the queried datum.
class Undecidable : public Error {
public:
  explicit Undecidable(const std::string& what) : Error(what) {}
};

// Transport requested on an unresolved base distance.
class UnresolvedBase : public Error {
public:
  explicit UnresolvedBase(const std::string& what) : Error(what) {}
};

class ParseError : public Error {
public:
  explicit ParseError(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace valdist
