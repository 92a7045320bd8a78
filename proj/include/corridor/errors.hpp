#pragma once

#include <stdexcept>
#include <string>

namespace corridor {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally broken input (bad JSON, wrong geometry type, missing field).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input carrying values that violate a documented invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Origin and destination are not connected. Carries the weakly-connected
// component id of the origin so callers can report which island it sits on.
class NoPathError : public Error {
 public:
  NoPathError(const std::string& what, int origin_component)
      : Error(what), origin_component_(origin_component) {}

  int origin_component() const { return origin_component_; }

 private:
  int origin_component_;
};

// The metaheuristic never produced a single complete tour.
class OptimizationError : public Error {
 public:
  OptimizationError(const std::string& what, long ants_launched, long ants_abandoned)
      : Error(what), ants_launched_(ants_launched), ants_abandoned_(ants_abandoned) {}

  long ants_launched() const { return ants_launched_; }
  long ants_abandoned() const { return ants_abandoned_; }

 private:
  long ants_launched_;
  long ants_abandoned_;
};

// Bad run configuration (CLI flags, config file, manifest keys).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace corridor
