#pragma once

#include <stdexcept>
#include <string>

namespace simbiped {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameter values (violated type invariants, unknown enum names).
class ParameterError : public Error {
 public:
  using Error::Error;
};

// A target lies outside the kinematic workspace of the leg.
class ReachError : public Error {
 public:
  using Error::Error;
};

// Geometry that cannot be solved (e.g. hip below the ankle).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Time argument outside the current step.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Orbital energy too close to zero for the hyperbola form.
class DegenerateOrbitError : public Error {
 public:
  using Error::Error;
};

// Unknown body or joint id.
class LookupError : public Error {
 public:
  using Error::Error;
};

// The physics step produced runaway velocities.
class InstabilityError : public Error {
 public:
  using Error::Error;
};

// Malformed configuration document.
class ParseError : public Error {
 public:
  ParseError(const std::string& key, const std::string& what)
      : Error("config key '" + key + "': " + what), key_(key) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace simbiped
