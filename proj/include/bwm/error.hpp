#pragma once

#include <stdexcept>
#include <string>

namespace bwm {

// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A point left the tubular neighbourhood where the retraction is defined.
class TubeExceeded : public Error {
 public:
  TubeExceeded(double distance, double tube_radius)
      : Error("point at distance " + std::to_string(distance) +
              " outside tube of radius " + std::to_string(tube_radius)),
        distance_(distance) {}
  double distance() const { return distance_; }

 private:
  double distance_;
};

class OffManifold : public Error {
 public:
  using Error::Error;
};

class NonFinite : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class Degenerate : public Error {
 public:
  using Error::Error;
};

// Raised by the time loop when the discrete solution leaves the tube or
// produces non-finite values.
class DiscreteBlowup : public Error {
 public:
  DiscreteBlowup(double time, const std::string& cause)
      : Error("discrete blow-up at t = " + std::to_string(time) + ": " + cause),
        time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace bwm
