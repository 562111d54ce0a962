#pragma once

#include <stdexcept>
#include <string>

namespace radarloc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable input data (files, clouds, trajectories).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Geometry that admits no unique solution (e.g. coincident points in ICP).
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

/// ICP ran out of correspondences surviving the distance gate.
class CorrespondenceError : public Error {
 public:
  using Error::Error;
};

/// The particle filter saw no matched points for too many consecutive steps.
class LostLocalizationError : public Error {
 public:
  LostLocalizationError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace radarloc
