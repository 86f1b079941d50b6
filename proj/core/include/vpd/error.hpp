#pragma once

#include <stdexcept>
#include <string>

namespace vpd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing files, unreadable or corrupt rasters, failed writes.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A configuration value violates its documented bound.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An operation's precondition does not hold for the given input.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace vpd
