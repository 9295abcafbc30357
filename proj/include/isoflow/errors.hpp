#pragma once

#include <stdexcept>
#include <string>

namespace isoflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite entries, out-of-range parameters, off-grid times.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidRegion : public Error {
 public:
  using Error::Error;
};

class InvalidShift : public Error {
 public:
  using Error::Error;
};

/// The requested time or step count does not fit in the finite window.
class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

/// A quantity that must vanish exactly did not; usually window pollution.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

}  // namespace isoflow
