#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace entkit {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A value failed one of its type invariants (trace, positivity, norm, ...).
class InvariantError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or materialization would exceed a configured size cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

class SpectrumMismatchError : public Error {
 public:
  using Error::Error;
};

/// Target spectrum does not majorize the source; `index` is the 1-based
/// partial-sum position k of the first violated inequality.
class NotConvertibleError : public Error {
 public:
  NotConvertibleError(std::size_t index, double gap)
      : Error("target spectrum does not majorize source: partial sum k=" +
              std::to_string(index) + " has gap " + std::to_string(gap)),
        index_(index),
        gap_(gap) {}

  std::size_t index() const noexcept { return index_; }
  double gap() const noexcept { return gap_; }

 private:
  std::size_t index_;
  double gap_;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace entkit
