#pragma once

#include <stdexcept>
#include <string>

namespace qfi {

/// Invalid caller input: bad dimensions, non-Hermitian input, out-of-range knobs.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A requested object would exceed the dense-dimension budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Floating-point resolution exhausted (e.g. a finite-difference step below the
/// noise floor of the quantity being probed).
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The derivative pushes weight outside the state's support, so no symmetric
/// logarithmic derivative exists on the retained subspace.
class RankChangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A probability vanishes where its derivative does not, so a Fisher-type sum
/// diverges.
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A component was wired up with options it cannot honour.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An operation was invoked on an object that is not in the required state.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace qfi
