#ifndef CPERC_ERROR_HPP
#define CPERC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cperc {

// Bad input to an operation: wrong dimension, out-of-range parameter, malformed measure.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A requested simulation would be too large to run (expected point counts over the cap).
class SizingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An embedding region has non-positive inner radius at the requested dimension.
class DegenerateRegion : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Bracketing or root search gave up.
class SearchFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

}  // namespace cperc

#endif  // CPERC_ERROR_HPP
