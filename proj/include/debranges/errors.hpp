#ifndef DEBRANGES_ERRORS_HPP
#define DEBRANGES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace debranges {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A derivative of E (or of the kernel) was requested beyond what the
/// structure function guarantees.
class UnsupportedOrderError : public Error {
 public:
  UnsupportedOrderError(int requested, int available)
      : Error("derivative order " + std::to_string(requested) +
              " exceeds the available budget " + std::to_string(available)),
        requested_(requested),
        available_(available) {}

  int requested() const noexcept { return requested_; }
  int available() const noexcept { return available_; }

 private:
  int requested_;
  int available_;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// gamma() was asked for its value at one of the imposed zeros.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// The evaluators at the imposed zeros are (numerically) linearly dependent.
class LinearDependenceError : public Error {
 public:
  LinearDependenceError(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}

  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// An epsilon schedule makes split points collide or is otherwise unusable.
class InvalidScheduleError : public Error {
 public:
  using Error::Error;
};

}  // namespace debranges

#endif  // DEBRANGES_ERRORS_HPP
