#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace toravg {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A stated precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A quantity that should be consistent (periods over base points, mode
/// ratios of a closed form, a reconstruction guarantee) is not.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// An evaluation point or an integrated trajectory left the action box.
/// Carries the offending point.
class DomainEscapeError : public Error {
 public:
  DomainEscapeError(const std::string& msg, std::vector<double> theta,
                    std::vector<double> action)
      : Error(msg), theta_(std::move(theta)), action_(std::move(action)) {}

  const std::vector<double>& theta() const noexcept { return theta_; }
  const std::vector<double>& action() const noexcept { return action_; }

 private:
  std::vector<double> theta_;
  std::vector<double> action_;
};

/// The flow integrator hit its step-size floor without meeting the
/// requested accuracy.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Expression or scenario text failed to parse. Positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(msg), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace toravg
