#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pcop {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the open unit disc (or another domain restriction).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature gave up; carries the error estimate it reached.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : Error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

class EvaluationError : public Error {
 public:
  using Error::Error;
};

class AliasingError : public Error {
 public:
  using Error::Error;
};

class DegenerateDerivativeError : public Error {
 public:
  using Error::Error;
};

class TuningError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class IncompleteLedgerError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

/// How a constant in a ledger was obtained.
enum class Provenance {
  exact,
  estimated_lower_bound,
  estimated_upper_bound,
  user_supplied,
};

std::string to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

/// A scalar constant together with the direction of its numerical error.
struct Estimate {
  double value = 0.0;
  Provenance provenance = Provenance::exact;
  std::string note;
};

}  // namespace pcop
