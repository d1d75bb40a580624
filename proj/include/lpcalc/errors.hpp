#pragma once

#include <stdexcept>
#include <string>

namespace lpcalc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad p, level out of range, grid mismatch...).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// The dyadic partition does not fit under the Nyquist frequency of a grid.
class NyquistViolation : public Error {
  public:
    using Error::Error;
};

/// A function carries spectral mass above the top level of the partition.
class BandLeakage : public Error {
  public:
    BandLeakage(const std::string& what, double leaked) : Error(what), leaked_(leaked) {}
    double leaked() const { return leaked_; }

  private:
    double leaked_;
};

/// A weight is not monotone or fails the dyadic comparison condition.
class AdmissibilityViolation : public Error {
  public:
    using Error::Error;
};

/// Parameters fall outside the hypothesis range of an estimate.
class GateViolation : public Error {
  public:
    using Error::Error;
};

/// Truncated Fourier series of a symbol piece leaves a tail above tolerance.
class SeriesTailError : public Error {
  public:
    SeriesTailError(const std::string& what, double tail) : Error(what), tail_(tail) {}
    double tail() const { return tail_; }

  private:
    double tail_;
};

/// An elementary symbol family violates its support conditions.
class SupportViolation : public Error {
  public:
    using Error::Error;
};

/// Malformed or unsupported file contents.
class FormatError : public Error {
  public:
    FormatError(const std::string& what, std::size_t offset) : Error(what), offset_(offset) {}
    std::size_t offset() const { return offset_; }

  private:
    std::size_t offset_;
};

/// Picard iteration stopped contracting.
class DivergenceError : public Error {
  public:
    DivergenceError(const std::string& what, double growth) : Error(what), growth_(growth) {}
    double growth() const { return growth_; }

  private:
    double growth_;
};

}  // namespace lpcalc
