#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mixedvar {

// Process exit codes used by the command-line driver.  Library errors carry
// the matching code so the driver can translate exceptions uniformly.
enum class ExitCode : int {
  ok = 0,
  failure = 1,           // unclassified
  parameter_error = 2,   // invalid parameter or parameter outside its domain
  resolution_error = 3,  // data too coarse / tolerance unattainable
  io_error = 4,          // file I/O or parse failure
  regime_error = 5,      // formula requested outside its validity regime
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what)
      : Error(ExitCode::parameter_error, what) {}
};

class ResolutionError : public Error {
 public:
  explicit ResolutionError(const std::string& what)
      : Error(ExitCode::resolution_error, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ExitCode::io_error, what) {}
};

class RegimeError : public Error {
 public:
  explicit RegimeError(const std::string& what)
      : Error(ExitCode::regime_error, what) {}
};

// Circulant embedding produced an eigenvalue below the clamping tolerance.
class EmbeddingError : public ParameterError {
 public:
  EmbeddingError(double hurst, std::size_t n, double worst_eigenvalue);

  double hurst;
  std::size_t n;
  double worst_eigenvalue;
};

}  // namespace mixedvar
