#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace sieve {

/// Error taxonomy mirrors the CLI exit codes: config errors exit 2,
/// construction errors 3, physics/measurement preconditions 4, self-check
/// failures 5. code() is the stable machine-readable identifier printed as
/// "error_code=..." on stderr.
class Error : public std::runtime_error {
public:
  Error(std::string code, int exit_code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)), exit_code_(exit_code) {}

  const std::string& code() const noexcept { return code_; }
  int exit_code() const noexcept { return exit_code_; }

private:
  std::string code_;
  int exit_code_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& msg, const std::string& code = "config")
      : Error(code, 2, msg) {}
};

struct ConstructionError : Error {
  ConstructionError(const std::string& code, const std::string& msg) : Error(code, 3, msg) {}
};

struct PreconditionError : Error {
  PreconditionError(const std::string& code, const std::string& msg) : Error(code, 4, msg) {}
};

struct SelfCheckError : Error {
  explicit SelfCheckError(const std::string& msg) : Error("selfcheck", 5, msg) {}
};

// construction
struct OverlapError : ConstructionError {
  explicit OverlapError(const std::string& msg) : ConstructionError("overlap", msg) {}
};
struct NegativeRadicandError : ConstructionError {
  explicit NegativeRadicandError(const std::string& msg)
      : ConstructionError("negative_radicand", msg) {}
};
struct BadMotifError : ConstructionError {
  explicit BadMotifError(const std::string& msg) : ConstructionError("bad_motif", msg) {}
};

// preconditions of numeric operations
struct ResolutionError : PreconditionError {
  explicit ResolutionError(const std::string& msg) : PreconditionError("resolution", msg) {}
};
struct ExtentError : PreconditionError {
  explicit ExtentError(const std::string& msg) : PreconditionError("extent", msg) {}
};
struct WindowError : PreconditionError {
  explicit WindowError(const std::string& msg) : PreconditionError("window", msg) {}
};
struct FresnelNumberError : PreconditionError {
  explicit FresnelNumberError(const std::string& msg)
      : PreconditionError("fresnel_number", msg) {}
};
struct AmplitudeTooLowError : PreconditionError {
  explicit AmplitudeTooLowError(const std::string& msg)
      : PreconditionError("amplitude_too_low", msg) {}
};
struct UndersampledError : PreconditionError {
  explicit UndersampledError(const std::string& msg) : PreconditionError("undersampled", msg) {}
};
struct ZeroPowerError : PreconditionError {
  explicit ZeroPowerError(const std::string& msg) : PreconditionError("zero_power", msg) {}
};
struct NoPatternError : PreconditionError {
  explicit NoPatternError(const std::string& msg) : PreconditionError("no_pattern", msg) {}
};
struct IoError : PreconditionError {
  explicit IoError(const std::string& msg) : PreconditionError("io", msg) {}
};

}  // namespace sieve
