#pragma once

#include <stdexcept>
#include <string>

namespace cdkdv {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  kInvalidArgument = 1,
  kDimensionMismatch = 2,
  kLevel = 3,
  kConfig = 4,
  kBlowUp = 5,
  kPole = 6,
  kIo = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorCode::kDimensionMismatch, what) {}
};

class LevelError : public Error {
 public:
  explicit LevelError(const std::string& what) : Error(ErrorCode::kLevel, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::kConfig, what) {}
};

class PoleError : public Error {
 public:
  explicit PoleError(const std::string& what) : Error(ErrorCode::kPole, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorCode::kInvalidArgument, what);
}

}  // namespace cdkdv
