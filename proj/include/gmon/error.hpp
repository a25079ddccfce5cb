#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gmon {

// Base of every error raised by the library. Callers that only need to
// distinguish "our failure" from anything else can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class InvalidState : public Error {
 public:
  using Error::Error;
};

class InsufficientHistory : public Error {
 public:
  using Error::Error;
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

// Pool file errors. Each failure mode has its own type so that tooling can
// tell a stale file from a damaged one.
class PoolFormatError : public Error {
 public:
  using Error::Error;
};

class PoolVersionMismatch : public PoolFormatError {
 public:
  using PoolFormatError::PoolFormatError;
};

class PoolTruncated : public PoolFormatError {
 public:
  using PoolFormatError::PoolFormatError;
};

class PoolChecksumMismatch : public PoolFormatError {
 public:
  using PoolFormatError::PoolFormatError;
};

class PoolKindMismatch : public PoolFormatError {
 public:
  using PoolFormatError::PoolFormatError;
};

class CalibrationInfeasible : public Error {
 public:
  using Error::Error;
};

}  // namespace gmon
