#pragma once

#include <stdexcept>
#include <string>

namespace graad {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed bytes: bad lengths, non-canonical encodings, trailing data.
class DecodeError : public Error {
 public:
  using Error::Error;
};

// Precondition violations on caller-supplied values.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Integrity or equality check failed (AEAD tag, selection digest, proof).
class VerifyError : public Error {
 public:
  using Error::Error;
};

}  // namespace graad
