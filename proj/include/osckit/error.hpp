#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace osckit {

// Base class for every error raised by the library. The C API maps each
// subclass onto one osk_status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Malformed GFN1 payload. offset is the byte position where parsing failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// The requested enumeration would visit more rectangles than the cap allows.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(unsigned long long requested, unsigned long long cap)
      : Error("enumeration needs " + std::to_string(requested) +
              " rectangles but the budget is " + std::to_string(cap) +
              "; raise --budget or use --mode dyadic"),
        requested_(requested),
        cap_(cap) {}
  unsigned long long requested() const noexcept { return requested_; }
  unsigned long long cap() const noexcept { return cap_; }

 private:
  unsigned long long requested_;
  unsigned long long cap_;
};

// A ratio whose denominator is zero (e.g. a constant test function).
class DivisionDegenerate : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace osckit
