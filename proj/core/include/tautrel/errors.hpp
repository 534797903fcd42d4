#pragma once

#include <stdexcept>
#include <string>

namespace tautrel {

// Base for every error the library raises on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 2g-2+n <= 0 style requests.
struct UnstableTarget : Error {
  using Error::Error;
};

// Exact division left a remainder. Always a logic error upstream.
struct NotDivisible : Error {
  using Error::Error;
};

struct ZeroDenominator : Error {
  using Error::Error;
};

// Kernel base requested outside the calibrated (g,k) table.
struct UncalibratedBase : Error {
  using Error::Error;
};

struct InconsistentCalibration : Error {
  using Error::Error;
};

struct InvalidSplit : Error {
  using Error::Error;
};

struct CorruptEntry : Error {
  using Error::Error;
};

// Two different values for one cache key: some computation is not deterministic.
struct CacheConflict : Error {
  using Error::Error;
};

struct AuditFailure : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace tautrel
