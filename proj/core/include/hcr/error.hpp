#pragma once

#include <stdexcept>
#include <string>

namespace hcr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input (wrong arity, empty sample, bad file).
class InvalidInput : public Error
{
public:
  using Error::Error;
};

/// A fitted scale came out as zero (all samples identical).
class DegenerateScale : public Error
{
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of the function.
class DomainError : public Error
{
public:
  using Error::Error;
};

/// Requested basis exceeds the configured size cap.
class ResourceError : public Error
{
public:
  using Error::Error;
};

/// Conditioning context has non-positive marginal density.
class NonPositiveDensity : public Error
{
public:
  using Error::Error;
};

/// Least-squares design matrix without full column rank.
class RankDeficient : public Error
{
public:
  using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error
{
public:
  using Error::Error;
};

} // namespace hcr
