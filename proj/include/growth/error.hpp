#pragma once
#ifndef GROWTH_ERROR_HPP
#define GROWTH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace growth {

/// Base of every error thrown by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

// Input problems: bad configuration, unparsable files, violated invariants.
class UsageError : public Error
{
  public:
    using Error::Error;
};

class ConfigError : public UsageError
{
  public:
    using UsageError::UsageError;
};

class ParseError : public UsageError
{
  public:
    ParseError(const std::string& what, std::size_t row)
        : UsageError("row " + std::to_string(row) + ": " + what), row_(row)
    {}

    std::size_t row() const noexcept { return row_; }

  private:
    std::size_t row_;
};

class ValidationError : public UsageError
{
  public:
    using UsageError::UsageError;
};

// Numeric problems: values outside a formula's domain, degenerate designs.
class NumericError : public Error
{
  public:
    using Error::Error;
};

class DomainError : public NumericError
{
  public:
    using NumericError::NumericError;
};

/// Evaluation at (or within 1e-9 years of) a finite-time singularity.
class SingularityError : public DomainError
{
  public:
    SingularityError(const std::string& what, double t_star)
        : DomainError(what), t_star_(t_star)
    {}

    double t_star() const noexcept { return t_star_; }

  private:
    double t_star_;
};

class DegenerateError : public NumericError
{
  public:
    using NumericError::NumericError;
};

/// A polynomial rate law was asked to extrapolate outside its fitted range.
class RangeError : public NumericError
{
  public:
    using NumericError::NumericError;
};

}  // namespace growth

#endif  // GROWTH_ERROR_HPP
