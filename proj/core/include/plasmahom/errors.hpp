// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_ERRORS_HPP
#define PLASMAHOM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace plasmahom
{

// Base class of every error thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InvalidParameterError : public Error
{
public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation (division by zero, point
// not on a curve, ...).
class DomainError : public Error
{
public:
  using Error::Error;
};

class GeometryError : public Error
{
public:
  using Error::Error;
};

class MeshError : public Error
{
public:
  using Error::Error;
};

// Raised when a caller violates an interface contract, e.g. pairing a corrector with the
// wrong mesh or solving a system without its normalization row.
class ContractError : public Error
{
public:
  using Error::Error;
};

class UnsupportedDirectionError : public ContractError
{
public:
  using ContractError::ContractError;
};

class PreconditionError : public Error
{
public:
  using Error::Error;
};

class SolverError : public Error
{
public:
  SolverError(const std::string &what, int iterations = 0, double residual = 0.0)
    : Error(what), iterations_(iterations), residual_(residual)
  {
  }

  int iterations() const { return iterations_; }
  double residual() const { return residual_; }

private:
  int iterations_;
  double residual_;
};

class FitError : public Error
{
public:
  using Error::Error;
};

}  // namespace plasmahom

#endif  // PLASMAHOM_ERRORS_HPP
