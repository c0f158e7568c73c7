// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include "plasmahom/enz.hpp"

#include <cmath>

#include "plasmahom/errors.hpp"

namespace plasmahom
{

void EnzParams::validate() const
{
  if (!(eps_bar.real() > 0.0))
  {
    throw InvalidParameterError("enz: Re(eps_bar) must be positive");
  }
  if (!(spacing > 0.0))
  {
    throw InvalidParameterError("enz: spacing must be positive");
  }
  if (!(omega > 0.0))
  {
    throw InvalidParameterError("enz: omega must be positive");
  }
}

std::string to_string(Regime r)
{
  switch (r)
  {
    case Regime::sigma_dominant:
      return "sigma_dominant";
    case Regime::lambda_dominant:
      return "lambda_dominant";
    case Regime::mixed:
      return "mixed";
  }
  return "mixed";
}

cplx surface_ratio(const EnzParams &p)
{
  return p.sigma_bar_d / (kI * p.omega * p.eps_bar);
}

cplx line_ratio(const EnzParams &p)
{
  return p.lambda_bar_d / (kI * p.omega * p.eps_bar);
}

cplx plasmonic_thickness(const EnzParams &p)
{
  p.validate();
  const cplx half = 0.5 * surface_ratio(p);
  const cplx root = std::sqrt(half * half + line_ratio(p));
  const cplx plus = half + root;
  const cplx minus = half - root;
  // Same root via the product xi+ xi- = -l when the sum cancels.
  if (std::abs(plus) < std::abs(minus))
  {
    return -line_ratio(p) / minus;
  }
  return plus;
}

double quadratic_residual(const EnzParams &p, cplx xi0)
{
  const cplx r = xi0 * xi0 - surface_ratio(p) * xi0 - line_ratio(p);
  return std::abs(r) / (1.0 + std::norm(xi0));
}

cplx eff_permittivity_factorized(const EnzParams &p)
{
  const cplx xi0 = plasmonic_thickness(p);
  if (xi0 == 0.0)
  {
    throw PreconditionError(
        "factorized form undefined for xi0 = 0; use eff_permittivity_direct");
  }
  const double d = p.spacing;
  return (1.0 - xi0 / d) * (1.0 + line_ratio(p) / (xi0 * d));
}

cplx eff_permittivity_direct(const EnzParams &p)
{
  p.validate();
  const double d = p.spacing;
  return 1.0 - surface_ratio(p) / d - line_ratio(p) / (d * d);
}

CriticalSpacing critical_spacing(const EnzParams &p, double loss_threshold)
{
  CriticalSpacing c;
  c.value = plasmonic_thickness(p);
  const double mag = std::abs(c.value);
  c.realizable = mag > 0.0 && c.value.real() > 0.0 &&
                 std::abs(c.value.imag()) / mag < loss_threshold;
  return c;
}

Regime regime(const EnzParams &p, const EnzOptions &options)
{
  const double s = std::abs(surface_ratio(p));
  const double l = std::abs(line_ratio(p));
  if (l == 0.0)
  {
    return s == 0.0 ? Regime::mixed : Regime::sigma_dominant;
  }
  if (s == 0.0)
  {
    return Regime::lambda_dominant;
  }
  const double ratio = l / (s * s);
  if (ratio < options.regime_low)
  {
    return Regime::sigma_dominant;
  }
  if (ratio > options.regime_high)
  {
    return Regime::lambda_dominant;
  }
  return Regime::mixed;
}

EnzReport analyze_enz(const EnzParams &p, const EnzOptions &options)
{
  EnzReport r;
  const auto dc = critical_spacing(p, options.loss_threshold);
  r.xi0 = dc.value;
  r.critical_spacing = dc.value;
  r.realizable = dc.realizable;
  r.regime = regime(p, options);
  r.quadratic_residual = quadratic_residual(p, r.xi0);
  r.eps_eff_ratio = r.xi0 == 0.0 ? eff_permittivity_direct(p) : eff_permittivity_factorized(p);
  return r;
}

}  // namespace plasmahom
