// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include "plasmahom/materials.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "plasmahom/errors.hpp"

namespace plasmahom
{

namespace
{

constexpr double kElectronCharge = 1.602176634e-19;  // C
constexpr double kHbar = 1.054571817e-34;            // J s
constexpr double kEps0 = 8.8541878128e-12;           // F/m

cplx broadcast(const std::vector<cplx> &values, std::size_t index)
{
  if (values.empty())
  {
    return 0.0;
  }
  if (values.size() == 1)
  {
    return values.front();
  }
  if (index >= values.size())
  {
    throw InvalidParameterError("material list has " + std::to_string(values.size()) +
                                " entries; index " + std::to_string(index) +
                                " requested");
  }
  return values[index];
}

}  // namespace

bool DrudeParams::out_of_range() const
{
  return fermi_energy_tilde < 0.0 || fermi_energy_tilde > 1.6 || omega_tilde < 0.5 ||
         omega_tilde > 4.0 || !(spacing_tilde > 0.0);
}

double drude_prefactor_exact()
{
  const double e2 = kElectronCharge * kElectronCharge;
  return e2 * kFermiEnergyUnit /
         (kEps0 * std::numbers::pi * kHbar * kHbar * kFrequencyUnit * kFrequencyUnit *
          kSpacingUnit);
}

double damping_tilde(double relax_time)
{
  if (!(relax_time > 0.0))
  {
    throw InvalidParameterError("relax_time must be positive");
  }
  return 1.0 / (relax_time * kFrequencyUnit);
}

cplx drude_surface_conductivity(const DrudeParams &p)
{
  if (!(p.relax_time > 0.0))
  {
    throw InvalidParameterError("relax_time must be positive");
  }
  if (!(p.omega_tilde > 0.0))
  {
    throw InvalidParameterError("omega_tilde must be positive");
  }
  const double e2 = kElectronCharge * kElectronCharge;
  const double fermi = p.fermi_energy_tilde * kFermiEnergyUnit;
  const double omega = p.omega_tilde * kFrequencyUnit;
  const cplx denom = kEps0 * std::numbers::pi * kHbar * kHbar *
                     (omega + kI / p.relax_time);
  return kI * e2 * fermi / denom;
}

cplx rescaled_eta(double fermi_energy_tilde, double spacing_tilde, double omega_tilde,
                  double prefactor, double damping)
{
  if (spacing_tilde == 0.0 || omega_tilde == 0.0)
  {
    throw DomainError("rescaled_eta: spacing and frequency must be nonzero");
  }
  if (!(spacing_tilde > 0.0) || !(omega_tilde > 0.0))
  {
    throw InvalidParameterError("rescaled_eta: spacing and frequency must be positive");
  }
  return prefactor * fermi_energy_tilde /
         (spacing_tilde * omega_tilde * (omega_tilde + kI * damping));
}

cplx rescaled_eta(const DrudeParams &p, double prefactor)
{
  return rescaled_eta(p.fermi_energy_tilde, p.spacing_tilde, p.omega_tilde, prefactor,
                      damping_tilde(p.relax_time));
}

ScaledConductivities scale_conductivities(double d, cplx sigma, cplx lambda)
{
  if (!(d > 0.0))
  {
    throw InvalidParameterError("spacing d must be positive");
  }
  return {d * sigma, d * d * lambda};
}

ScaledConductivities unscale_conductivities(double d, cplx sigma_d, cplx lambda_d)
{
  if (!(d > 0.0))
  {
    throw InvalidParameterError("spacing d must be positive");
  }
  return {sigma_d / d, lambda_d / (d * d)};
}

cplx surface_prefactor(cplx conductivity, double omega_tilde)
{
  if (omega_tilde == 0.0)
  {
    throw DomainError("1/(i omega) is undefined at omega = 0");
  }
  return conductivity / (kI * omega_tilde);
}

cplx MaterialSpec::sigma_for(std::size_t curve) const
{
  return broadcast(sigma_surface, curve);
}

cplx MaterialSpec::lambda_for(std::size_t edge) const
{
  return broadcast(lambda_line, edge);
}

cplx MaterialSpec::lambda_slope_for(std::size_t edge) const
{
  return broadcast(lambda_slope, edge);
}

void MaterialSpec::validate() const
{
  auto check = [](cplx eps, const char *name) {
    if (!(eps.real() > 0.0) || eps.imag() < 0.0 || !std::isfinite(eps.imag()))
    {
      throw InvalidParameterError(std::string(name) +
                                  " must satisfy Re > 0 and Im >= 0");
    }
  };
  check(eps_bulk, "eps_bulk");
  if (eps_inclusion)
  {
    check(*eps_inclusion, "eps_inclusion");
  }
  if (!(mu0 > 0.0))
  {
    throw InvalidParameterError("mu0 must be positive");
  }
}

MaterialSpec MaterialSpec::from_eta(cplx eta, double omega_tilde, cplx eps)
{
  MaterialSpec m;
  m.eps_bulk = eps;
  m.sigma_surface = {kI * omega_tilde * eta};
  return m;
}

}  // namespace plasmahom
