// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_MATERIALS_HPP
#define PLASMAHOM_MATERIALS_HPP

#include <optional>
#include <string>
#include <vector>

#include "plasmahom/types.hpp"

namespace plasmahom
{

//
// Nondimensional units used by every solver module:
//   E_F   = fermi_energy_tilde * 1e-19 J
//   omega = omega_tilde        * 1e14  Hz
//   d     = spacing_tilde      * 10    nm
// with eps0 = mu0 = 1 and the unit cell Y = [0,1]^2. Conversion to physical units
// happens only in this header.
//
inline constexpr double kFermiEnergyUnit = 1e-19;  // J
inline constexpr double kFrequencyUnit = 1e14;     // Hz
inline constexpr double kSpacingUnit = 1e-8;       // m
inline constexpr double kDefaultRelaxTime = 0.5e-12;  // s

// Rounded Drude prefactor used for all published graphene numbers. The value recomputed
// from CODATA constants is drude_prefactor_exact() (~82.98); keep the rounded one when
// reproducing reference results.
inline constexpr double kDrudePrefactor = 82.9;
inline constexpr double kDrudeDamping = 0.02;

struct DrudeParams
{
  double fermi_energy_tilde = 1.0;
  double relax_time = kDefaultRelaxTime;
  double omega_tilde = 2.0;
  double spacing_tilde = 20.72;

  // True when any parameter lies outside the study ranges E_F in [0, 1.6],
  // omega in [0.5, 4], d > 0. Out-of-range values are still evaluated.
  bool out_of_range() const;
};

// e^2 * E_unit / (eps0 * pi * hbar^2) / (omega_unit^2 * d_unit), CODATA 2018.
double drude_prefactor_exact();

// 1 / (tau * omega_unit): the dimensionless damping rate (0.02 for tau = 0.5 ps).
double damping_tilde(double relax_time);

// Physical Drude sheet conductivity divided by eps0, in m/s:
//   sigma^d = i e^2 E_F / (eps0 pi hbar^2 (omega + i/tau)).
cplx drude_surface_conductivity(const DrudeParams &p);

// eta = sigma / (i omega) = prefactor * E_F / (d * omega * (omega + i * damping)).
cplx rescaled_eta(double fermi_energy_tilde, double spacing_tilde, double omega_tilde,
                  double prefactor = kDrudePrefactor, double damping = kDrudeDamping);

// rescaled_eta with the damping derived from p.relax_time.
cplx rescaled_eta(const DrudeParams &p, double prefactor = kDrudePrefactor);

struct ScaledConductivities
{
  cplx sigma_d;
  cplx lambda_d;
};

// sigma^d = d sigma, lambda^d = d^2 lambda.
ScaledConductivities scale_conductivities(double d, cplx sigma, cplx lambda);
ScaledConductivities unscale_conductivities(double d, cplx sigma_d, cplx lambda_d);

// sigma / (i omega); rejects omega == 0.
cplx surface_prefactor(cplx conductivity, double omega_tilde);

//
// Cell-problem material data. Conductivities are the cell-scaled sigma and lambda (not
// the physical sigma^d, lambda^d). Lists hold one entry per interface curve / edge
// point; a single entry is broadcast to all of them and an empty list means zero.
//
struct MaterialSpec
{
  cplx eps_bulk{1.0, 0.0};
  // Permittivity inside closed interface curves; defaults to eps_bulk.
  std::optional<cplx> eps_inclusion;
  std::vector<cplx> sigma_surface;
  std::vector<cplx> lambda_line;
  // d(lambda)/dy3 along each edge (the lambda = sigma*y3 construction); broadcast rules
  // as above.
  std::vector<cplx> lambda_slope;
  double mu0 = 1.0;

  cplx sigma_for(std::size_t curve) const;
  cplx lambda_for(std::size_t edge) const;
  cplx lambda_slope_for(std::size_t edge) const;
  cplx eps_inside() const { return eps_inclusion.value_or(eps_bulk); }

  // Throws InvalidParameterError unless Re(eps) > 0 and Im(eps) >= 0 everywhere.
  void validate() const;

  // Uniform sheets with sigma = i*omega*eta in a host of permittivity eps.
  static MaterialSpec from_eta(cplx eta, double omega_tilde, cplx eps = 1.0);
};

}  // namespace plasmahom

#endif  // PLASMAHOM_MATERIALS_HPP
