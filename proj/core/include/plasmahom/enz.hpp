// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_ENZ_HPP
#define PLASMAHOM_ENZ_HPP

#include <string>

#include "plasmahom/types.hpp"

namespace plasmahom
{

// Per-axis averaged quantities in rescaled units.
struct EnzParams
{
  cplx eps_bar{1.0, 0.0};
  cplx sigma_bar_d{0.0, 0.0};
  cplx lambda_bar_d{0.0, 0.0};
  double omega = 1.0;
  double spacing = 1.0;

  void validate() const;
};

enum class Regime
{
  sigma_dominant,
  lambda_dominant,
  mixed
};

std::string to_string(Regime r);

struct EnzReport
{
  cplx xi0{0.0, 0.0};
  cplx critical_spacing{0.0, 0.0};
  bool realizable = false;
  cplx eps_eff_ratio{0.0, 0.0};
  Regime regime = Regime::mixed;
  double quadratic_residual = 0.0;
};

struct EnzOptions
{
  double loss_threshold = 0.1;  // |Im d_c| / |d_c|
  double regime_low = 1e-2;     // |l| / |s|^2 below: sigma dominant
  double regime_high = 1e2;     // above: lambda dominant
};

// sigma_bar / (i omega eps_bar) and lambda_bar / (i omega eps_bar).
cplx surface_ratio(const EnzParams &p);
cplx line_ratio(const EnzParams &p);

cplx plasmonic_thickness(const EnzParams &p);

// |xi0^2 - s xi0 - l| / (1 + |xi0|^2).
double quadratic_residual(const EnzParams &p, cplx xi0);

// (1 - xi0/d)(1 + l/(xi0 d)); PreconditionError when xi0 = 0.
cplx eff_permittivity_factorized(const EnzParams &p);

// 1 - s/d - l/d^2.
cplx eff_permittivity_direct(const EnzParams &p);

struct CriticalSpacing
{
  cplx value{0.0, 0.0};
  bool realizable = false;
};

CriticalSpacing critical_spacing(const EnzParams &p, double loss_threshold = 0.1);

Regime regime(const EnzParams &p, const EnzOptions &options = {});

EnzReport analyze_enz(const EnzParams &p, const EnzOptions &options = {});

}  // namespace plasmahom

#endif  // PLASMAHOM_ENZ_HPP
