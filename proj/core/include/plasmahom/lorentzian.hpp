// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_LORENTZIAN_HPP
#define PLASMAHOM_LORENTZIAN_HPP

#include <span>
#include <string>
#include <vector>

#include "plasmahom/types.hpp"

namespace plasmahom
{

// eps(w) = background - amplitude / (w^2 - w_R^2 + i width w)
struct LorentzianFit
{
  double resonance_freq = 0.0;
  double amplitude = 0.0;
  double width = 0.0;
  double background = 0.0;
  double rms_residual = 0.0;
  int iterations = 0;

  cplx operator()(double omega) const;
};

struct FitOptions
{
  int max_iterations = 200;
  double tol = 1e-14;
  int min_points = 10;
};

// Joint nonlinear least squares on real and imaginary parts. Throws FitError.
LorentzianFit fit_lorentzian(std::span<const double> omega, std::span<const cplx> values,
                             const FitOptions &options = {});

struct EnzCrossing
{
  double omega = 0.0;
  bool rising = true;  // Re eps goes from negative to positive
};

// Zeros of Re eps between consecutive samples. Bisection on the fit plus the linear
// interpolant of the data-minus-fit remainder, which matches the samples at both ends.
std::vector<EnzCrossing> find_enz_crossings(std::span<const double> omega,
                                            std::span<const cplx> values,
                                            const LorentzianFit &fit, double tol = 1e-12);

}  // namespace plasmahom

#endif  // PLASMAHOM_LORENTZIAN_HPP
