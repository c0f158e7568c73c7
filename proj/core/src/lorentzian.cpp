// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include "plasmahom/lorentzian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "plasmahom/errors.hpp"

namespace plasmahom
{

namespace
{

// Parameters: background, amplitude, q = w_R^2, width.
using Params = Eigen::Vector4d;

cplx model(const Params &p, double w)
{
  return p[0] - p[1] / (w * w - p[2] + kI * p[3] * w);
}

double sum_squares(const Params &p, std::span<const double> omega, std::span<const cplx> v)
{
  double s = 0.0;
  for (std::size_t k = 0; k < omega.size(); ++k)
  {
    s += std::norm(model(p, omega[k]) - v[k]);
  }
  return s;
}

// Background and amplitude by linear least squares for fixed q and width.
Params project_linear(double q, double width, std::span<const double> omega,
                      std::span<const cplx> v)
{
  const Eigen::Index n = static_cast<Eigen::Index>(omega.size());
  Eigen::MatrixXd a(2 * n, 2);
  Eigen::VectorXd b(2 * n);
  for (Eigen::Index k = 0; k < n; ++k)
  {
    const double w = omega[k];
    const cplx basis = -1.0 / (w * w - q + kI * width * w);
    a(k, 0) = 1.0;
    a(k, 1) = basis.real();
    a(n + k, 0) = 0.0;
    a(n + k, 1) = basis.imag();
    b[k] = v[k].real();
    b[n + k] = v[k].imag();
  }
  const Eigen::Vector2d x = a.colPivHouseholderQr().solve(b);
  return Params(x[0], x[1], q, width);
}

}  // namespace

cplx LorentzianFit::operator()(double omega) const
{
  return background -
         amplitude / (omega * omega - resonance_freq * resonance_freq + kI * width * omega);
}

LorentzianFit fit_lorentzian(std::span<const double> omega, std::span<const cplx> values,
                             const FitOptions &options)
{
  const std::size_t n = omega.size();
  if (values.size() != n)
  {
    throw FitError("fit_lorentzian: frequency and value arrays differ in length");
  }
  if (n < static_cast<std::size_t>(options.min_points))
  {
    throw FitError("fit_lorentzian: at least " + std::to_string(options.min_points) +
                   " points are required, got " + std::to_string(n));
  }
  for (std::size_t k = 0; k < n; ++k)
  {
    if (!std::isfinite(omega[k]) || !std::isfinite(values[k].real()) ||
        !std::isfinite(values[k].imag()))
    {
      throw FitError("fit_lorentzian: non-finite sample at index " + std::to_string(k));
    }
  }

  // Initial guess: resonance at the Im maximum, width from its half maximum.
  std::size_t peak = 0;
  for (std::size_t k = 1; k < n; ++k)
  {
    if (values[k].imag() > values[peak].imag())
    {
      peak = k;
    }
  }
  const double peak_im = values[peak].imag();
  std::size_t lo = peak, hi = peak;
  while (lo > 0 && values[lo - 1].imag() > 0.5 * peak_im)
  {
    --lo;
  }
  while (hi + 1 < n && values[hi + 1].imag() > 0.5 * peak_im)
  {
    ++hi;
  }
  const double spacing =
      (omega[std::min(peak + 1, n - 1)] - omega[peak > 0 ? peak - 1 : 0]) / 2.0;
  double width0 = omega[hi] - omega[lo];
  if (!(width0 > 0.0))
  {
    width0 = std::max(spacing, 1e-6);
  }

  // Coarse search around the peak with the linear parameters projected out.
  const double w_lo = omega[peak > 0 ? peak - 1 : 0];
  const double w_hi = omega[std::min(peak + 1, n - 1)];
  Params best = project_linear(omega[peak] * omega[peak], width0, omega, values);
  double best_ss = sum_squares(best, omega, values);
  constexpr int kSteps = 80;
  for (int a = 0; a <= kSteps; ++a)
  {
    const double wr = w_lo + (w_hi - w_lo) * a / kSteps;
    for (int b = 0; b <= 24; ++b)
    {
      const double width = width0 * std::pow(10.0, -3.0 + 4.0 * b / 24.0);
      const Params p = project_linear(wr * wr, width, omega, values);
      const double ss = sum_squares(p, omega, values);
      if (std::isfinite(ss) && ss < best_ss)
      {
        best = p;
        best_ss = ss;
      }
    }
  }
  const Params initial = best;

  // Levenberg-Marquardt.
  Params p = best;
  double ss = best_ss;
  double mu = 1e-3;
  int it = 0;
  bool converged = false;
  const Eigen::Index rows = static_cast<Eigen::Index>(2 * n);
  Eigen::MatrixXd jac(rows, 4);
  Eigen::VectorXd res(rows);
  for (; it < options.max_iterations; ++it)
  {
    for (std::size_t k = 0; k < n; ++k)
    {
      const double w = omega[k];
      const cplx d = w * w - p[2] + kI * p[3] * w;
      const cplx r = model(p, w) - values[k];
      const cplx j0 = 1.0;
      const cplx j1 = -1.0 / d;
      const cplx j2 = -p[1] / (d * d);
      const cplx j3 = p[1] * kI * w / (d * d);
      const Eigen::Index e = static_cast<Eigen::Index>(k);
      res[e] = r.real();
      res[e + n] = r.imag();
      jac.row(e) << j0.real(), j1.real(), j2.real(), j3.real();
      jac.row(e + n) << j0.imag(), j1.imag(), j2.imag(), j3.imag();
    }
    const Eigen::Matrix4d jtj = jac.transpose() * jac;
    const Eigen::Vector4d g = jac.transpose() * res;
    bool improved = false;
    while (mu < 1e16)
    {
      Eigen::Matrix4d lhs = jtj;
      lhs.diagonal() += mu * jtj.diagonal().cwiseMax(1e-300);
      const Eigen::Vector4d step = lhs.ldlt().solve(-g);
      Params trial = p + step;
      if (trial[3] <= 0.0)
      {
        trial[3] = 0.5 * p[3];
      }
      const double trial_ss = sum_squares(trial, omega, values);
      if (std::isfinite(trial_ss) && trial_ss <= ss)
      {
        const double gain = ss - trial_ss;
        const double step_rel = step.cwiseAbs().cwiseQuotient(p.cwiseAbs().cwiseMax(1e-12)).maxCoeff();
        p = trial;
        ss = trial_ss;
        mu = std::max(mu / 3.0, 1e-15);
        improved = true;
        if (gain <= options.tol * std::max(ss, 1e-300) || step_rel < 1e-15 ||
            ss < 1e-300)
        {
          converged = true;
        }
        break;
      }
      mu *= 4.0;
    }
    if (!improved)
    {
      converged = true;  // no descent direction left
    }
    if (converged)
    {
      break;
    }
  }

  if (!converged || !(p[3] > 0.0) || !(p[2] >= -1e-12) || !std::isfinite(ss))
  {
    std::ostringstream msg;
    msg << "Lorentzian fit did not converge to a physical pole (initial guess: omega_R="
        << std::sqrt(std::max(initial[2], 0.0)) << ", width=" << initial[3]
        << ", amplitude=" << initial[1] << ", background=" << initial[0] << ")";
    throw FitError(msg.str());
  }
  LorentzianFit fit;
  fit.background = p[0];
  fit.amplitude = p[1];
  fit.resonance_freq = std::sqrt(std::max(p[2], 0.0));
  fit.width = p[3];
  fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
  fit.iterations = it + 1;
  return fit;
}

std::vector<EnzCrossing> find_enz_crossings(std::span<const double> omega,
                                            std::span<const cplx> values,
                                            const LorentzianFit &fit, double tol)
{
  std::vector<EnzCrossing> roots;
  for (std::size_t k = 0; k + 1 < omega.size(); ++k)
  {
    const double ya = values[k].real();
    const double yb = values[k + 1].real();
    if (ya == 0.0)
    {
      roots.push_back({omega[k], yb > 0.0});
      continue;
    }
    if (ya * yb >= 0.0)
    {
      continue;
    }
    const double a0 = omega[k], b0 = omega[k + 1];
    const double ra = ya - fit(a0).real();
    const double rb = yb - fit(b0).real();
    auto g = [&](double w) {
      const double s = (w - a0) / (b0 - a0);
      return fit(w).real() + (1.0 - s) * ra + s * rb;
    };
    double a = a0, b = b0, ga = ya;
    while (b - a > tol * std::max(1.0, std::abs(a)))
    {
      const double m = 0.5 * (a + b);
      const double gm = g(m);
      if (gm == 0.0)
      {
        a = b = m;
        break;
      }
      if ((gm < 0.0) == (ga < 0.0))
      {
        a = m;
        ga = gm;
      }
      else
      {
        b = m;
      }
    }
    roots.push_back({0.5 * (a + b), ya < 0.0});
  }
  if (!omega.empty() && values.back().real() == 0.0 && omega.size() > 1)
  {
    roots.push_back({omega.back(), values[omega.size() - 2].real() < 0.0});
  }
  return roots;
}

}  // namespace plasmahom
