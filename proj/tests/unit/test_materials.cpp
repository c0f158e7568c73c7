// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "plasmahom/errors.hpp"
#include "plasmahom/materials.hpp"

namespace ph = plasmahom;
using ph::cplx;

namespace
{

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST(RescaledEta, ZeroDopingGivesZero)
{
  EXPECT_EQ(ph::rescaled_eta(0.0, 20.72, 2.0), cplx(0.0));
}

TEST(RescaledEta, ReferencePoint)
{
  // 82.9 / (20.72 * 2 * (2 + 0.02i)), evaluated in extended precision.
  const cplx expected(1.00014129861145, -0.0100014129861145);
  EXPECT_LT(rel(ph::rescaled_eta(1.0, 20.72, 2.0), expected), 1e-13);
}

TEST(RescaledEta, FrequencyRatio)
{
  const cplx a = ph::rescaled_eta(1.0, 20.72, 2.0);
  const cplx b = ph::rescaled_eta(1.0, 20.72, 4.0);
  const cplx correction = (2.0 + cplx(0, 0.02)) / (4.0 + cplx(0, 0.02));
  EXPECT_LT(rel(b, 0.5 * a * correction), 1e-14);
  EXPECT_NEAR(std::abs(b / a), 0.25, 2e-3);
}

TEST(RescaledEta, SignsAndHomogeneity)
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ef(0.01, 1.6), om(0.5, 4.0), d(1.0, 50.0);
  for (int k = 0; k < 200; ++k)
  {
    const double e = ef(rng), w = om(rng), s = d(rng);
    const cplx eta = ph::rescaled_eta(e, s, w);
    EXPECT_GT(eta.real(), 0.0);
    EXPECT_LT(eta.imag(), 0.0);
    EXPECT_EQ(ph::rescaled_eta(e, 2.0 * s, w), eta / 2.0);
  }
}

TEST(RescaledEta, DomainErrors)
{
  EXPECT_THROW(ph::rescaled_eta(1.0, 0.0, 2.0), ph::DomainError);
  EXPECT_THROW(ph::rescaled_eta(1.0, 20.0, 0.0), ph::DomainError);
  EXPECT_THROW(ph::rescaled_eta(1.0, -1.0, 2.0), ph::InvalidParameterError);
}

TEST(DrudeConductivity, ZeroDoping)
{
  ph::DrudeParams p;
  p.fermi_energy_tilde = 0.0;
  EXPECT_EQ(ph::drude_surface_conductivity(p), cplx(0.0));
}

TEST(DrudeConductivity, ReferenceValue)
{
  ph::DrudeParams p;
  // sigma^d / eps0 in m/s from CODATA 2018 constants.
  const cplx expected(414855.106586856, 41485510.6586856);
  EXPECT_LT(rel(ph::drude_surface_conductivity(p), expected), 1e-11);
}

TEST(DrudeConductivity, MatchesRescaledEta)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ef(0.1, 1.6), om(0.5, 4.0), d(5.0, 40.0),
      tau(0.1e-12, 2e-12);
  for (int k = 0; k < 100; ++k)
  {
    ph::DrudeParams p;
    p.fermi_energy_tilde = ef(rng);
    p.omega_tilde = om(rng);
    p.spacing_tilde = d(rng);
    p.relax_time = tau(rng);
    const cplx sigma = ph::drude_surface_conductivity(p);
    const cplx eta = ph::rescaled_eta(p, ph::drude_prefactor_exact());
    const cplx via_eta = ph::kI * (p.omega_tilde * ph::kFrequencyUnit) *
                         (p.spacing_tilde * ph::kSpacingUnit) * eta;
    EXPECT_LT(rel(sigma, via_eta), 1e-12);
  }
}

TEST(DrudeConductivity, LosslessLimit)
{
  ph::DrudeParams p;
  p.relax_time = 1e30;
  const cplx s = ph::drude_surface_conductivity(p);
  EXPECT_GT(s.imag(), 0.0);
  EXPECT_LT(std::abs(s.real()), 1e-15 * std::abs(s.imag()));
}

TEST(DrudeConductivity, Errors)
{
  ph::DrudeParams p;
  p.relax_time = 0.0;
  EXPECT_THROW(ph::drude_surface_conductivity(p), ph::InvalidParameterError);
  p.relax_time = -1e-12;
  EXPECT_THROW(ph::drude_surface_conductivity(p), ph::InvalidParameterError);
}

TEST(DrudeConductivity, PrefactorNearPrintedValue)
{
  EXPECT_NEAR(ph::drude_prefactor_exact(), 82.9793184195029, 1e-9);
  EXPECT_NEAR(ph::damping_tilde(0.5e-12), 0.02, 1e-15);
}

TEST(DrudeParams, OutOfRangeFlag)
{
  ph::DrudeParams p;
  EXPECT_FALSE(p.out_of_range());
  p.omega_tilde = 5.0;
  EXPECT_TRUE(p.out_of_range());
  EXPECT_NO_THROW(ph::rescaled_eta(p));
}

TEST(ScaleConductivities, Examples)
{
  auto a = ph::scale_conductivities(1.0, cplx(2, 1), 3.0);
  EXPECT_EQ(a.sigma_d, cplx(2, 1));
  EXPECT_EQ(a.lambda_d, cplx(3.0));
  auto b = ph::scale_conductivities(0.5, 2.0, 4.0);
  EXPECT_EQ(b.sigma_d, cplx(1.0));
  EXPECT_EQ(b.lambda_d, cplx(1.0));
  EXPECT_THROW(ph::scale_conductivities(0.0, 1.0, 1.0), ph::InvalidParameterError);
  EXPECT_THROW(ph::unscale_conductivities(-2.0, 1.0, 1.0), ph::InvalidParameterError);
}

TEST(ScaleConductivities, RoundTrip)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0), d(1e-3, 1e3);
  for (int k = 0; k < 100; ++k)
  {
    const double s = d(rng);
    const cplx sigma(u(rng), u(rng)), lambda(u(rng), u(rng));
    auto fwd = ph::scale_conductivities(s, sigma, lambda);
    auto back = ph::unscale_conductivities(s, fwd.sigma_d, fwd.lambda_d);
    EXPECT_LE(std::abs(back.sigma_d - sigma), 4e-16 * std::abs(sigma));
    EXPECT_LE(std::abs(back.lambda_d - lambda), 8e-16 * std::abs(lambda));
  }
}

TEST(MaterialSpec, BroadcastAndValidate)
{
  ph::MaterialSpec m;
  EXPECT_EQ(m.sigma_for(3), cplx(0.0));
  m.sigma_surface = {cplx(1, 2)};
  EXPECT_EQ(m.sigma_for(5), cplx(1, 2));
  m.lambda_line = {1.0, 2.0};
  EXPECT_EQ(m.lambda_for(1), cplx(2.0));
  EXPECT_THROW(m.lambda_for(2), ph::InvalidParameterError);
  EXPECT_NO_THROW(m.validate());
  m.eps_bulk = cplx(1.0, -0.1);
  EXPECT_THROW(m.validate(), ph::InvalidParameterError);
  m.eps_bulk = 1.0;
  m.eps_inclusion = cplx(-2.0, 0.0);
  EXPECT_THROW(m.validate(), ph::InvalidParameterError);
}

TEST(MaterialSpec, FromEta)
{
  const cplx eta(0.5, -0.01);
  auto m = ph::MaterialSpec::from_eta(eta, 2.0, 3.0);
  EXPECT_EQ(m.eps_bulk, cplx(3.0));
  EXPECT_LT(std::abs(ph::surface_prefactor(m.sigma_for(0), 2.0) - eta), 1e-15);
  EXPECT_THROW(ph::surface_prefactor(1.0, 0.0), ph::DomainError);
}
