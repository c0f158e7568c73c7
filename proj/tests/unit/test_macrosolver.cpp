// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "plasmahom/errors.hpp"
#include "plasmahom/macrosolver.hpp"

namespace ph = plasmahom;
using ph::cplx;

namespace
{
ph::MacroProblem dipole_problem(int n, int pml_cells)
{
  ph::MacroProblem p;
  p.lx = p.ly = 4.0;
  p.nx = p.ny = n;
  p.omega = 2.0 * std::numbers::pi;
  p.pml.cells = pml_cells;
  ph::MacroSource s;
  s.x = 2.0;
  s.y = 2.0;
  s.radius = 0.1;
  p.sources.push_back(s);
  return p;
}

// Unit period in x, plane waves travelling in +-y from a current sheet at y = ly / 2.
ph::MacroProblem plane_wave_problem(double eps, int points_per_wavelength)
{
  ph::MacroProblem p;
  p.periodic_x = true;
  p.omega = 2.0 * std::numbers::pi;
  const double wavelength = 1.0 / std::sqrt(eps);
  p.ly = 6.0;
  p.ny = static_cast<int>(std::lround(p.ly / wavelength * points_per_wavelength));
  p.lx = 4.0 * p.ly / p.ny;
  p.nx = 4;
  p.ambient = {cplx(eps), cplx(eps), cplx(eps)};
  p.pml.cells = 20;
  ph::MacroSource s;
  s.kind = ph::SourceKind::sheet_current;
  s.y = 0.5 * p.ly;
  p.sources.push_back(s);
  return p;
}
}  // namespace

TEST(MacroSolver, ZeroSourceGivesZeroField)
{
  auto p = dipole_problem(40, 8);
  p.sources.clear();
  const auto f = ph::solve_macro(p);
  EXPECT_EQ(f.h.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(f.ex.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(f.ey.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(ph::divergence_check(f, p), 0.0);
}

TEST(MacroSolver, PlaneWaveDispersion)
{
  for (double eps : {1.0, 2.25})
  {
    const auto p = plane_wave_problem(eps, 20);
    const auto f = ph::solve_macro(p);
    const double k_exact = p.omega * std::sqrt(p.mu * eps);
    // Phase advance per row on the upper side, between the source and the PML.
    const int j0 = p.ny / 2 + 5;
    const int j1 = p.ny - p.pml.cells - 5;
    ASSERT_GT(j1, j0 + 10);
    const cplx ratio = f.h_at(0, j1) / f.h_at(0, j0);
    double phase = std::arg(ratio);
    const double expected = k_exact * (j1 - j0) * f.dy;
    phase += 2.0 * std::numbers::pi * std::round((expected - phase) / (2.0 * std::numbers::pi));
    const double k_num = phase / ((j1 - j0) * f.dy);
    EXPECT_LT(std::abs(k_num - k_exact) / k_exact, 0.01) << "eps " << eps;
    EXPECT_NEAR(std::abs(ratio), 1.0, 0.01);
    EXPECT_LE(ph::divergence_check(f, p), 10.0 * 1e-8);
  }
}

TEST(MacroSolver, DipoleDivergenceResidual)
{
  auto p = dipole_problem(80, 12);
  p.regions.push_back({0.0, 4.0, 2.6, 3.0, {cplx(0.2, 0.05), cplx(1.5), cplx(1.0)}});
  const double tol = 1e-8;
  const auto f = ph::solve_macro(p, tol);
  EXPECT_LE(f.residual, tol);
  EXPECT_LE(ph::divergence_check(f, p), 10.0 * tol);
}

TEST(MacroSolver, Reciprocity)
{
  ph::MacroProblem p;
  p.lx = p.ly = 4.0;
  p.nx = p.ny = 80;
  p.omega = 2.0 * std::numbers::pi;
  p.pml.cells = 12;
  p.regions.push_back({1.0, 3.0, 2.2, 2.8, {cplx(2.0), cplx(3.0), cplx(1.0)}});
  ph::MacroSource a, b;
  a.kind = b.kind = ph::SourceKind::magnetic_point;
  a.x = 1.33;
  a.y = 1.41;
  b.x = 2.71;
  b.y = 3.17;
  auto probe = [&](const ph::MacroSource &src, const ph::MacroSource &at) {
    auto q = p;
    q.sources = {src};
    const auto f = ph::solve_macro(q);
    return f.h_at(static_cast<int>(at.x / f.dx), static_cast<int>(at.y / f.dy));
  };
  const cplx ab = probe(a, b);
  const cplx ba = probe(b, a);
  EXPECT_LT(std::abs(ab - ba) / std::abs(ab), 0.01);
}

TEST(MacroSolver, PmlThicknessInsensitive)
{
  // Same physical interior; the domain grows with the PML.
  const int base = 80;
  auto thin = dipole_problem(base + 2 * 12, 12);
  auto thick = dipole_problem(base + 2 * 24, 24);
  const double h = 4.0 / base;
  thin.lx = thin.ly = h * thin.nx;
  thick.lx = thick.ly = h * thick.nx;
  thin.sources[0].x = thin.sources[0].y = 0.5 * thin.lx;
  thick.sources[0].x = thick.sources[0].y = 0.5 * thick.lx;
  const auto ft = ph::solve_macro(thin);
  const auto fk = ph::solve_macro(thick);
  const double c0 = 0.5 * thin.lx, c1 = 0.5 * thick.lx;
  const double et = ph::region_energy(ft, {c0 - 1.5, c0 + 1.5, c0 - 1.5, c0 + 1.5});
  const double ek = ph::region_energy(fk, {c1 - 1.5, c1 + 1.5, c1 - 1.5, c1 + 1.5});
  EXPECT_LT(std::abs(et - ek) / ek, 0.005);
}

TEST(MacroSolver, EnzSlabHasFlatPhase)
{
  ph::MacroProblem p;
  p.lx = p.ly = 12.0;
  p.nx = p.ny = 240;
  p.omega = 2.0;
  p.pml.cells = 20;
  const ph::EpsRegion slab{0.0, 12.0, 6.0, 7.0, {cplx(0.001, 0.01), cplx(1.0), cplx(1.0)}};
  p.regions.push_back(slab);
  ph::MacroSource s;
  s.x = 6.0;
  s.y = 4.5;
  s.radius = 0.2;
  p.sources.push_back(s);
  const auto f = ph::solve_macro(p);
  EXPECT_LT(ph::phase_spread_degrees(f, slab), 10.0);
}

TEST(MacroSolver, ExactZeroPermittivityIsRejected)
{
  auto p = dipole_problem(40, 8);
  p.regions.push_back({0.0, 4.0, 3.0, 3.5, {cplx(0.0), cplx(1.0), cplx(1.0)}});
  EXPECT_THROW(ph::solve_macro(p), ph::SolverError);
}

TEST(MacroSolver, Validation)
{
  auto base = dipole_problem(40, 8);
  {
    auto p = base;
    p.pml.cells = 20;
    EXPECT_THROW(ph::solve_macro(p), ph::InvalidParameterError);
  }
  {
    auto p = base;
    p.sources[0].x = 0.3;
    EXPECT_THROW(ph::solve_macro(p), ph::InvalidParameterError);
  }
  {
    auto p = base;
    p.sources[0].direction = Eigen::Vector2d::Zero();
    EXPECT_THROW(ph::solve_macro(p), ph::InvalidParameterError);
  }
  {
    auto p = base;
    p.omega = 0.0;
    EXPECT_THROW(ph::solve_macro(p), ph::InvalidParameterError);
  }
  {
    auto p = base;
    p.nx = 2;
    EXPECT_THROW(ph::solve_macro(p), ph::InvalidParameterError);
  }
  EXPECT_THROW(ph::solve_macro(base, 1e-3), ph::InvalidParameterError);
}

TEST(MacroField, BinaryRoundTrip)
{
  const auto p = dipole_problem(40, 8);
  const auto f = ph::solve_macro(p);
  std::stringstream ss;
  ph::write_field_binary(ss, f, p.omega);
  const std::string bytes = ss.str();
  EXPECT_EQ(bytes.substr(0, 4), "PHMF");
  const std::size_t expected =
      4 + 3 * 4 + 3 * 8 + 16 * (f.h.size() + f.ex.size() + f.ey.size());
  EXPECT_EQ(bytes.size(), expected);
  double omega = 0.0;
  std::istringstream in(bytes);
  const auto g = ph::read_field_binary(in, &omega);
  EXPECT_EQ(omega, p.omega);
  EXPECT_EQ(g.nx, f.nx);
  EXPECT_EQ(g.ny, f.ny);
  EXPECT_EQ(g.dx, f.dx);
  EXPECT_EQ(g.h, f.h);
  EXPECT_EQ(g.ex, f.ex);
  EXPECT_EQ(g.ey, f.ey);

  std::istringstream truncated(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(ph::read_field_binary(truncated), ph::Error);
  std::istringstream bad("XXXX0000");
  EXPECT_THROW(ph::read_field_binary(bad), ph::Error);
}

TEST(MacroField, SvgHasBothPanels)
{
  const auto p = dipole_problem(40, 8);
  const auto svg = ph::field_svg(ph::solve_macro(p), p);
  EXPECT_NE(svg.find("|H|"), std::string::npos);
  EXPECT_NE(svg.find("arg H"), std::string::npos);
}
