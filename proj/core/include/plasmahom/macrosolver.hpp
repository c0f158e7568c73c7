// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_MACROSOLVER_HPP
#define PLASMAHOM_MACROSOLVER_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "plasmahom/types.hpp"

namespace plasmahom
{

//
// Homogenized TM problem on the rectangle [0, lx] x [0, ly] (units with mu0 = eps0 = 1):
//
//   curl E = i omega mu H,   curl H = -i omega eps E + J,   H = H_z, E = (E_x, E_y),
//
// discretized with H at cell centres, E_x on horizontal and E_y on vertical faces.
//

// Diagonal permittivity (xx, yy, zz) on an axis-aligned rectangle.
struct EpsRegion
{
  double x0 = 0.0, x1 = 0.0, y0 = 0.0, y1 = 0.0;
  std::array<cplx, 3> eps{cplx(1.0), cplx(1.0), cplx(1.0)};

  bool contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

enum class SourceKind
{
  current_patch,   // Gaussian current density patch (regularized dipole)
  sheet_current,   // J_x concentrated on the horizontal line y = y
  magnetic_point   // point source in the H equation
};

struct MacroSource
{
  SourceKind kind = SourceKind::current_patch;
  double x = 0.0, y = 0.0;
  double radius = 0.0;                // Gaussian radius; <= 0 means 2 cells
  Eigen::Vector2d direction{1.0, 0.0};  // current direction for the patch
  cplx amplitude{1.0, 0.0};
};

struct Pml
{
  int cells = 12;
  double strength = 0.0;  // peak damping sigma_max; <= 0 picks a default from the grid
  int order = 3;
};

struct MacroProblem
{
  double lx = 1.0, ly = 1.0;
  int nx = 64, ny = 64;
  double omega = 1.0;
  double mu = 1.0;
  std::array<cplx, 3> ambient{cplx(1.0), cplx(1.0), cplx(1.0)};
  std::vector<EpsRegion> regions;  // later entries override earlier ones
  std::vector<MacroSource> sources;
  Pml pml;
  bool periodic_x = false;  // no PML in x; H periodic instead

  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  std::array<cplx, 3> eps_at(double x, double y) const;
  // Throws InvalidParameterError / SolverError for violated invariants.
  void validate() const;
};

struct MacroField
{
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;
  Eigen::VectorXcd h;   // nx * ny, index j * nx + i
  Eigen::VectorXcd ex;  // nx * (ny + 1), face (i, j - 1/2) at index j * nx + i
  Eigen::VectorXcd ey;  // (nx + 1) * ny, face (i - 1/2, j) at index j * (nx + 1) + i
  double residual = 0.0;

  cplx h_at(int i, int j) const { return h[static_cast<Eigen::Index>(j) * nx + i]; }
  double x_center(int i) const { return (i + 0.5) * dx; }
  double y_center(int j) const { return (j + 0.5) * dy; }
};

MacroField solve_macro(const MacroProblem &p, double tol = 1e-8);

// Normalized discrete residual of div(eps E) - div(J) / (i omega) on corners at least
// `margin` cells away from the PML.
double divergence_check(const MacroField &f, const MacroProblem &p, int margin = 2);

// Largest per-column phase spread (degrees) of H inside the rectangle, over cells where
// |H| exceeds `threshold` times the maximum of |H| in the rectangle.
double phase_spread_degrees(const MacroField &f, const EpsRegion &rect,
                            double threshold = 0.1);

// int |H|^2 over cells outside the PML.
double interior_energy(const MacroField &f, const MacroProblem &p);

// int |H|^2 over cells whose centres lie in the rectangle.
double region_energy(const MacroField &f, const EpsRegion &rect);

// Mean |H| along the line y (interpolated between cell rows), for x in [x0, x1].
double line_amplitude(const MacroField &f, double y, double x0, double x1);

// Little-endian dump: magic "PHMF", u32 version, u32 nx, u32 ny, f64 dx, f64 dy,
// f64 omega, then H, Ex, Ey as interleaved (re, im) f64 pairs.
void write_field_binary(std::ostream &os, const MacroField &f, double omega);
MacroField read_field_binary(std::istream &is, double *omega = nullptr);

// Magnitude and phase maps of H side by side.
std::string field_svg(const MacroField &f, const MacroProblem &p);

}  // namespace plasmahom

#endif  // PLASMAHOM_MACROSOLVER_HPP
