// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_ANALYSIS_HPP
#define PLASMAHOM_ANALYSIS_HPP

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "plasmahom/cellsolver.hpp"
#include "plasmahom/effperm.hpp"
#include "plasmahom/geometry.hpp"
#include "plasmahom/lorentzian.hpp"
#include "plasmahom/materials.hpp"
#include "plasmahom/mesh.hpp"

namespace plasmahom
{

enum class Entry
{
  eps11 = 0,
  eps22 = 1,
  eps33 = 2
};

std::string to_string(Entry e);
Entry entry_from_string(const std::string &name);

struct SweepRecord
{
  double omega_tilde = 0.0;
  std::array<cplx, 3> eps{};  // diagonal entries
  double offdiag = 0.0;       // max |eps_ij|, i != j
  cplx eta{0.0, 0.0};
  std::string mesh_id;
  double seconds = 0.0;
  bool ok = true;
  std::string status = "ok";

  cplx entry(Entry e) const { return eps[static_cast<int>(e)]; }
};

using MaterialBuilder = std::function<MaterialSpec(double omega_tilde)>;

// Drude sheet conductivity on every interface curve, unit bulk permittivity.
MaterialBuilder drude_material(double fermi_energy_tilde, double spacing_tilde,
                               double prefactor = kDrudePrefactor,
                               double damping = kDrudeDamping, cplx eps_bulk = 1.0);

enum class SweepMethod
{
  // Interface-reduced operator when the bulk permittivity is frequency independent and
  // lambda has no y3 slope.
  automatic,
  full,
  reduced,
  // Closed form (requires a vanishing corrector).
  closed_form
};

struct SweepOptions
{
  SweepMethod method = SweepMethod::automatic;
  SolveOptions solve;
  int parallelism = 1;
};

// Uniform grid of n points on [a, b].
std::vector<double> linear_grid(double a, double b, int n);

// One record per frequency, in grid order. Failed points carry ok = false and a status.
std::vector<SweepRecord> frequency_sweep(const UnitCellGeometry &geom,
                                         std::shared_ptr<const Mesh> mesh,
                                         const MaterialBuilder &material,
                                         const std::vector<double> &grid,
                                         const SweepOptions &options = {});

struct SweepSeries
{
  std::vector<double> omega;
  std::vector<cplx> values;
};

// Successful points only.
SweepSeries series(const std::vector<SweepRecord> &sweep, Entry entry);

LorentzianFit fit_lorentzian(const std::vector<SweepRecord> &sweep, Entry entry,
                             const FitOptions &options = {});

std::vector<EnzCrossing> find_enz_frequency(const std::vector<SweepRecord> &sweep,
                                            Entry entry);
std::vector<EnzCrossing> find_enz_frequency(const std::vector<SweepRecord> &sweep,
                                            Entry entry, const LorentzianFit &fit);

struct KramersKronigResult
{
  double residual = 0.0;
  bool reliable = true;
  std::string note;
  LorentzianFit fit;
};

// ||Re eps - Re L|| / ||Re eps - background||, where Re L - background is the Hilbert
// transform of Im L for the fitted Lorentzian L. Unreliable when the sweep does not
// cover the pole with margin: span < omega_R or omega_R +- 5 width outside the range.
KramersKronigResult kramers_kronig_residual(const std::vector<SweepRecord> &sweep,
                                            Entry entry);
KramersKronigResult kramers_kronig_residual(const std::vector<SweepRecord> &sweep,
                                            Entry entry, const LorentzianFit &fit);

// Comment lines (each prefixed with "# ") precede the header.
std::string sweep_csv(const std::vector<SweepRecord> &sweep,
                      const std::vector<std::string> &comments = {});

// Re and Im of one entry with negative-Re bands shaded.
std::string sweep_svg(const std::vector<SweepRecord> &sweep, Entry entry,
                      const std::string &title);

}  // namespace plasmahom

#endif  // PLASMAHOM_ANALYSIS_HPP
