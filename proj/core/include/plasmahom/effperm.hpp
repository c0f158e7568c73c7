// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_EFFPERM_HPP
#define PLASMAHOM_EFFPERM_HPP

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "plasmahom/cellsolver.hpp"
#include "plasmahom/geometry.hpp"
#include "plasmahom/materials.hpp"
#include "plasmahom/mesh.hpp"

namespace plasmahom
{

enum class Provenance
{
  fem,
  closed_form,
  factorized
};

std::string to_string(Provenance p);

struct EffectiveTensor
{
  Eigen::Matrix3cd matrix = Eigen::Matrix3cd::Zero();
  double omega_tilde = 0.0;
  Provenance provenance = Provenance::fem;
  GeometryKind kind = GeometryKind::planar_sheet;
  // Context kept for structure checks.
  cplx bulk_average{0.0, 0.0};
  double surface_measure = 0.0;
  cplx eta{0.0, 0.0};  // sigma / (i omega) of the first interface curve
  cplx line_term{0.0, 0.0};  // (1/(i omega)) * sum of the y3-averaged lambda over edges
  std::vector<std::string> notes;
};

// Volume average of eps with the exact inclusion measure.
cplx bulk_average(const UnitCellGeometry &geom, const MaterialSpec &mat);

// Entries (i, j) for i, j in {1, 2} from the correctors by exact volume quadrature and the
// midpoint rule on interface segments; row and column 3 from the closed form.
EffectiveTensor effective_permittivity_fem(const Mesh &mesh,
                                           std::span<const CorrectorField> correctors,
                                           const UnitCellGeometry &geom,
                                           const MaterialSpec &mat, double omega_tilde);

struct DivergenceFreeReport
{
  bool volume_ok = true;
  bool surface_ok = true;
  bool edge_ok = true;
  bool overall = true;
  std::vector<std::string> failures;
};

DivergenceFreeReport check_divergence_free(const MaterialSpec &mat,
                                           const UnitCellGeometry &geom);

// Geometric average valid when the corrector vanishes. Throws PreconditionError naming
// the failing condition otherwise.
EffectiveTensor effective_permittivity_closed_form(const MaterialSpec &mat,
                                                   const UnitCellGeometry &geom,
                                                   double omega_tilde);

// Same entries as effective_permittivity_fem through the interface-reduced operator.
// ContractError when lambda has a y3 slope.
EffectiveTensor effective_permittivity_reduced(const ReducedCellOperator &op,
                                               const UnitCellGeometry &geom,
                                               const MaterialSpec &mat, double omega_tilde);

// Mesh + solve + average in one call.
EffectiveTensor compute_effective_tensor(const UnitCellGeometry &geom,
                                         std::shared_ptr<const Mesh> mesh,
                                         const MaterialSpec &mat, double omega_tilde,
                                         const SolveOptions &options = {});

struct StructureCheck
{
  bool pass = true;
  double offdiag_ratio = 0.0;
  std::vector<std::string> diagnostics;
};

// Diagonal pattern of the planar-sheet (S), ribbon (R) and tube (T) tensors.
StructureCheck tensor_structure_check(const EffectiveTensor &t, GeometryKind kind,
                                      double offdiag_tol = 1e-8, double tube_tol = 5e-3);

}  // namespace plasmahom

#endif  // PLASMAHOM_EFFPERM_HPP
