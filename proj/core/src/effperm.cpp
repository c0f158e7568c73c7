// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include "plasmahom/effperm.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "plasmahom/errors.hpp"

namespace plasmahom
{

namespace
{

double inclusion_area(const UnitCellGeometry &geom)
{
  double area = 0.0;
  for (const auto &c : geom.interfaces)
  {
    if (c.kind() == CurveKind::circle)
    {
      area += std::numbers::pi * c.radius() * c.radius();
    }
  }
  return area;
}

// (1/(i omega)) sum_e int_0^1 lambda_e(y3) dy3.
cplx line_term(const UnitCellGeometry &geom, const MaterialSpec &mat, double omega)
{
  cplx sum = 0.0;
  for (std::size_t e = 0; e < geom.edges.size(); ++e)
  {
    sum += mat.lambda_for(e) + 0.5 * mat.lambda_slope_for(e);
  }
  return surface_prefactor(sum, omega);
}

// Rows/columns involving y3 (identical for both routes).
void fill_invariant_axis(EffectiveTensor &t, const UnitCellGeometry &geom,
                         const MaterialSpec &mat, double omega)
{
  cplx surface = 0.0;
  for (std::size_t c = 0; c < geom.interfaces.size(); ++c)
  {
    surface += surface_prefactor(mat.sigma_for(c), omega) * geom.interfaces[c].length();
  }
  t.line_term = line_term(geom, mat, omega);
  t.matrix(2, 2) = t.bulk_average - surface - t.line_term;
  for (int k = 0; k < 2; ++k)
  {
    t.matrix(2, k) = 0.0;
    t.matrix(k, 2) = 0.0;
  }
}

void fill_context(EffectiveTensor &t, const UnitCellGeometry &geom, const MaterialSpec &mat,
                  double omega)
{
  t.omega_tilde = omega;
  t.kind = geom.spec.kind;
  t.bulk_average = bulk_average(geom, mat);
  t.surface_measure = geom.interface_measure();
  t.eta = geom.interfaces.empty() ? cplx(0.0) : surface_prefactor(mat.sigma_for(0), omega);
}

}  // namespace

std::string to_string(Provenance p)
{
  switch (p)
  {
    case Provenance::fem:
      return "fem";
    case Provenance::closed_form:
      return "closed_form";
    case Provenance::factorized:
      return "factorized";
  }
  return "unknown";
}

cplx bulk_average(const UnitCellGeometry &geom, const MaterialSpec &mat)
{
  const double inside = inclusion_area(geom);
  return mat.eps_bulk * (1.0 - inside) + mat.eps_inside() * inside;
}

EffectiveTensor effective_permittivity_fem(const Mesh &mesh,
                                           std::span<const CorrectorField> correctors,
                                           const UnitCellGeometry &geom,
                                           const MaterialSpec &mat, double omega_tilde)
{
  if (omega_tilde == 0.0)
  {
    throw DomainError("effective permittivity: omega must be nonzero");
  }
  if (correctors.size() != 2)
  {
    throw ContractError("effective_permittivity_fem needs the correctors for j = 1, 2");
  }
  std::array<const CorrectorField *, 2> chi{};
  for (const auto &c : correctors)
  {
    if (c.direction < 1 || c.direction > 2 || c.mesh.get() != &mesh ||
        c.nodal_values.size() != static_cast<Eigen::Index>(mesh.vertices.size()))
    {
      throw ContractError("corrector does not belong to this mesh or direction");
    }
    chi[c.direction - 1] = &c;
  }
  if (!chi[0] || !chi[1])
  {
    throw ContractError("correctors for both directions 1 and 2 are required");
  }

  EffectiveTensor t;
  t.provenance = Provenance::fem;
  fill_context(t, geom, mat, omega_tilde);

  const auto grad1 = corrector_gradient(*chi[0]);
  const auto grad2 = corrector_gradient(*chi[1]);
  Eigen::Matrix2cd block = Eigen::Matrix2cd::Zero();
  for (std::size_t k = 0; k < mesh.triangles.size(); ++k)
  {
    const cplx eps = (k < mesh.regions.size() && mesh.regions[k] == Region::inclusion)
                         ? mat.eps_inside()
                         : mat.eps_bulk;
    const double area = mesh.triangle_area(k);
    for (int i = 0; i < 2; ++i)
    {
      block(i, 0) += eps * area * ((i == 0 ? 1.0 : 0.0) + grad1[k][i]);
      block(i, 1) += eps * area * ((i == 1 ? 1.0 : 0.0) + grad2[k][i]);
    }
  }
  for (const auto &seg : mesh.interface_segments)
  {
    const cplx eta = surface_prefactor(mat.sigma_for(seg.curve), omega_tilde);
    if (eta == 0.0)
    {
      continue;
    }
    const Vec2 d = mesh.vertices[seg.v1] - mesh.vertices[seg.v0];
    const double len = d.norm();
    const Vec2 tangent = d / len;
    for (int j = 0; j < 2; ++j)
    {
      // len * t.(e_j + grad chi_j) at the segment midpoint.
      const cplx jump =
          chi[j]->nodal_values[seg.v1] - chi[j]->nodal_values[seg.v0];
      const cplx tangential = tangent[j] * len + jump;
      for (int i = 0; i < 2; ++i)
      {
        block(i, j) -= eta * tangent[i] * tangential;
      }
    }
  }
  t.matrix.topLeftCorner<2, 2>() = block;
  fill_invariant_axis(t, geom, mat, omega_tilde);
  return t;
}

EffectiveTensor effective_permittivity_reduced(const ReducedCellOperator &op,
                                               const UnitCellGeometry &geom,
                                               const MaterialSpec &mat, double omega_tilde)
{
  if (omega_tilde == 0.0)
  {
    throw DomainError("effective permittivity: omega must be nonzero");
  }
  for (std::size_t e = 0; e < geom.edges.size(); ++e)
  {
    if (mat.lambda_slope_for(e) != 0.0)
    {
      throw ContractError("the reduced operator does not support a y3-dependent lambda");
    }
  }
  std::vector<cplx> eta(geom.interfaces.size());
  for (std::size_t c = 0; c < eta.size(); ++c)
  {
    eta[c] = surface_prefactor(mat.sigma_for(c), omega_tilde);
  }
  EffectiveTensor t;
  t.provenance = Provenance::fem;
  fill_context(t, geom, mat, omega_tilde);
  t.matrix.topLeftCorner<2, 2>() = op.effective_block(eta);
  fill_invariant_axis(t, geom, mat, omega_tilde);
  return t;
}

DivergenceFreeReport check_divergence_free(const MaterialSpec &mat,
                                           const UnitCellGeometry &geom)
{
  DivergenceFreeReport r;
  if (geom.has_inclusions() && mat.eps_inside() != mat.eps_bulk)
  {
    r.volume_ok = false;
    r.failures.push_back("volume: eps jumps across a closed interface");
  }
  for (std::size_t c = 0; c < geom.interfaces.size(); ++c)
  {
    if (mat.sigma_for(c) != 0.0 && !geom.interfaces[c].is_straight())
    {
      r.surface_ok = false;
      r.failures.push_back("surface: sigma P_t has nonzero tangential divergence on curved "
                           "interface " + std::to_string(c));
    }
  }
  for (std::size_t e = 0; e < geom.edges.size(); ++e)
  {
    // n.sigma n = sigma for a scalar tangential conductivity; div(lambda) along the
    // y3-directed edge is its slope.
    const cplx sigma = mat.sigma_for(geom.edges[e].curve);
    const cplx slope = mat.lambda_slope_for(e);
    const double scale = std::max({std::abs(sigma), std::abs(slope), 1e-300});
    if (std::abs(sigma - slope) > 1e-12 * scale)
    {
      r.edge_ok = false;
      r.failures.push_back("edge: n.sigma != div(lambda) at sheet edge " +
                           std::to_string(e));
    }
  }
  r.overall = r.volume_ok && r.surface_ok && r.edge_ok;
  return r;
}

EffectiveTensor effective_permittivity_closed_form(const MaterialSpec &mat,
                                                   const UnitCellGeometry &geom,
                                                   double omega_tilde)
{
  if (omega_tilde == 0.0)
  {
    throw DomainError("effective permittivity: omega must be nonzero");
  }
  const auto report = check_divergence_free(mat, geom);
  if (!report.overall)
  {
    std::ostringstream msg;
    msg << "closed form requires a vanishing corrector; failing conditions:";
    for (const auto &f : report.failures)
    {
      msg << " [" << f << "]";
    }
    throw PreconditionError(msg.str());
  }
  EffectiveTensor t;
  t.provenance = Provenance::closed_form;
  fill_context(t, geom, mat, omega_tilde);
  Eigen::Matrix2cd block = t.bulk_average * Eigen::Matrix2cd::Identity();
  for (std::size_t c = 0; c < geom.interfaces.size(); ++c)
  {
    const cplx eta = surface_prefactor(mat.sigma_for(c), omega_tilde);
    block -= eta * geom.interfaces[c].tangent_moment().cast<cplx>();
  }
  t.matrix.topLeftCorner<2, 2>() = block;
  fill_invariant_axis(t, geom, mat, omega_tilde);
  return t;
}

EffectiveTensor compute_effective_tensor(const UnitCellGeometry &geom,
                                         std::shared_ptr<const Mesh> mesh,
                                         const MaterialSpec &mat, double omega_tilde,
                                         const SolveOptions &options)
{
  const auto fields = solve_correctors(mesh, mat, omega_tilde, options);
  return effective_permittivity_fem(*mesh, fields, geom, mat, omega_tilde);
}

StructureCheck tensor_structure_check(const EffectiveTensor &t, GeometryKind kind,
                                      double offdiag_tol, double tube_tol)
{
  StructureCheck check;
  const auto &m = t.matrix;
  double diag = 0.0, off = 0.0;
  for (int i = 0; i < 3; ++i)
  {
    diag = std::max(diag, std::abs(m(i, i)));
    for (int j = 0; j < 3; ++j)
    {
      if (i != j)
      {
        off = std::max(off, std::abs(m(i, j)));
      }
    }
  }
  check.offdiag_ratio = diag > 0.0 ? off / diag : off;
  auto fail = [&check](const std::string &msg) {
    check.pass = false;
    check.diagnostics.push_back(msg);
  };
  if (kind != GeometryKind::corrugated && check.offdiag_ratio > offdiag_tol)
  {
    std::ostringstream msg;
    msg << "off-diagonal ratio " << check.offdiag_ratio << " exceeds " << offdiag_tol;
    fail(msg.str());
  }
  const double scale = std::max(diag, 1.0);
  const cplx eps33 = t.bulk_average - t.eta * t.surface_measure - t.line_term;
  if (std::abs(m(2, 2) - eps33) > 1e-10 * scale)
  {
    fail("eps33 differs from the measure-consistent closed form");
  }
  switch (kind)
  {
    case GeometryKind::planar_sheet:
      if (std::abs(m(1, 1) - t.bulk_average) > offdiag_tol * scale)
      {
        fail("pattern S: eps22 must equal the bulk average");
      }
      if (std::abs(m(0, 0) - m(2, 2)) > offdiag_tol * scale)
      {
        fail("pattern S: eps11 must equal eps33");
      }
      break;
    case GeometryKind::ribbon:
    {
      if (std::abs(m(1, 1) - t.bulk_average) > offdiag_tol * scale)
      {
        fail("pattern R: eps22 must equal the bulk average");
      }
      const cplx full_sheet = t.bulk_average - t.eta;
      if (std::abs(m(2, 2) - full_sheet) > 1e-10 * scale)
      {
        std::ostringstream msg;
        msg << "note: eps33 of the ribbon uses the ribbon measure " << t.surface_measure
            << " and differs from the full-sheet value 1 - eta";
        check.diagnostics.push_back(msg.str());
      }
      break;
    }
    case GeometryKind::tube:
    {
      const double rel = std::abs(m(0, 0) - m(1, 1)) / std::max(std::abs(m(0, 0)), 1e-300);
      if (rel > tube_tol)
      {
        std::ostringstream msg;
        msg << "pattern T: |eps11 - eps22| / |eps11| = " << rel << " exceeds " << tube_tol;
        fail(msg.str());
      }
      break;
    }
    case GeometryKind::corrugated:
      check.diagnostics.push_back("corrugated cells have no prescribed pattern");
      break;
  }
  return check;
}

}  // namespace plasmahom
