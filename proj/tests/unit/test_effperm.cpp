// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "plasmahom/cellsolver.hpp"
#include "plasmahom/effperm.hpp"
#include "plasmahom/errors.hpp"
#include "plasmahom/geometry.hpp"
#include "plasmahom/materials.hpp"
#include "plasmahom/mesh.hpp"

namespace ph = plasmahom;
using ph::cplx;

namespace
{
ph::UnitCellGeometry make(ph::GeometryKind kind)
{
  ph::GeometrySpec s;
  s.kind = kind;
  return ph::build_geometry(s);
}

std::shared_ptr<const ph::Mesh> mesh_for(const ph::UnitCellGeometry &g, double h)
{
  return std::make_shared<const ph::Mesh>(ph::generate_mesh(g, h));
}

ph::EffectiveTensor fem(const ph::UnitCellGeometry &g, const ph::MaterialSpec &mat, double w,
                        double h = 0.05)
{
  return ph::compute_effective_tensor(g, mesh_for(g, h), mat, w);
}

double max_abs_diff(const Eigen::Matrix3cd &a, const Eigen::Matrix3cd &b)
{
  return (a - b).cwiseAbs().maxCoeff();
}
}  // namespace

TEST(EffectivePermittivity, PlanarSheetTrivialForm)
{
  const auto g = make(ph::GeometryKind::planar_sheet);
  const cplx eta(0.6, -0.03);
  const auto mat = ph::MaterialSpec::from_eta(eta, 2.0);
  for (const auto &t : {fem(g, mat, 2.0), ph::effective_permittivity_closed_form(mat, g, 2.0)})
  {
    EXPECT_LT(std::abs(t.matrix(0, 0) - (1.0 - eta)), 1e-12);
    EXPECT_LT(std::abs(t.matrix(1, 1) - 1.0), 1e-12);
    EXPECT_LT(std::abs(t.matrix(2, 2) - (1.0 - eta)), 1e-12);
  }
}

TEST(EffectivePermittivity, DielectricIsScaledIdentity)
{
  for (auto kind : {ph::GeometryKind::planar_sheet, ph::GeometryKind::ribbon,
                    ph::GeometryKind::tube, ph::GeometryKind::corrugated})
  {
    const auto g = make(kind);
    ph::MaterialSpec mat;
    mat.eps_bulk = 2.0;
    const Eigen::Matrix3cd expected = 2.0 * Eigen::Matrix3cd::Identity();
    EXPECT_LT(max_abs_diff(fem(g, mat, 1.5).matrix, expected), 1e-12);
    EXPECT_LT(max_abs_diff(ph::effective_permittivity_closed_form(mat, g, 1.5).matrix, expected),
              1e-12);
  }
}

TEST(EffectivePermittivity, RibbonEps33)
{
  const auto g = make(ph::GeometryKind::ribbon);
  const double w = 2.0;
  const cplx eta(0.9, -0.01);
  auto mat = ph::MaterialSpec::from_eta(eta, w);
  mat.lambda_line = {cplx(0.02, 0.05)};
  const auto t = fem(g, mat, w);
  const cplx expected = 1.0 - 0.7 * eta - 2.0 * mat.lambda_line[0] / (ph::kI * w);
  EXPECT_LT(std::abs(t.matrix(2, 2) - expected), 1e-13);
  EXPECT_EQ(t.provenance, ph::Provenance::fem);
}

TEST(EffectivePermittivity, DrudePlanarSheetNearZero)
{
  const auto g = make(ph::GeometryKind::planar_sheet);
  const double w = 2.0;
  const auto mat = ph::MaterialSpec::from_eta(ph::rescaled_eta(1.0, 20.72, w), w);
  const auto t = ph::effective_permittivity_closed_form(mat, g, w);
  EXPECT_LT(std::abs(t.matrix(0, 0).real()), 1e-3);
  EXPECT_NEAR(t.matrix(0, 0).real(), -0.00014, 5e-6);
  EXPECT_NEAR(t.matrix(0, 0).imag(), 0.0100, 5e-5);
  EXPECT_EQ(t.provenance, ph::Provenance::closed_form);
}

TEST(EffectivePermittivity, RibbonLineConductivityOnly)
{
  const auto g = make(ph::GeometryKind::ribbon);
  const double w = 1.7;
  ph::MaterialSpec mat;
  const cplx lambda(0.1, 0.4);
  mat.lambda_line = {lambda};
  ASSERT_TRUE(ph::check_divergence_free(mat, g).overall);
  const auto t = ph::effective_permittivity_closed_form(mat, g, w);
  EXPECT_LT(std::abs(t.matrix(2, 2) - (1.0 - 2.0 * lambda / (ph::kI * w))), 1e-14);
  EXPECT_LT(max_abs_diff(t.matrix, fem(g, mat, w).matrix), 1e-12);
}

TEST(DivergenceFree, Examples)
{
  const cplx sigma(0.02, 1.8);
  ph::MaterialSpec mat;
  mat.sigma_surface = {sigma};

  EXPECT_TRUE(ph::check_divergence_free(mat, make(ph::GeometryKind::planar_sheet)).overall);

  const auto ribbon = ph::check_divergence_free(mat, make(ph::GeometryKind::ribbon));
  EXPECT_FALSE(ribbon.edge_ok);
  EXPECT_TRUE(ribbon.surface_ok);
  EXPECT_FALSE(ribbon.overall);

  const auto tube = ph::check_divergence_free(mat, make(ph::GeometryKind::tube));
  EXPECT_FALSE(tube.surface_ok);
  EXPECT_FALSE(tube.overall);

  // lambda growing along the edge at the rate sigma balances the edge flux.
  mat.lambda_slope = {sigma};
  EXPECT_TRUE(ph::check_divergence_free(mat, make(ph::GeometryKind::ribbon)).overall);

  ph::MaterialSpec inclusion;
  inclusion.eps_inclusion = 3.0;
  EXPECT_FALSE(ph::check_divergence_free(inclusion, make(ph::GeometryKind::tube)).volume_ok);
}

TEST(DivergenceFree, ClosedFormNamesFailingCondition)
{
  ph::MaterialSpec mat;
  mat.sigma_surface = {cplx(0.0, 1.0)};
  try
  {
    ph::effective_permittivity_closed_form(mat, make(ph::GeometryKind::tube), 2.0);
    FAIL() << "expected a precondition error";
  }
  catch (const ph::PreconditionError &e)
  {
    EXPECT_NE(std::string(e.what()).find("surface"), std::string::npos);
  }
  try
  {
    ph::effective_permittivity_closed_form(mat, make(ph::GeometryKind::ribbon), 2.0);
    FAIL() << "expected a precondition error";
  }
  catch (const ph::PreconditionError &e)
  {
    EXPECT_NE(std::string(e.what()).find("edge"), std::string::npos);
  }
}

TEST(EffectivePermittivity, ClosedFormMatchesFemWhenCorrectorVanishes)
{
  const double w = 2.3;
  const cplx sigma = ph::kI * w * ph::rescaled_eta(1.0, 20.72, w);
  struct Case
  {
    ph::GeometryKind kind;
    ph::MaterialSpec mat;
  };
  ph::MaterialSpec planar;
  planar.sigma_surface = {sigma};
  planar.eps_bulk = {1.3, 0.05};
  ph::MaterialSpec ribbon_slope;
  ribbon_slope.sigma_surface = {sigma};
  ribbon_slope.lambda_slope = {sigma};
  ribbon_slope.lambda_line = {cplx(0.0, 0.3)};
  ph::MaterialSpec ribbon_line;
  ribbon_line.lambda_line = {cplx(0.0, 0.3)};
  for (const auto &c : {Case{ph::GeometryKind::planar_sheet, planar},
                        Case{ph::GeometryKind::ribbon, ribbon_slope},
                        Case{ph::GeometryKind::ribbon, ribbon_line}})
  {
    const auto g = make(c.kind);
    ASSERT_TRUE(ph::check_divergence_free(c.mat, g).overall);
    const auto a = fem(g, c.mat, w).matrix;
    const auto b = ph::effective_permittivity_closed_form(c.mat, g, w).matrix;
    for (int i = 0; i < 3; ++i)
    {
      for (int j = 0; j < 3; ++j)
      {
        EXPECT_LE(std::abs(a(i, j) - b(i, j)), 1e-6 * std::max(std::abs(b(i, j)), 1.0));
      }
    }
  }
}

TEST(EffectivePermittivity, RatioScaling)
{
  const auto g = make(ph::GeometryKind::tube);
  auto mesh = mesh_for(g, 0.05);
  const double w = 2.0;
  const cplx eta(0.8, -0.02);
  const cplx c(1.7, 0.4);
  const auto a = ph::compute_effective_tensor(g, mesh, ph::MaterialSpec::from_eta(eta, w), w);
  const auto b =
      ph::compute_effective_tensor(g, mesh, ph::MaterialSpec::from_eta(c * eta, w, c), w);
  EXPECT_LT(max_abs_diff(b.matrix, c * a.matrix), 1e-9 * a.matrix.cwiseAbs().maxCoeff());
}

TEST(EffectivePermittivity, RealDielectricIsSymmetricPositiveDefinite)
{
  const auto g = make(ph::GeometryKind::tube);
  ph::MaterialSpec mat;
  mat.eps_bulk = 1.0;
  mat.eps_inclusion = 4.0;
  const auto t = fem(g, mat, 1.0, 0.025);
  EXPECT_LT(t.matrix.imag().cwiseAbs().maxCoeff(), 1e-14);
  const Eigen::Matrix3d re = t.matrix.real();
  EXPECT_LT((re - re.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(re);
  EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
  // Two-dimensional Maxwell-Garnett value for circular inclusions at fill fraction f.
  const double f = std::numbers::pi * 0.0625;
  const double beta = (4.0 - 1.0) / (4.0 + 1.0);
  const double mg = (1.0 + f * beta) / (1.0 - f * beta);
  EXPECT_NEAR(re(0, 0), mg, 0.01 * mg);
  EXPECT_GE(re(0, 0), mg - 1e-3);
}

TEST(EffectivePermittivity, Errors)
{
  const auto g = make(ph::GeometryKind::planar_sheet);
  auto mesh = mesh_for(g, 0.1);
  const auto mat = ph::MaterialSpec::from_eta(0.5, 2.0);
  EXPECT_THROW(ph::effective_permittivity_closed_form(mat, g, 0.0), ph::DomainError);
  EXPECT_THROW(ph::compute_effective_tensor(g, mesh, mat, 0.0), ph::DomainError);
  auto other = mesh_for(g, 0.05);
  auto fields = ph::solve_correctors(other, mat, 2.0);
  EXPECT_THROW(ph::effective_permittivity_fem(*mesh, fields, g, mat, 2.0), ph::ContractError);
  EXPECT_THROW(ph::effective_permittivity_fem(*other, std::span(fields).first(1), g, mat, 2.0),
               ph::ContractError);
}

TEST(EffectivePermittivity, ReducedRouteMatchesFem)
{
  const auto g = make(ph::GeometryKind::ribbon);
  auto mesh = mesh_for(g, 0.025);
  ph::ReducedCellOperator op(mesh, 1.0, std::nullopt, 1);
  for (double w : {1.0, 2.25, 3.5})
  {
    auto mat = ph::MaterialSpec::from_eta(ph::rescaled_eta(1.0, 20.72, w), w);
    mat.lambda_line = {cplx(0.0, 0.1)};
    const auto a = ph::compute_effective_tensor(g, mesh, mat, w).matrix;
    const auto b = ph::effective_permittivity_reduced(op, g, mat, w).matrix;
    EXPECT_LT(max_abs_diff(a, b), 1e-9 * a.cwiseAbs().maxCoeff());
  }
}

TEST(TensorStructure, PrototypicalPatterns)
{
  const double w = 2.0;
  const auto mat = ph::MaterialSpec::from_eta(ph::rescaled_eta(1.0, 20.72, w), w);
  for (auto kind :
       {ph::GeometryKind::planar_sheet, ph::GeometryKind::ribbon, ph::GeometryKind::tube})
  {
    const auto g = make(kind);
    const auto t = fem(g, mat, w, 0.0125);
    const auto check = ph::tensor_structure_check(t, kind);
    EXPECT_TRUE(check.pass) << ph::to_string(kind) << ": "
                            << (check.diagnostics.empty() ? "" : check.diagnostics.front());
    EXPECT_LE(check.offdiag_ratio, 1e-8);
  }
  const auto planar = fem(make(ph::GeometryKind::planar_sheet), mat, w);
  EXPECT_LT(std::abs(planar.matrix(1, 1) - 1.0), 1e-13);
}

TEST(TensorStructure, DetectsBrokenPattern)
{
  const auto g = make(ph::GeometryKind::planar_sheet);
  auto t = ph::effective_permittivity_closed_form(ph::MaterialSpec::from_eta(0.5, 2.0), g, 2.0);
  t.matrix(0, 1) = 0.1;
  EXPECT_FALSE(ph::tensor_structure_check(t, ph::GeometryKind::planar_sheet).pass);
  t.matrix(0, 1) = 0.0;
  EXPECT_FALSE(ph::tensor_structure_check(t, ph::GeometryKind::tube).pass);
}
