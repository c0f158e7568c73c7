// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_CELLSOLVER_HPP
#define PLASMAHOM_CELLSOLVER_HPP

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "plasmahom/materials.hpp"
#include "plasmahom/mesh.hpp"
#include "plasmahom/types.hpp"

namespace plasmahom
{

using SparseMatrixC = Eigen::SparseMatrix<cplx>;

//
// Discrete cell problem for one direction j: find the periodic, zero-mean P1 field chi
// with
//
//   int_Y eps grad(chi).grad(psi) - eta int_Sigma d_t chi d_t psi
//     = -int_Y eps e_j.grad(psi) + eta int_Sigma (t.e_j) d_t psi
//       - sum_edges kappa (n.e_j) psi,   eta = sigma/(i omega), kappa = lambda_slope/(i omega)
//
// for all periodic P1 psi. Unknowns are periodic vertex classes plus one Lagrange
// multiplier for the mean (last row/column).
//
struct CellSystem
{
  SparseMatrixC matrix;
  Eigen::VectorXcd rhs;
  int direction = 1;
  bool has_mean_constraint = true;
  std::shared_ptr<const Mesh> mesh;
  PeriodicClasses classes;

  int unknowns() const { return static_cast<int>(rhs.size()); }
};

struct AssemblyOptions
{
  // Leave out the mean-value row (the resulting system is singular; only useful to
  // exercise the solver's contract check).
  bool mean_constraint = true;
};

// j in {1, 2}; j = 3 raises UnsupportedDirectionError (closed form in effperm).
CellSystem assemble(std::shared_ptr<const Mesh> mesh, const MaterialSpec &mat,
                    double omega_tilde, int direction, const AssemblyOptions &options = {});

enum class SolverMethod
{
  automatic,
  direct,
  iterative
};

struct SolveOptions
{
  double tol = 1e-10;
  SolverMethod method = SolverMethod::automatic;
  int max_iterations = 20000;
  // automatic switches to the iterative solver above this many unknowns.
  int direct_limit = 400000;
};

struct CorrectorField
{
  int direction = 1;
  Eigen::VectorXcd nodal_values;  // one value per mesh vertex
  std::shared_ptr<const Mesh> mesh;
  double relative_residual = 0.0;
  cplx multiplier{0.0, 0.0};
};

CorrectorField solve(const CellSystem &system, const SolveOptions &options = {});

// Solves the correctors for j = 1 and j = 2 with one factorization.
std::vector<CorrectorField> solve_correctors(std::shared_ptr<const Mesh> mesh,
                                             const MaterialSpec &mat, double omega_tilde,
                                             const SolveOptions &options = {});

// Piecewise-constant gradient per triangle.
std::vector<Eigen::Vector2cd> corrector_gradient(const CorrectorField &field);

// int_Y eps |grad chi|^2.
double discrete_energy(const CorrectorField &field, const MaterialSpec &mat);

// Relative residual ||A x - b|| / ||b|| of a field against a system (absolute when b = 0).
double weak_residual(const CellSystem &system, const CorrectorField &field);

// Load vector int_Y f phi_a over periodic classes (plus a zero multiplier entry), for
// manufactured right-hand sides.
Eigen::VectorXcd load_vector(const Mesh &mesh, const PeriodicClasses &classes,
                             const std::function<cplx(const Vec2 &)> &f);

// || chi_h - exact ||_{L2(Y)} with a degree-5 quadrature.
double l2_difference(const CorrectorField &field,
                     const std::function<cplx(const Vec2 &)> &exact);

// int_Y field.
cplx field_mean(const CorrectorField &field);

//
// Interface reduction of the cell problem for frequency sweeps. The operator is
// K - sum_c eta_c S_c with K frequency independent and S_c supported on the vertices of
// interface curve c. K is factorized once; each frequency then costs one dense solve of
// the size of the interface. Results equal the full solve up to round-off.
//
class ReducedCellOperator
{
public:
  ReducedCellOperator(std::shared_ptr<const Mesh> mesh, cplx eps_bulk,
                      std::optional<cplx> eps_inclusion, int curve_count);

  // Upper-left 2x2 block of the effective tensor for the given per-curve eta values.
  Eigen::Matrix2cd effective_block(std::span<const cplx> eta) const;

  // Nodal corrector values for j = 1, 2 (zero mean).
  std::vector<CorrectorField> correctors(std::span<const cplx> eta) const;

  int interface_size() const { return static_cast<int>(gamma_.size()); }
  int unknowns() const { return unknowns_; }
  const std::shared_ptr<const Mesh> &mesh() const { return mesh_; }

private:
  struct Solution;
  struct Factor;
  Solution solve_interface(std::span<const cplx> eta) const;

  std::shared_ptr<const Mesh> mesh_;
  PeriodicClasses classes_;
  int pinned_ = 0;
  int unknowns_ = 0;
  std::vector<int> reduced_of_class_;  // -1 for the pinned class
  std::vector<int> gamma_;             // reduced indices of interface classes
  cplx volume_total_{0.0, 0.0};        // sum_T eps |T|
  Eigen::Matrix2cd volume_block_;      // eps_total I - f0_i . u0_j
  std::array<Eigen::VectorXcd, 2> u0_;     // K^{-1} f0_j (reduced numbering)
  std::array<Eigen::VectorXcd, 2> u0_gamma_;
  Eigen::MatrixXcd green_;                 // (K^{-1}) restricted to gamma x gamma
  std::vector<Eigen::MatrixXd> stiffness_;  // S_c on gamma
  std::vector<std::array<Eigen::VectorXd, 2>> tangent_load_;  // f1_{c,j} on gamma
  std::vector<Eigen::Matrix2d> tangent_moment_;               // sum_seg t t^T L
  std::shared_ptr<const Factor> factor_;
};

}  // namespace plasmahom

#endif  // PLASMAHOM_CELLSOLVER_HPP
