// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include "plasmahom/cellsolver.hpp"

#include <array>
#include <cmath>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <Eigen/LU>

#include "plasmahom/errors.hpp"

namespace plasmahom
{

namespace
{

struct TriangleGeometry
{
  double area;
  std::array<Vec2, 3> grad;  // gradients of the barycentric basis functions
};

TriangleGeometry triangle_geometry(const Mesh &mesh, std::size_t t)
{
  const auto &tri = mesh.triangles[t];
  const Vec2 &x0 = mesh.vertices[tri[0]];
  const Vec2 &x1 = mesh.vertices[tri[1]];
  const Vec2 &x2 = mesh.vertices[tri[2]];
  const double twice = (x1.x() - x0.x()) * (x2.y() - x0.y()) -
                       (x1.y() - x0.y()) * (x2.x() - x0.x());
  TriangleGeometry g;
  g.area = 0.5 * twice;
  g.grad[0] = Vec2(x1.y() - x2.y(), x2.x() - x1.x()) / twice;
  g.grad[1] = Vec2(x2.y() - x0.y(), x0.x() - x2.x()) / twice;
  g.grad[2] = Vec2(x0.y() - x1.y(), x1.x() - x0.x()) / twice;
  return g;
}

cplx region_eps(const Mesh &mesh, const MaterialSpec &mat, std::size_t t)
{
  if (t < mesh.regions.size() && mesh.regions[t] == Region::inclusion)
  {
    return mat.eps_inside();
  }
  return mat.eps_bulk;
}

// Degree-5 Dunavant rule on the reference triangle: barycentric points and weights
// (weights sum to 1).
struct QuadPoint
{
  double l0, l1, l2, w;
};

constexpr double a1 = 0.059715871789770, b1 = 0.470142064105115;
constexpr double a2 = 0.797426985353087, b2 = 0.101286507323456;
constexpr double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
constexpr std::array<QuadPoint, 7> kQuad{{{1.0 / 3, 1.0 / 3, 1.0 / 3, w0},
                                          {a1, b1, b1, w1},
                                          {b1, a1, b1, w1},
                                          {b1, b1, a1, w1},
                                          {a2, b2, b2, w2},
                                          {b2, a2, b2, w2},
                                          {b2, b2, a2, w2}}};

void check_direction(int direction)
{
  if (direction == 3)
  {
    throw UnsupportedDirectionError(
        "direction 3 is invariant (chi_3 = 0); use the closed-form (3,3) entry");
  }
  if (direction != 1 && direction != 2)
  {
    throw UnsupportedDirectionError("direction must be 1 or 2");
  }
}

SparseMatrixC assemble_matrix(const Mesh &mesh, const PeriodicClasses &classes,
                              const MaterialSpec &mat, double omega_tilde,
                              bool mean_constraint)
{
  const int n = classes.count + (mean_constraint ? 1 : 0);
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(mesh.triangles.size() * 15 + mesh.interface_segments.size() * 4);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const auto g = triangle_geometry(mesh, t);
    const cplx eps = region_eps(mesh, mat, t);
    const auto &tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a)
    {
      const int ia = classes.of_vertex[tri[a]];
      for (int b = 0; b < 3; ++b)
      {
        const int ib = classes.of_vertex[tri[b]];
        triplets.emplace_back(ia, ib, eps * g.area * g.grad[a].dot(g.grad[b]));
      }
      if (mean_constraint)
      {
        triplets.emplace_back(ia, classes.count, g.area / 3.0);
        triplets.emplace_back(classes.count, ia, g.area / 3.0);
      }
    }
  }
  for (const auto &seg : mesh.interface_segments)
  {
    const cplx eta = surface_prefactor(mat.sigma_for(seg.curve), omega_tilde);
    if (eta == 0.0)
    {
      continue;
    }
    const double len = (mesh.vertices[seg.v1] - mesh.vertices[seg.v0]).norm();
    const int a = classes.of_vertex[seg.v0];
    const int b = classes.of_vertex[seg.v1];
    const cplx k = eta / len;
    triplets.emplace_back(a, a, -k);
    triplets.emplace_back(b, b, -k);
    triplets.emplace_back(a, b, k);
    triplets.emplace_back(b, a, k);
  }
  SparseMatrixC matrix(n, n);
  matrix.setFromTriplets(triplets.begin(), triplets.end());
  matrix.makeCompressed();
  return matrix;
}

// Unit vector along the single interface segment ending at a sheet-edge vertex.
Vec2 edge_outward(const Mesh &mesh, int vertex)
{
  for (const auto &seg : mesh.interface_segments)
  {
    if (seg.v0 == vertex || seg.v1 == vertex)
    {
      const int other = seg.v0 == vertex ? seg.v1 : seg.v0;
      return (mesh.vertices[vertex] - mesh.vertices[other]).normalized();
    }
  }
  throw ContractError("sheet edge vertex " + std::to_string(vertex) +
                      " has no interface segment");
}

Eigen::VectorXcd assemble_rhs(const Mesh &mesh, const PeriodicClasses &classes,
                              const MaterialSpec &mat, double omega_tilde, int direction,
                              bool mean_constraint)
{
  const int j = direction - 1;
  Eigen::VectorXcd rhs =
      Eigen::VectorXcd::Zero(classes.count + (mean_constraint ? 1 : 0));
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const auto g = triangle_geometry(mesh, t);
    const cplx eps = region_eps(mesh, mat, t);
    const auto &tri = mesh.triangles[t];
    for (int a = 0; a < 3; ++a)
    {
      rhs[classes.of_vertex[tri[a]]] -= eps * g.area * g.grad[a][j];
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
    const double tj = d[j] / d.norm();
    rhs[classes.of_vertex[seg.v0]] -= eta * tj;
    rhs[classes.of_vertex[seg.v1]] += eta * tj;
  }
  // Sheet edges: -(1/(i omega)) d(lambda)/dy3 (n.e_j), n the outward in-sheet tangent.
  for (const auto &ev : mesh.edge_vertices)
  {
    const cplx kappa = surface_prefactor(mat.lambda_slope_for(ev.edge), omega_tilde);
    if (kappa == 0.0)
    {
      continue;
    }
    const auto n = edge_outward(mesh, ev.vertex);
    rhs[classes.of_vertex[ev.vertex]] -= kappa * n[j];
  }
  return rhs;
}

double relative_residual(const SparseMatrixC &a, const Eigen::VectorXcd &x,
                         const Eigen::VectorXcd &b)
{
  const double r = (a * x - b).norm();
  const double nb = b.norm();
  return nb > 0.0 ? r / nb : r;
}

// Direct or iterative solution of A x = b for several right-hand sides.
class LinearSolver
{
public:
  LinearSolver(const SparseMatrixC &matrix, const SolveOptions &options)
    : matrix_(matrix), options_(options)
  {
    if (!(options.tol > 0.0 && options.tol <= 1e-6))
    {
      throw InvalidParameterError("solver tolerance must lie in (0, 1e-6]");
    }
    direct_ = options.method == SolverMethod::direct ||
              (options.method == SolverMethod::automatic &&
               matrix.rows() <= options.direct_limit);
    if (direct_)
    {
      lu_.analyzePattern(matrix_);
      lu_.factorize(matrix_);
      if (lu_.info() != Eigen::Success)
      {
        throw SolverError("sparse LU factorization failed: " + lu_.lastErrorMessage());
      }
    }
    else
    {
      // Constraint row m = last row. The block A has constant null vectors on both sides,
      // so the saddle system is solved as A x = b - mu m with class 0 pinned, followed by
      // a shift to the prescribed mean.
      const Eigen::Index n = matrix_.rows() - 1;
      constraint_ = Eigen::VectorXcd::Zero(n);
      std::vector<Eigen::Triplet<cplx>> entries;
      for (int k = 0; k < matrix_.outerSize(); ++k)
      {
        for (SparseMatrixC::InnerIterator it(matrix_, k); it; ++it)
        {
          if (it.row() == n && it.col() < n)
          {
            constraint_[it.col()] = it.value();
          }
          else if (it.row() > 0 && it.col() > 0 && it.row() < n && it.col() < n)
          {
            entries.emplace_back(it.row() - 1, it.col() - 1, it.value());
          }
        }
      }
      pinned_.resize(n - 1, n - 1);
      pinned_.setFromTriplets(entries.begin(), entries.end());
      bicg_.setTolerance(0.01 * options.tol);
      bicg_.setMaxIterations(options.max_iterations);
      bicg_.compute(pinned_);
    }
  }

  Eigen::VectorXcd solve(const Eigen::VectorXcd &b, double *residual) const
  {
    if (b.norm() == 0.0)
    {
      *residual = 0.0;
      return Eigen::VectorXcd::Zero(b.size());
    }
    Eigen::VectorXcd x;
    if (direct_)
    {
      x = lu_.solve(b);
      // One step of iterative refinement.
      const Eigen::VectorXcd r = b - matrix_ * x;
      x += lu_.solve(r);
    }
    else
    {
      const Eigen::Index n = constraint_.size();
      const cplx total = constraint_.sum();
      const cplx mu = b.head(n).sum() / total;
      const Eigen::VectorXcd load = b.head(n) - mu * constraint_;
      const Eigen::VectorXcd y = bicg_.solve(load.tail(n - 1));
      if (bicg_.info() != Eigen::Success)
      {
        throw SolverError("BiCGSTAB did not converge", static_cast<int>(bicg_.iterations()),
                          bicg_.error());
      }
      x.resize(n + 1);
      x[0] = 0.0;
      x.segment(1, n - 1) = y;
      const cplx shift = (b[n] - constraint_.cwiseProduct(x.head(n)).sum()) / total;
      x.head(n).array() += shift;
      x[n] = mu;
    }
    *residual = relative_residual(matrix_, x, b);
    if (!std::isfinite(*residual) || *residual > options_.tol)
    {
      throw SolverError("cell solve missed the residual tolerance",
                        direct_ ? 0 : static_cast<int>(bicg_.iterations()), *residual);
    }
    return x;
  }

private:
  const SparseMatrixC &matrix_;
  SolveOptions options_;
  bool direct_ = true;
  Eigen::SparseLU<SparseMatrixC, Eigen::COLAMDOrdering<int>> lu_;
  SparseMatrixC pinned_;
  Eigen::VectorXcd constraint_;
  Eigen::BiCGSTAB<SparseMatrixC, Eigen::DiagonalPreconditioner<cplx>> bicg_;
};

CorrectorField expand(const std::shared_ptr<const Mesh> &mesh,
                      const PeriodicClasses &classes, const Eigen::VectorXcd &x,
                      int direction, double residual)
{
  CorrectorField field;
  field.direction = direction;
  field.mesh = mesh;
  field.relative_residual = residual;
  field.nodal_values.resize(mesh->vertices.size());
  for (std::size_t v = 0; v < mesh->vertices.size(); ++v)
  {
    field.nodal_values[v] = x[classes.of_vertex[v]];
  }
  if (x.size() > classes.count)
  {
    field.multiplier = x[classes.count];
  }
  return field;
}

}  // namespace

CellSystem assemble(std::shared_ptr<const Mesh> mesh, const MaterialSpec &mat,
                    double omega_tilde, int direction, const AssemblyOptions &options)
{
  check_direction(direction);
  if (!mesh)
  {
    throw ContractError("assemble: null mesh");
  }
  if (omega_tilde == 0.0)
  {
    throw DomainError("assemble: omega must be nonzero");
  }
  mat.validate();
  CellSystem system;
  system.direction = direction;
  system.has_mean_constraint = options.mean_constraint;
  system.classes = mesh->periodic_classes();
  system.matrix =
      assemble_matrix(*mesh, system.classes, mat, omega_tilde, options.mean_constraint);
  system.rhs = assemble_rhs(*mesh, system.classes, mat, omega_tilde, direction,
                            options.mean_constraint);
  system.mesh = std::move(mesh);
  return system;
}

CorrectorField solve(const CellSystem &system, const SolveOptions &options)
{
  if (!system.has_mean_constraint)
  {
    throw ContractError(
        "cell system has no mean-value constraint; the periodic problem is singular");
  }
  if (!system.mesh || system.matrix.rows() != system.rhs.size() ||
      system.rhs.size() != system.classes.count + 1)
  {
    throw ContractError("malformed cell system");
  }
  double residual = 0.0;
  Eigen::VectorXcd x;
  if (system.rhs.norm() == 0.0)
  {
    if (!(options.tol > 0.0 && options.tol <= 1e-6))
    {
      throw InvalidParameterError("solver tolerance must lie in (0, 1e-6]");
    }
    x = Eigen::VectorXcd::Zero(system.rhs.size());
  }
  else
  {
    LinearSolver solver(system.matrix, options);
    x = solver.solve(system.rhs, &residual);
  }
  return expand(system.mesh, system.classes, x, system.direction, residual);
}

std::vector<CorrectorField> solve_correctors(std::shared_ptr<const Mesh> mesh,
                                             const MaterialSpec &mat, double omega_tilde,
                                             const SolveOptions &options)
{
  CellSystem system = assemble(mesh, mat, omega_tilde, 1);
  const Eigen::VectorXcd rhs2 =
      assemble_rhs(*mesh, system.classes, mat, omega_tilde, 2, true);
  std::vector<CorrectorField> fields;
  if (system.rhs.norm() == 0.0 && rhs2.norm() == 0.0)
  {
    const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(system.rhs.size());
    fields.push_back(expand(system.mesh, system.classes, zero, 1, 0.0));
    fields.push_back(expand(system.mesh, system.classes, zero, 2, 0.0));
    return fields;
  }
  LinearSolver solver(system.matrix, options);
  double r1 = 0.0, r2 = 0.0;
  const Eigen::VectorXcd x1 = solver.solve(system.rhs, &r1);
  const Eigen::VectorXcd x2 = solver.solve(rhs2, &r2);
  fields.push_back(expand(system.mesh, system.classes, x1, 1, r1));
  fields.push_back(expand(system.mesh, system.classes, x2, 2, r2));
  return fields;
}

std::vector<Eigen::Vector2cd> corrector_gradient(const CorrectorField &field)
{
  if (!field.mesh ||
      field.nodal_values.size() != static_cast<Eigen::Index>(field.mesh->vertices.size()))
  {
    throw ContractError("corrector field does not match its mesh");
  }
  const Mesh &mesh = *field.mesh;
  std::vector<Eigen::Vector2cd> grads(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const auto g = triangle_geometry(mesh, t);
    Eigen::Vector2cd grad = Eigen::Vector2cd::Zero();
    for (int a = 0; a < 3; ++a)
    {
      grad += field.nodal_values[mesh.triangles[t][a]] * g.grad[a].cast<cplx>();
    }
    grads[t] = grad;
  }
  return grads;
}

double discrete_energy(const CorrectorField &field, const MaterialSpec &mat)
{
  const auto grads = corrector_gradient(field);
  const Mesh &mesh = *field.mesh;
  double energy = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    energy += std::real(region_eps(mesh, mat, t)) * mesh.triangle_area(t) *
              grads[t].squaredNorm();
  }
  return energy;
}

double weak_residual(const CellSystem &system, const CorrectorField &field)
{
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(system.rhs.size());
  for (std::size_t v = 0; v < field.mesh->vertices.size(); ++v)
  {
    x[system.classes.of_vertex[v]] = field.nodal_values[v];
  }
  if (system.has_mean_constraint)
  {
    x[system.classes.count] = field.multiplier;
  }
  return relative_residual(system.matrix, x, system.rhs);
}

Eigen::VectorXcd load_vector(const Mesh &mesh, const PeriodicClasses &classes,
                             const std::function<cplx(const Vec2 &)> &f)
{
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(classes.count + 1);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const auto &tri = mesh.triangles[t];
    const double area = mesh.triangle_area(t);
    for (const auto &q : kQuad)
    {
      const Vec2 x = q.l0 * mesh.vertices[tri[0]] + q.l1 * mesh.vertices[tri[1]] +
                     q.l2 * mesh.vertices[tri[2]];
      const cplx fx = f(x) * (q.w * area);
      b[classes.of_vertex[tri[0]]] += fx * q.l0;
      b[classes.of_vertex[tri[1]]] += fx * q.l1;
      b[classes.of_vertex[tri[2]]] += fx * q.l2;
    }
  }
  return b;
}

double l2_difference(const CorrectorField &field,
                     const std::function<cplx(const Vec2 &)> &exact)
{
  const Mesh &mesh = *field.mesh;
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const auto &tri = mesh.triangles[t];
    const double area = mesh.triangle_area(t);
    for (const auto &q : kQuad)
    {
      const Vec2 x = q.l0 * mesh.vertices[tri[0]] + q.l1 * mesh.vertices[tri[1]] +
                     q.l2 * mesh.vertices[tri[2]];
      const cplx uh = q.l0 * field.nodal_values[tri[0]] +
                      q.l1 * field.nodal_values[tri[1]] +
                      q.l2 * field.nodal_values[tri[2]];
      sum += q.w * area * std::norm(uh - exact(x));
    }
  }
  return std::sqrt(sum);
}

cplx field_mean(const CorrectorField &field)
{
  const Mesh &mesh = *field.mesh;
  cplx sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const auto &tri = mesh.triangles[t];
    sum += mesh.triangle_area(t) / 3.0 *
           (field.nodal_values[tri[0]] + field.nodal_values[tri[1]] +
            field.nodal_values[tri[2]]);
  }
  return sum;
}

}  // namespace plasmahom

namespace plasmahom
{

struct ReducedCellOperator::Factor
{
  bool real = true;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::SparseLU<SparseMatrixC, Eigen::COLAMDOrdering<int>> lu;

  Eigen::VectorXcd solve(const Eigen::VectorXcd &b) const
  {
    if (!real)
    {
      return lu.solve(b);
    }
    const Eigen::VectorXd re = ldlt.solve(b.real());
    const Eigen::VectorXd im = ldlt.solve(b.imag());
    Eigen::VectorXcd x(b.size());
    x.real() = re;
    x.imag() = im;
    return x;
  }
};

struct ReducedCellOperator::Solution
{
  std::array<Eigen::VectorXcd, 2> chi_gamma;
  std::array<Eigen::VectorXcd, 2> w;  // sum_c eta_c (f1_{c,j} + S_c chi)
};

ReducedCellOperator::ReducedCellOperator(std::shared_ptr<const Mesh> mesh, cplx eps_bulk,
                                         std::optional<cplx> eps_inclusion,
                                         int curve_count)
  : mesh_(std::move(mesh))
{
  if (!mesh_)
  {
    throw ContractError("ReducedCellOperator: null mesh");
  }
  if (curve_count < 0)
  {
    throw InvalidParameterError("ReducedCellOperator: negative curve count");
  }
  const Mesh &m = *mesh_;
  classes_ = m.periodic_classes();
  for (const auto &seg : m.interface_segments)
  {
    if (seg.curve >= static_cast<std::size_t>(curve_count))
    {
      throw ContractError("interface segment refers to an unknown curve");
    }
  }

  std::vector<char> on_gamma(classes_.count, 0);
  for (const auto &seg : m.interface_segments)
  {
    on_gamma[classes_.of_vertex[seg.v0]] = 1;
    on_gamma[classes_.of_vertex[seg.v1]] = 1;
  }
  pinned_ = -1;
  for (int c = 0; c < classes_.count; ++c)
  {
    if (!on_gamma[c])
    {
      pinned_ = c;
      break;
    }
  }
  if (pinned_ < 0)
  {
    throw MeshError("every vertex lies on the interface; refine the mesh");
  }
  reduced_of_class_.assign(classes_.count, -1);
  unknowns_ = 0;
  for (int c = 0; c < classes_.count; ++c)
  {
    if (c != pinned_)
    {
      reduced_of_class_[c] = unknowns_++;
    }
  }
  std::vector<int> gamma_index(unknowns_, -1);
  for (int c = 0; c < classes_.count; ++c)
  {
    if (on_gamma[c])
    {
      gamma_index[reduced_of_class_[c]] = static_cast<int>(gamma_.size());
      gamma_.push_back(reduced_of_class_[c]);
    }
  }

  auto eps_of = [&](std::size_t t) {
    return (t < m.regions.size() && m.regions[t] == Region::inclusion && eps_inclusion)
               ? *eps_inclusion
               : eps_bulk;
  };
  bool real = true;
  for (std::size_t t = 0; t < m.triangles.size(); ++t)
  {
    real = real && eps_of(t).imag() == 0.0;
  }

  std::vector<Eigen::Triplet<cplx>> triplets;
  std::array<Eigen::VectorXcd, 2> f0{Eigen::VectorXcd::Zero(unknowns_),
                                     Eigen::VectorXcd::Zero(unknowns_)};
  volume_total_ = 0.0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t)
  {
    const auto g = triangle_geometry(m, t);
    const cplx eps = eps_of(t);
    volume_total_ += eps * g.area;
    for (int a = 0; a < 3; ++a)
    {
      const int ia = reduced_of_class_[classes_.of_vertex[m.triangles[t][a]]];
      if (ia < 0)
      {
        continue;
      }
      for (int j = 0; j < 2; ++j)
      {
        f0[j][ia] -= eps * g.area * g.grad[a][j];
      }
      for (int b = 0; b < 3; ++b)
      {
        const int ib = reduced_of_class_[classes_.of_vertex[m.triangles[t][b]]];
        if (ib >= 0)
        {
          triplets.emplace_back(ia, ib, eps * g.area * g.grad[a].dot(g.grad[b]));
        }
      }
    }
  }

  auto factor = std::make_shared<Factor>();
  factor->real = real;
  if (real)
  {
    std::vector<Eigen::Triplet<double>> rt;
    rt.reserve(triplets.size());
    for (const auto &tr : triplets)
    {
      rt.emplace_back(tr.row(), tr.col(), tr.value().real());
    }
    Eigen::SparseMatrix<double> k(unknowns_, unknowns_);
    k.setFromTriplets(rt.begin(), rt.end());
    factor->ldlt.compute(k);
    if (factor->ldlt.info() != Eigen::Success)
    {
      throw SolverError("LDLT factorization of the stiffness matrix failed");
    }
  }
  else
  {
    SparseMatrixC k(unknowns_, unknowns_);
    k.setFromTriplets(triplets.begin(), triplets.end());
    k.makeCompressed();
    factor->lu.analyzePattern(k);
    factor->lu.factorize(k);
    if (factor->lu.info() != Eigen::Success)
    {
      throw SolverError("LU factorization of the stiffness matrix failed");
    }
  }
  factor_ = factor;

  const int ng = interface_size();
  for (int j = 0; j < 2; ++j)
  {
    u0_[j] = factor_->solve(f0[j]);
    u0_gamma_[j].resize(ng);
    for (int g = 0; g < ng; ++g)
    {
      u0_gamma_[j][g] = u0_[j][gamma_[g]];
    }
  }
  for (int i = 0; i < 2; ++i)
  {
    for (int j = 0; j < 2; ++j)
    {
      volume_block_(i, j) = (i == j ? volume_total_ : cplx(0.0)) -
                            (f0[i].array() * u0_[j].array()).sum();
    }
  }

  green_.resize(ng, ng);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(unknowns_);
  for (int g = 0; g < ng; ++g)
  {
    e[gamma_[g]] = 1.0;
    const Eigen::VectorXcd col = factor_->solve(e);
    e[gamma_[g]] = 0.0;
    for (int r = 0; r < ng; ++r)
    {
      green_(r, g) = col[gamma_[r]];
    }
  }

  stiffness_.assign(curve_count, Eigen::MatrixXd::Zero(ng, ng));
  tangent_load_.assign(curve_count, {Eigen::VectorXd::Zero(ng), Eigen::VectorXd::Zero(ng)});
  tangent_moment_.assign(curve_count, Eigen::Matrix2d::Zero());
  for (const auto &seg : m.interface_segments)
  {
    const Vec2 d = m.vertices[seg.v1] - m.vertices[seg.v0];
    const double len = d.norm();
    const Vec2 tangent = d / len;
    const int a = gamma_index[reduced_of_class_[classes_.of_vertex[seg.v0]]];
    const int b = gamma_index[reduced_of_class_[classes_.of_vertex[seg.v1]]];
    auto &s = stiffness_[seg.curve];
    s(a, a) += 1.0 / len;
    s(b, b) += 1.0 / len;
    s(a, b) -= 1.0 / len;
    s(b, a) -= 1.0 / len;
    for (int j = 0; j < 2; ++j)
    {
      tangent_load_[seg.curve][j][a] -= tangent[j];
      tangent_load_[seg.curve][j][b] += tangent[j];
    }
    tangent_moment_[seg.curve] += tangent * tangent.transpose() * len;
  }
}

ReducedCellOperator::Solution ReducedCellOperator::solve_interface(
    std::span<const cplx> eta) const
{
  if (eta.size() != stiffness_.size())
  {
    throw ContractError("one eta value per interface curve is required");
  }
  const int ng = interface_size();
  Solution s;
  if (ng == 0)
  {
    for (int j = 0; j < 2; ++j)
    {
      s.chi_gamma[j].resize(0);
      s.w[j].resize(0);
    }
    return s;
  }
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(ng, ng);
  std::array<Eigen::VectorXcd, 2> f{Eigen::VectorXcd::Zero(ng), Eigen::VectorXcd::Zero(ng)};
  for (std::size_t c = 0; c < eta.size(); ++c)
  {
    if (eta[c] == 0.0)
    {
      continue;
    }
    h += eta[c] * stiffness_[c].cast<cplx>();
    for (int j = 0; j < 2; ++j)
    {
      f[j] += eta[c] * tangent_load_[c][j].cast<cplx>();
    }
  }
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(ng, ng) - green_ * h;
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  for (int j = 0; j < 2; ++j)
  {
    s.chi_gamma[j] = lu.solve(u0_gamma_[j] + green_ * f[j]);
    s.w[j] = f[j] + h * s.chi_gamma[j];
    if (!s.chi_gamma[j].allFinite())
    {
      throw SolverError("interface system is singular at this frequency");
    }
  }
  return s;
}

Eigen::Matrix2cd ReducedCellOperator::effective_block(std::span<const cplx> eta) const
{
  const Solution s = solve_interface(eta);
  Eigen::Matrix2cd block = volume_block_;
  if (interface_size() == 0)
  {
    return block;
  }
  for (int i = 0; i < 2; ++i)
  {
    for (int j = 0; j < 2; ++j)
    {
      block(i, j) -= (u0_gamma_[i].array() * s.w[j].array()).sum();
      for (std::size_t c = 0; c < eta.size(); ++c)
      {
        if (eta[c] == 0.0)
        {
          continue;
        }
        block(i, j) -=
            eta[c] * (tangent_moment_[c](i, j) +
                      (tangent_load_[c][i].cast<cplx>().array() * s.chi_gamma[j].array())
                          .sum());
      }
    }
  }
  return block;
}

std::vector<CorrectorField> ReducedCellOperator::correctors(std::span<const cplx> eta) const
{
  const Solution s = solve_interface(eta);
  std::vector<CorrectorField> fields;
  for (int j = 0; j < 2; ++j)
  {
    Eigen::VectorXcd x = u0_[j];
    if (interface_size() > 0)
    {
      Eigen::VectorXcd load = Eigen::VectorXcd::Zero(unknowns_);
      for (int g = 0; g < interface_size(); ++g)
      {
        load[gamma_[g]] = s.w[j][g];
      }
      x += factor_->solve(load);
    }
    Eigen::VectorXcd full(classes_.count);
    for (int c = 0; c < classes_.count; ++c)
    {
      full[c] = reduced_of_class_[c] < 0 ? cplx(0.0) : x[reduced_of_class_[c]];
    }
    CorrectorField field = expand(mesh_, classes_, full, j + 1, 0.0);
    const cplx mean = field_mean(field);
    field.nodal_values.array() -= mean;
    fields.push_back(std::move(field));
  }
  return fields;
}

}  // namespace plasmahom
