// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "plasmahom/errors.hpp"
#include "plasmahom/geometry.hpp"
#include "plasmahom/mesh.hpp"

namespace ph = plasmahom;

namespace
{
ph::UnitCellGeometry make(ph::GeometryKind kind)
{
  ph::GeometrySpec s;
  s.kind = kind;
  return ph::build_geometry(s);
}

int boundary_vertex_count(const ph::Mesh &m)
{
  int n = 0;
  for (const auto &v : m.vertices)
  {
    if (v.x() == 0.0 || v.y() == 0.0)
    {
      ++n;
    }
  }
  return n;
}
}  // namespace

TEST(Mesh, PlanarSheetInterfaceLength)
{
  auto m = ph::generate_mesh(make(ph::GeometryKind::planar_sheet), 0.25);
  EXPECT_EQ(m.interface_length(), 1.0);
  EXPECT_TRUE(ph::check_mesh(m).ok());
  EXPECT_TRUE(m.edge_vertices.empty());
}

TEST(Mesh, TubeInterfaceLength)
{
  auto m = ph::generate_mesh(make(ph::GeometryKind::tube), 0.02);
  EXPECT_NEAR(m.interface_length(), std::numbers::pi / 2.0, 1e-3 * std::numbers::pi / 2.0);
}

class MeshAllGeometries : public ::testing::TestWithParam<ph::GeometryKind>
{
};

TEST_P(MeshAllGeometries, StructuralInvariants)
{
  const auto g = make(GetParam());
  for (double h : {0.1, 0.05})
  {
    auto m = ph::generate_mesh(g, h);
    auto report = ph::check_mesh(m);
    EXPECT_TRUE(report.conforming);
    EXPECT_TRUE(report.periodic);
    EXPECT_TRUE(report.oriented);
    EXPECT_GT(report.min_area, 0.0);
    EXPECT_EQ(static_cast<int>(m.periodic_pairs.size()), boundary_vertex_count(m));
    EXPECT_EQ(m.edge_vertices.size(), g.edges.size());
    EXPECT_LE(m.max_diameter(), 2.0 * h);
    double area = 0.0;
    for (std::size_t t = 0; t < m.triangles.size(); ++t)
    {
      area += m.triangle_area(t);
    }
    EXPECT_NEAR(area, 1.0, 1e-12);
  }
}

TEST_P(MeshAllGeometries, PeriodicPairingPreservesTransverseCoordinate)
{
  auto m = ph::generate_mesh(make(GetParam()), 0.05);
  std::set<std::pair<int, int>> seen;
  for (const auto &p : m.periodic_pairs)
  {
    const auto &a = m.vertices[p.image];
    const auto &b = m.vertices[p.source];
    const int other = 1 - p.axis;
    EXPECT_LE(std::abs(a[other] - b[other]), 1e-12 * m.h);
    EXPECT_EQ(a[p.axis], 1.0);
    EXPECT_EQ(b[p.axis], 0.0);
    EXPECT_TRUE(seen.insert({p.image, p.axis}).second);
  }
}

TEST_P(MeshAllGeometries, EdgeVerticesSitOnEdgePoints)
{
  const auto g = make(GetParam());
  auto m = ph::generate_mesh(g, 0.05);
  for (const auto &ev : m.edge_vertices)
  {
    EXPECT_LT((m.vertices[ev.vertex] - g.edges[ev.edge].position).norm(), 1e-12);
  }
}

TEST_P(MeshAllGeometries, DeterministicId)
{
  const auto g = make(GetParam());
  EXPECT_EQ(ph::generate_mesh(g, 0.05).id(), ph::generate_mesh(g, 0.05).id());
  EXPECT_NE(ph::generate_mesh(g, 0.05).id(), ph::generate_mesh(g, 0.1).id());
}

TEST_P(MeshAllGeometries, TextRoundTrip)
{
  auto m = ph::generate_mesh(make(GetParam()), 0.1);
  std::stringstream ss;
  ph::write_mesh(ss, m);
  auto back = ph::read_mesh(ss);
  EXPECT_EQ(back.id(), m.id());
  EXPECT_EQ(back.vertices.size(), m.vertices.size());
  EXPECT_EQ(back.interface_segments.size(), m.interface_segments.size());
}

INSTANTIATE_TEST_SUITE_P(Kinds, MeshAllGeometries,
                         ::testing::Values(ph::GeometryKind::planar_sheet,
                                           ph::GeometryKind::ribbon, ph::GeometryKind::tube,
                                           ph::GeometryKind::corrugated),
                         [](const auto &info) { return ph::to_string(info.param); });

TEST(Mesh, RefinementDoublesCurvedSegments)
{
  for (auto kind : {ph::GeometryKind::tube, ph::GeometryKind::corrugated})
  {
    const auto g = make(kind);
    std::size_t prev = 0;
    for (double h : {0.0125, 0.00625, 0.003125})
    {
      const auto n = ph::generate_mesh(g, h).interface_segments.size();
      if (prev > 0)
      {
        EXPECT_GE(n, 2 * prev) << "h = " << h;
      }
      prev = n;
    }
  }
}

TEST(Mesh, CoarseRefinementGrowsCurvedSegments)
{
  for (auto kind : {ph::GeometryKind::tube, ph::GeometryKind::corrugated})
  {
    const auto g = make(kind);
    std::size_t prev = 0;
    for (double h : {0.1, 0.05, 0.025})
    {
      const auto m = ph::generate_mesh(g, h);
      const auto n = m.interface_segments.size();
      if (prev > 0)
      {
        EXPECT_GE(static_cast<double>(n), 1.5 * static_cast<double>(prev)) << "h = " << h;
      }
      for (const auto &seg : m.interface_segments)
      {
        EXPECT_LE((m.vertices[seg.v0] - m.vertices[seg.v1]).norm(),
                  2.0 / m.grid_cells);
      }
      prev = n;
    }
  }
}

TEST(Mesh, TubeRegions)
{
  auto m = ph::generate_mesh(make(ph::GeometryKind::tube), 0.05);
  double inside = 0.0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t)
  {
    if (m.regions[t] == ph::Region::inclusion)
    {
      inside += m.triangle_area(t);
    }
  }
  EXPECT_NEAR(inside, std::numbers::pi * 0.0625, 5e-3);
}

TEST(Mesh, Errors)
{
  const auto g = make(ph::GeometryKind::planar_sheet);
  EXPECT_THROW(ph::generate_mesh(g, 0.0), ph::MeshError);
  EXPECT_THROW(ph::generate_mesh(g, 0.7), ph::MeshError);
  std::istringstream bad("format_version 1\nh 0.1\ngrid_cells 10\nvertices 3\n0 0\n");
  EXPECT_THROW(ph::read_mesh(bad), ph::MeshError);
}
