// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_MESH_HPP
#define PLASMAHOM_MESH_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "plasmahom/geometry.hpp"
#include "plasmahom/types.hpp"

namespace plasmahom
{

enum class Region : std::uint8_t
{
  host = 0,
  inclusion = 1
};

// A mesh edge lying on an interface curve, oriented along increasing curve parameter.
struct InterfaceSegment
{
  int v0;
  int v1;
  std::size_t curve;
};

// Mesh vertex sitting on a sheet edge (index into UnitCellGeometry::edges).
struct EdgeVertex
{
  int vertex;
  std::size_t edge;
};

// `image` lies on the face y_axis = 1 and is identified with `source` on y_axis = 0.
struct PeriodicPair
{
  int image;
  int source;
  int axis;
};

struct PeriodicClasses
{
  std::vector<int> of_vertex;
  int count = 0;
};

//
// Interface-conforming periodic triangulation of the unit square.
//
struct Mesh
{
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Region> regions;
  std::vector<InterfaceSegment> interface_segments;
  std::vector<EdgeVertex> edge_vertices;
  std::vector<PeriodicPair> periodic_pairs;
  // Target element size: the background grid spacing is the largest 1/n <= h, n even.
  double h = 0.0;
  int grid_cells = 0;

  double triangle_area(std::size_t t) const;
  double interface_length() const;
  double max_diameter() const;
  // Union of the periodic identifications; every class is one unknown.
  PeriodicClasses periodic_classes() const;
  // Content hash, stable across runs.
  std::string id() const;
};

struct MeshOptions
{
  // Interior vertices closer than snap_fraction * spacing to Sigma are moved onto it.
  double snap_fraction = 0.3;
  // A snap is undone when it shrinks an incident triangle below this area fraction.
  double min_area_ratio = 0.2;
};

// Throws MeshError on non-recoverable degeneracy (e.g. Sigma crossing the cell
// boundary away from a grid vertex).
Mesh generate_mesh(const UnitCellGeometry &geom, double h, const MeshOptions &options = {});

struct MeshReport
{
  bool conforming = true;
  bool periodic = true;
  bool oriented = true;
  double min_area = 0.0;
  std::vector<std::string> issues;

  bool ok() const { return conforming && periodic && oriented; }
};

// Exhaustive structural checks of the Mesh invariants.
MeshReport check_mesh(const Mesh &mesh);

// Versioned plain-text exchange format; see docs/formats.md.
void write_mesh(std::ostream &os, const Mesh &mesh);
Mesh read_mesh(std::istream &is);

}  // namespace plasmahom

#endif  // PLASMAHOM_MESH_HPP
