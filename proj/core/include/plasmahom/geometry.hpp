// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_GEOMETRY_HPP
#define PLASMAHOM_GEOMETRY_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "plasmahom/curve.hpp"
#include "plasmahom/types.hpp"

namespace plasmahom
{

enum class GeometryKind
{
  planar_sheet,
  ribbon,
  tube,
  corrugated
};

std::string to_string(GeometryKind kind);
GeometryKind geometry_kind_from_string(const std::string &name);

// Parameters of the prototypical cells. Only the fields relevant to `kind` are read.
struct GeometrySpec
{
  GeometryKind kind = GeometryKind::planar_sheet;
  double width = 0.7;                  // ribbon
  double radius = 0.25;                // tube
  Vec2 center = Vec2(0.5, 0.5);        // tube
  double amplitude = 0.25;             // corrugated
  int periods = 1;                     // corrugated
  double level = 0.5;                  // y2 height of sheets / ribbons
};

// A sheet edge in the cross-section. The edge line runs along y3; `outward` is the
// in-sheet unit vector pointing away from the sheet.
struct EdgePoint
{
  Vec2 position;
  Vec2 outward;
  std::size_t curve;
};

//
// Cross-section of a y3-invariant unit cell [0,1]^3 with its embedded sheets.
//
struct UnitCellGeometry
{
  GeometrySpec spec;
  std::vector<Curve> interfaces;
  std::vector<EdgePoint> edges;
  int invariant_axis = 2;

  // Total length of the interface curves (area of Sigma per unit y3-extent).
  double interface_measure() const;
  bool has_inclusions() const;
  bool in_inclusion(const Vec2 &p) const;
};

UnitCellGeometry build_geometry(const GeometrySpec &spec);

struct CurveLocation
{
  std::size_t curve;
  double param;
  double distance;
};

// Nearest interface point; throws DomainError when the geometry has no interface.
CurveLocation locate_on_interface(const UnitCellGeometry &geom, const Vec2 &p);

// P_t = t t^T at a point of Sigma. Throws DomainError if the point is farther than
// `tol` from every interface curve.
Eigen::Matrix2d surface_projection(const UnitCellGeometry &geom, const Vec2 &point,
                                   double tol = 1e-9);

}  // namespace plasmahom

#endif  // PLASMAHOM_GEOMETRY_HPP
