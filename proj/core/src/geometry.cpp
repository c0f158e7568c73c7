// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include "plasmahom/geometry.hpp"

#include <cmath>
#include <limits>

#include "plasmahom/errors.hpp"

namespace plasmahom
{

std::string to_string(GeometryKind kind)
{
  switch (kind)
  {
    case GeometryKind::planar_sheet:
      return "planar_sheet";
    case GeometryKind::ribbon:
      return "ribbon";
    case GeometryKind::tube:
      return "tube";
    case GeometryKind::corrugated:
      return "corrugated";
  }
  return "unknown";
}

GeometryKind geometry_kind_from_string(const std::string &name)
{
  if (name == "planar_sheet" || name == "planar")
  {
    return GeometryKind::planar_sheet;
  }
  if (name == "ribbon")
  {
    return GeometryKind::ribbon;
  }
  if (name == "tube")
  {
    return GeometryKind::tube;
  }
  if (name == "corrugated")
  {
    return GeometryKind::corrugated;
  }
  throw GeometryError("unknown geometry kind '" + name + "'");
}

double UnitCellGeometry::interface_measure() const
{
  double total = 0.0;
  for (const auto &c : interfaces)
  {
    total += c.length();
  }
  return total;
}

bool UnitCellGeometry::has_inclusions() const
{
  for (const auto &c : interfaces)
  {
    if (c.topology() == CurveTopology::closed)
    {
      return true;
    }
  }
  return false;
}

bool UnitCellGeometry::in_inclusion(const Vec2 &p) const
{
  for (const auto &c : interfaces)
  {
    if (c.contains(p))
    {
      return true;
    }
  }
  return false;
}

UnitCellGeometry build_geometry(const GeometrySpec &spec)
{
  UnitCellGeometry g;
  g.spec = spec;
  const double level = spec.level;
  if (spec.kind != GeometryKind::tube && !(level > 0.0 && level < 1.0))
  {
    throw GeometryError("sheet level must lie in (0, 1)");
  }
  switch (spec.kind)
  {
    case GeometryKind::planar_sheet:
      g.interfaces.push_back(
          Curve::segment(Vec2(0.0, level), Vec2(1.0, level), CurveTopology::periodic));
      break;
    case GeometryKind::ribbon:
    {
      if (!(spec.width > 0.0 && spec.width < 1.0))
      {
        throw GeometryError("ribbon width must lie in (0, 1)");
      }
      const Vec2 a(0.5 - 0.5 * spec.width, level);
      const Vec2 b(0.5 + 0.5 * spec.width, level);
      g.interfaces.push_back(Curve::segment(a, b, CurveTopology::open));
      g.edges.push_back({a, Vec2(-1.0, 0.0), 0});
      g.edges.push_back({b, Vec2(1.0, 0.0), 0});
      break;
    }
    case GeometryKind::tube:
    {
      const double r = spec.radius;
      if (!(r > 0.0 && r < 0.5))
      {
        throw GeometryError("tube radius must lie in (0, 0.5)");
      }
      const Vec2 &c = spec.center;
      if (c.x() - r <= 0.0 || c.x() + r >= 1.0 || c.y() - r <= 0.0 || c.y() + r >= 1.0)
      {
        throw GeometryError("tube must lie strictly inside the unit cell");
      }
      g.interfaces.push_back(Curve::circle(c, r));
      break;
    }
    case GeometryKind::corrugated:
    {
      if (spec.periods < 1)
      {
        throw GeometryError("corrugation needs at least one period");
      }
      const double a = std::abs(spec.amplitude);
      if (level - a <= 0.0 || level + a >= 1.0)
      {
        throw GeometryError("corrugated sheet leaves the unit cell");
      }
      g.interfaces.push_back(Curve::sine(level, spec.amplitude, spec.periods));
      break;
    }
  }
  return g;
}

CurveLocation locate_on_interface(const UnitCellGeometry &geom, const Vec2 &p)
{
  if (geom.interfaces.empty())
  {
    throw DomainError("geometry has no interface");
  }
  CurveLocation best{0, 0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < geom.interfaces.size(); ++i)
  {
    const auto c = geom.interfaces[i].closest(p);
    if (c.distance < best.distance)
    {
      best = {i, c.param, c.distance};
    }
  }
  return best;
}

Eigen::Matrix2d surface_projection(const UnitCellGeometry &geom, const Vec2 &point,
                                   double tol)
{
  const auto loc = locate_on_interface(geom, point);
  if (loc.distance > tol)
  {
    throw DomainError("point is not on the interface (distance " +
                      std::to_string(loc.distance) + ")");
  }
  const Vec2 t = geom.interfaces[loc.curve].tangent(loc.param);
  return t * t.transpose();
}

}  // namespace plasmahom
