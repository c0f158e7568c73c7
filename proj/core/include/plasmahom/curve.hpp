// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef PLASMAHOM_CURVE_HPP
#define PLASMAHOM_CURVE_HPP

#include <Eigen/Core>

#include "plasmahom/types.hpp"

namespace plasmahom
{

enum class CurveKind
{
  segment,
  circle,
  sine
};

// How a curve meets the cell: open curves end inside Y (their endpoints are sheet
// edges), closed curves close on themselves, periodic curves leave through y1 = 1 and
// re-enter through y1 = 0 at the same height.
enum class CurveTopology
{
  open,
  closed,
  periodic
};

//
// A smooth interface curve in the y1-y2 cross-section, parametrized by s in [0, 1].
// The normal is the tangent rotated by -90 degrees.
//
class Curve
{
public:
  static Curve segment(const Vec2 &a, const Vec2 &b, CurveTopology topology);
  static Curve circle(const Vec2 &center, double radius);
  // y2 = level + amplitude * sin(2 pi periods y1), y1 in [0, 1].
  static Curve sine(double level, double amplitude, int periods);

  CurveKind kind() const { return kind_; }
  CurveTopology topology() const { return topology_; }

  Vec2 point(double s) const;
  Vec2 derivative(double s) const;
  Vec2 tangent(double s) const;
  Vec2 normal(double s) const;
  double length() const;
  bool is_straight() const;

  // Integral of t t^T over the curve.
  Eigen::Matrix2d tangent_moment() const;

  struct Closest
  {
    double param;
    double distance;
    Vec2 point;
  };
  Closest closest(const Vec2 &p) const;

  // Strictly inside a closed curve; false for other topologies.
  bool contains(const Vec2 &p) const;

  // Accessors for serialization.
  const Vec2 &a() const { return a_; }
  const Vec2 &b() const { return b_; }
  double radius() const { return radius_; }
  double amplitude() const { return amplitude_; }
  double level() const { return level_; }
  int periods() const { return periods_; }

private:
  Curve() = default;

  CurveKind kind_ = CurveKind::segment;
  CurveTopology topology_ = CurveTopology::open;
  Vec2 a_ = Vec2::Zero();  // segment start / circle center
  Vec2 b_ = Vec2::Zero();  // segment end
  double radius_ = 0.0;
  double level_ = 0.0;
  double amplitude_ = 0.0;
  int periods_ = 1;
};

}  // namespace plasmahom

#endif  // PLASMAHOM_CURVE_HPP
