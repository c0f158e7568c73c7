// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include "plasmahom/curve.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "plasmahom/errors.hpp"

namespace plasmahom
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 5-point Gauss-Legendre on [0,1].
constexpr double kGaussNodes[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                                   0.76923465505284155, 0.95308992296933200};
constexpr double kGaussWeights[5] = {0.11846344252809454, 0.23931433524968324,
                                     0.28444444444444444, 0.23931433524968324,
                                     0.11846344252809454};

template <typename F>
auto integrate(F &&f, int panels)
{
  decltype(f(0.0)) sum = f(0.0) * 0.0;
  const double w = 1.0 / panels;
  for (int k = 0; k < panels; ++k)
  {
    for (int q = 0; q < 5; ++q)
    {
      sum += f((k + kGaussNodes[q]) * w) * (kGaussWeights[q] * w);
    }
  }
  return sum;
}

}  // namespace

Curve Curve::segment(const Vec2 &a, const Vec2 &b, CurveTopology topology)
{
  if ((b - a).norm() == 0.0)
  {
    throw GeometryError("degenerate segment");
  }
  if (topology == CurveTopology::closed)
  {
    throw GeometryError("a segment cannot be closed");
  }
  Curve c;
  c.kind_ = CurveKind::segment;
  c.topology_ = topology;
  c.a_ = a;
  c.b_ = b;
  return c;
}

Curve Curve::circle(const Vec2 &center, double radius)
{
  if (!(radius > 0.0))
  {
    throw GeometryError("circle radius must be positive");
  }
  Curve c;
  c.kind_ = CurveKind::circle;
  c.topology_ = CurveTopology::closed;
  c.a_ = center;
  c.radius_ = radius;
  return c;
}

Curve Curve::sine(double level, double amplitude, int periods)
{
  if (periods < 1)
  {
    throw GeometryError("sine curve needs at least one period");
  }
  Curve c;
  c.kind_ = CurveKind::sine;
  c.topology_ = CurveTopology::periodic;
  c.level_ = level;
  c.amplitude_ = amplitude;
  c.periods_ = periods;
  c.a_ = Vec2(0.0, level);
  c.b_ = Vec2(1.0, level);
  return c;
}

Vec2 Curve::point(double s) const
{
  switch (kind_)
  {
    case CurveKind::segment:
      return a_ + s * (b_ - a_);
    case CurveKind::circle:
      return a_ + radius_ * Vec2(std::cos(kTwoPi * s), std::sin(kTwoPi * s));
    case CurveKind::sine:
      return Vec2(s, level_ + amplitude_ * std::sin(kTwoPi * periods_ * s));
  }
  return Vec2::Zero();
}

Vec2 Curve::derivative(double s) const
{
  switch (kind_)
  {
    case CurveKind::segment:
      return b_ - a_;
    case CurveKind::circle:
      return kTwoPi * radius_ * Vec2(-std::sin(kTwoPi * s), std::cos(kTwoPi * s));
    case CurveKind::sine:
      return Vec2(1.0, amplitude_ * kTwoPi * periods_ * std::cos(kTwoPi * periods_ * s));
  }
  return Vec2::Zero();
}

Vec2 Curve::tangent(double s) const { return derivative(s).normalized(); }

Vec2 Curve::normal(double s) const
{
  const Vec2 t = tangent(s);
  return Vec2(t.y(), -t.x());
}

double Curve::length() const
{
  switch (kind_)
  {
    case CurveKind::segment:
      return (b_ - a_).norm();
    case CurveKind::circle:
      return kTwoPi * radius_;
    case CurveKind::sine:
      return integrate([this](double s) { return derivative(s).norm(); },
                       64 * periods_);
  }
  return 0.0;
}

bool Curve::is_straight() const
{
  return kind_ == CurveKind::segment || (kind_ == CurveKind::sine && amplitude_ == 0.0);
}

Eigen::Matrix2d Curve::tangent_moment() const
{
  switch (kind_)
  {
    case CurveKind::segment:
    {
      const Vec2 t = tangent(0.0);
      return length() * t * t.transpose();
    }
    case CurveKind::circle:
      return std::numbers::pi * radius_ * Eigen::Matrix2d::Identity();
    case CurveKind::sine:
      return integrate(
          [this](double s) -> Eigen::Matrix2d {
            const Vec2 d = derivative(s);
            return d * d.transpose() / d.norm();
          },
          64 * periods_);
  }
  return Eigen::Matrix2d::Zero();
}

Curve::Closest Curve::closest(const Vec2 &p) const
{
  switch (kind_)
  {
    case CurveKind::segment:
    {
      const Vec2 d = b_ - a_;
      const double s = std::clamp((p - a_).dot(d) / d.squaredNorm(), 0.0, 1.0);
      const Vec2 q = point(s);
      return {s, (p - q).norm(), q};
    }
    case CurveKind::circle:
    {
      const Vec2 r = p - a_;
      double s = 0.0;
      if (r.norm() > 0.0)
      {
        s = std::atan2(r.y(), r.x()) / kTwoPi;
        if (s < 0.0)
        {
          s += 1.0;
        }
      }
      const Vec2 q = point(s);
      return {s, (p - q).norm(), q};
    }
    case CurveKind::sine:
    {
      // Any closer point lies within |p - c(p.x)| horizontally of p.
      const double x0 = std::clamp(p.x(), 0.0, 1.0);
      const double bound = (p - point(x0)).norm();
      const double lo = std::max(0.0, x0 - bound);
      const double hi = std::min(1.0, x0 + bound);
      const int samples = 64;
      double best_s = x0;
      double best = bound * bound;
      for (int k = 0; k <= samples; ++k)
      {
        const double s = lo + (hi - lo) * k / samples;
        const double dist2 = (p - point(s)).squaredNorm();
        if (dist2 < best)
        {
          best = dist2;
          best_s = s;
        }
      }
      // Newton on f(s) = (c(s) - p) . c'(s).
      const double step = (hi - lo) / samples;
      double s = best_s;
      const double k2 = kTwoPi * periods_;
      for (int it = 0; it < 50; ++it)
      {
        const Vec2 c = point(s);
        const Vec2 d1 = derivative(s);
        const Vec2 d2(0.0, -amplitude_ * k2 * k2 * std::sin(k2 * s));
        const double f = (c - p).dot(d1);
        const double df = d1.squaredNorm() + (c - p).dot(d2);
        if (df <= 0.0)
        {
          break;
        }
        const double next = std::clamp(s - f / df, std::max(0.0, best_s - step),
                                       std::min(1.0, best_s + step));
        if (std::abs(next - s) < 1e-15)
        {
          s = next;
          break;
        }
        s = next;
      }
      const Vec2 q = point(s);
      if ((p - q).squaredNorm() > best)
      {
        const Vec2 qb = point(best_s);
        return {best_s, (p - qb).norm(), qb};
      }
      return {s, (p - q).norm(), q};
    }
  }
  return {0.0, 0.0, p};
}

bool Curve::contains(const Vec2 &p) const
{
  if (topology_ != CurveTopology::closed)
  {
    return false;
  }
  return (p - a_).norm() < radius_;
}

}  // namespace plasmahom
