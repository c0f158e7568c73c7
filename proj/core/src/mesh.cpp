// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include "plasmahom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "plasmahom/errors.hpp"

namespace plasmahom
{

namespace
{

double orient(const Vec2 &a, const Vec2 &b, const Vec2 &c)
{
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

double min_angle(const Vec2 &a, const Vec2 &b, const Vec2 &c)
{
  auto angle = [](const Vec2 &p, const Vec2 &q, const Vec2 &r) {
    const Vec2 u = q - p;
    const Vec2 v = r - p;
    const double cross = u.x() * v.y() - u.y() * v.x();
    return std::atan2(std::abs(cross), u.dot(v));
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

std::uint64_t edge_key(int a, int b)
{
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

// Crossing events of one curve with the mesh skeleton.
struct Event
{
  double param;
  int vertex = -1;  // existing vertex on the curve
  int edge = -1;    // or an interior point of an edge
  double t = 0.0;   // position along the edge
  Vec2 point;
};

class Builder
{
public:
  Builder(const UnitCellGeometry &geom, double h, const MeshOptions &options)
    : geom_(geom), options_(options)
  {
    if (!(h > 0.0 && h <= 0.5))
    {
      throw MeshError("mesh size h must lie in (0, 0.5]");
    }
    n_ = static_cast<int>(std::ceil(1.0 / h - 1e-9));
    n_ += n_ % 2;
    n_ = std::max(n_, 2);
    spacing_ = 1.0 / n_;
    mesh_.h = h;
    mesh_.grid_cells = n_;
  }

  Mesh build()
  {
    background();
    sample_curves();
    snap();
    std::vector<std::vector<Event>> events(geom_.interfaces.size());
    build_edges();
    for (std::size_t c = 0; c < geom_.interfaces.size(); ++c)
    {
      events[c] = curve_events(c);
    }
    insert_crossings(events);
    retriangulate();
    classify_regions();
    periodic_pairs();
    for (std::size_t t = 0; t < mesh_.triangles.size(); ++t)
    {
      if (!(mesh_.triangle_area(t) > 0.0))
      {
        throw MeshError("mesh generation produced a degenerate triangle near (" +
                        std::to_string(centroid(t).x()) + ", " +
                        std::to_string(centroid(t).y()) + ")");
      }
    }
    return std::move(mesh_);
  }

private:
  int vid(int i, int j) const { return j * (n_ + 1) + i; }

  bool on_boundary(int v) const
  {
    if (v >= (n_ + 1) * (n_ + 1))
    {
      return false;
    }
    const int i = v % (n_ + 1);
    const int j = v / (n_ + 1);
    return i == 0 || j == 0 || i == n_ || j == n_;
  }

  Vec2 centroid(std::size_t t) const
  {
    const auto &tri = mesh_.triangles[t];
    return (mesh_.vertices[tri[0]] + mesh_.vertices[tri[1]] + mesh_.vertices[tri[2]]) /
           3.0;
  }

  std::pair<int, int> cell_of(const Vec2 &p) const
  {
    const int i = std::clamp(static_cast<int>(std::floor(p.x() * n_)), 0, n_ - 1);
    const int j = std::clamp(static_cast<int>(std::floor(p.y() * n_)), 0, n_ - 1);
    return {i, j};
  }

  void background()
  {
    mesh_.vertices.reserve((n_ + 1) * (n_ + 1));
    for (int j = 0; j <= n_; ++j)
    {
      for (int i = 0; i <= n_; ++i)
      {
        mesh_.vertices.emplace_back(static_cast<double>(i) / n_,
                                    static_cast<double>(j) / n_);
      }
    }
    // Alternating diagonals make the triangulation invariant under the symmetries of
    // the square about its center.
    for (int j = 0; j < n_; ++j)
    {
      for (int i = 0; i < n_; ++i)
      {
        const int v00 = vid(i, j), v10 = vid(i + 1, j);
        const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
        if ((i + j) % 2 == 0)
        {
          mesh_.triangles.push_back({v00, v10, v11});
          mesh_.triangles.push_back({v00, v11, v01});
        }
        else
        {
          mesh_.triangles.push_back({v00, v10, v01});
          mesh_.triangles.push_back({v10, v11, v01});
        }
      }
    }
    original_area_ = 0.5 * spacing_ * spacing_;
  }

  void sample_curves()
  {
    near_cell_.assign(n_ * n_, false);
    samples_.resize(geom_.interfaces.size());
    for (std::size_t c = 0; c < geom_.interfaces.size(); ++c)
    {
      const Curve &curve = geom_.interfaces[c];
      const int m = std::max(64, static_cast<int>(std::ceil(16.0 * curve.length() / spacing_)));
      auto &s = samples_[c];
      s.resize(m + 1);
      for (int k = 0; k <= m; ++k)
      {
        s[k] = static_cast<double>(k) / m;
        const auto [ci, cj] = cell_of(curve.point(s[k]));
        for (int dj = -1; dj <= 1; ++dj)
        {
          for (int di = -1; di <= 1; ++di)
          {
            const int ii = ci + di, jj = cj + dj;
            if (ii >= 0 && jj >= 0 && ii < n_ && jj < n_)
            {
              near_cell_[jj * n_ + ii] = true;
            }
          }
        }
      }
    }
    std::set<int> cand;
    for (int j = 0; j < n_; ++j)
    {
      for (int i = 0; i < n_; ++i)
      {
        if (near_cell_[j * n_ + i])
        {
          cand.insert({vid(i, j), vid(i + 1, j), vid(i, j + 1), vid(i + 1, j + 1)});
        }
      }
    }
    candidates_.assign(cand.begin(), cand.end());
  }

  // Nearest interface point over all curves.
  CurveLocation nearest(const Vec2 &p) const { return locate_on_interface(geom_, p); }

  void snap()
  {
    const std::size_t nv = mesh_.vertices.size();
    std::vector<std::vector<int>> incident(nv);
    for (std::size_t t = 0; t < mesh_.triangles.size(); ++t)
    {
      for (int v : mesh_.triangles[t])
      {
        incident[v].push_back(static_cast<int>(t));
      }
    }

    // Sheet edges are pinned to their nearest interior vertex.
    std::vector<bool> pinned(nv, false);
    mesh_.edge_vertices.clear();
    for (std::size_t e = 0; e < geom_.edges.size(); ++e)
    {
      const Vec2 &target = geom_.edges[e].position;
      int best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (int v : candidates_)
      {
        if (on_boundary(v) || pinned[v])
        {
          continue;
        }
        const double d = (mesh_.vertices[v] - target).norm();
        if (d < best_dist - 1e-14)
        {
          best_dist = d;
          best = v;
        }
      }
      if (best < 0)
      {
        throw MeshError("no interior vertex available for sheet edge " + std::to_string(e));
      }
      mesh_.vertices[best] = target;
      pinned[best] = true;
      mesh_.edge_vertices.push_back({best, e});
    }

    std::vector<Vec2> original = mesh_.vertices;
    std::vector<bool> moved(nv, false);
    const double limit = options_.snap_fraction * spacing_;
    for (int v : candidates_)
    {
      if (on_boundary(v) || pinned[v])
      {
        continue;
      }
      const auto loc = nearest(mesh_.vertices[v]);
      if (loc.distance == 0.0 || loc.distance >= limit)
      {
        continue;
      }
      const Curve &curve = geom_.interfaces[loc.curve];
      if (curve.topology() == CurveTopology::open && (loc.param <= 0.0 || loc.param >= 1.0))
      {
        continue;
      }
      mesh_.vertices[v] = curve.point(loc.param);
      moved[v] = true;
    }

    // Undo snaps around triangles that became too flat; every offending vertex is
    // reverted at once so the outcome does not depend on traversal order.
    for (int pass = 0; pass < 100; ++pass)
    {
      std::vector<int> revert;
      for (std::size_t t = 0; t < mesh_.triangles.size(); ++t)
      {
        if (mesh_.triangle_area(t) >= options_.min_area_ratio * original_area_)
        {
          continue;
        }
        bool any = false;
        for (int v : mesh_.triangles[t])
        {
          if (moved[v])
          {
            revert.push_back(v);
            any = true;
          }
        }
        if (!any && mesh_.triangle_area(t) <= 0.0)
        {
          throw MeshError("sheet edge pinning inverted a triangle; refine the mesh");
        }
      }
      if (revert.empty())
      {
        break;
      }
      for (int v : revert)
      {
        mesh_.vertices[v] = original[v];
        moved[v] = false;
      }
    }
  }

  void build_edges()
  {
    edges_.clear();
    edge_index_.clear();
    for (const auto &tri : mesh_.triangles)
    {
      for (int k = 0; k < 3; ++k)
      {
        const int a = tri[k], b = tri[(k + 1) % 3];
        const auto key = edge_key(a, b);
        if (edge_index_.emplace(key, static_cast<int>(edges_.size())).second)
        {
          edges_.push_back({std::min(a, b), std::max(a, b)});
        }
      }
    }
    edge_buckets_.assign(n_ * n_, {});
    for (std::size_t e = 0; e < edges_.size(); ++e)
    {
      const Vec2 &p = mesh_.vertices[edges_[e][0]];
      const Vec2 &q = mesh_.vertices[edges_[e][1]];
      const auto [i0, j0] = cell_of(p.cwiseMin(q));
      const auto [i1, j1] = cell_of(p.cwiseMax(q));
      for (int j = std::max(0, j0 - 1); j <= std::min(n_ - 1, j1 + 1); ++j)
      {
        for (int i = std::max(0, i0 - 1); i <= std::min(n_ - 1, i1 + 1); ++i)
        {
          if (near_cell_[j * n_ + i])
          {
            edge_buckets_[j * n_ + i].push_back(static_cast<int>(e));
          }
        }
      }
    }
  }

  std::vector<Event> curve_events(std::size_t c)
  {
    const Curve &curve = geom_.interfaces[c];
    const double on_tol = 1e-10 * spacing_;
    std::vector<Event> events;
    std::set<int> vertex_seen;

    for (int v : candidates_)
    {
      const auto cl = curve.closest(mesh_.vertices[v]);
      if (cl.distance <= on_tol)
      {
        events.push_back({cl.param, v, -1, 0.0, mesh_.vertices[v]});
        vertex_seen.insert(v);
      }
    }

    const auto &s = samples_[c];
    std::set<std::pair<int, long long>> edge_seen;
    auto add_crossing = [&](int e, double sp, double t) {
      const double merge = 1e-7;
      if (t < merge || t > 1.0 - merge)
      {
        const int v = t < merge ? edges_[e][0] : edges_[e][1];
        if (vertex_seen.insert(v).second)
        {
          events.push_back({sp, v, -1, 0.0, mesh_.vertices[v]});
        }
        return;
      }
      if (!edge_seen.insert(std::make_pair(e, std::llround(sp * 1e12))).second)
      {
        return;
      }
      if (on_boundary(edges_[e][0]) && on_boundary(edges_[e][1]) &&
          boundary_edge(edges_[e][0], edges_[e][1]))
      {
        throw MeshError("interface crosses the cell boundary away from a grid vertex");
      }
      const Vec2 &a = mesh_.vertices[edges_[e][0]];
      const Vec2 &b = mesh_.vertices[edges_[e][1]];
      events.push_back({sp, -1, e, t, a + t * (b - a)});
    };
    for (std::size_t k = 0; k + 1 < s.size(); ++k)
    {
      const Vec2 p = curve.point(s[k]);
      const Vec2 q = curve.point(s[k + 1]);
      const auto [i0, j0] = cell_of(p.cwiseMin(q));
      const auto [i1, j1] = cell_of(p.cwiseMax(q));
      std::set<int> tested;
      for (int j = j0; j <= j1; ++j)
      {
        for (int i = i0; i <= i1; ++i)
        {
          for (int e : edge_buckets_[j * n_ + i])
          {
            if (!tested.insert(e).second)
            {
              continue;
            }
            const Vec2 &a = mesh_.vertices[edges_[e][0]];
            const Vec2 &b = mesh_.vertices[edges_[e][1]];
            const double o1 = orient(a, b, p);
            const double o2 = orient(a, b, q);
            if (o1 == 0.0 && o2 == 0.0)
            {
              // Runs along the edge; its grid vertices are picked up by distance.
              continue;
            }
            if (o1 == 0.0 || o2 == 0.0)
            {
              // A sample lies exactly on the edge line.
              for (const auto &[o, sp] : {std::pair{o1, s[k]}, std::pair{o2, s[k + 1]}})
              {
                const Vec2 x = curve.point(sp);
                const double t = (x - a).dot(b - a) / (b - a).squaredNorm();
                if (o == 0.0 && t >= 0.0 && t <= 1.0)
                {
                  add_crossing(e, sp, t);
                }
              }
              continue;
            }
            const double o3 = orient(p, q, a);
            const double o4 = orient(p, q, b);
            if ((o1 > 0.0) == (o2 > 0.0) || (o3 >= 0.0) == (o4 >= 0.0))
            {
              continue;
            }
            // Bisection on the exact curve between the two samples.
            double lo = s[k], hi = s[k + 1];
            const bool lo_sign = o1 > 0.0;
            for (int it = 0; it < 80 && hi - lo > 1e-16; ++it)
            {
              const double mid = 0.5 * (lo + hi);
              if ((orient(a, b, curve.point(mid)) > 0.0) == lo_sign)
              {
                lo = mid;
              }
              else
              {
                hi = mid;
              }
            }
            const double sp = 0.5 * (lo + hi);
            const Vec2 x = curve.point(sp);
            add_crossing(e, sp,
                         std::clamp((x - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0));
          }
        }
      }
    }

    std::sort(events.begin(), events.end(),
              [](const Event &x, const Event &y) { return x.param < y.param; });
    // Drop duplicates of the same vertex (closed curves meet themselves at s = 0 = 1).
    std::vector<Event> unique;
    for (const auto &ev : events)
    {
      if (!unique.empty())
      {
        const auto &last = unique.back();
        if ((ev.vertex >= 0 && ev.vertex == last.vertex) ||
            (ev.point - last.point).norm() < 1e-12 * spacing_)
        {
          continue;
        }
      }
      unique.push_back(ev);
    }
    if (curve.topology() == CurveTopology::closed && unique.size() > 1 &&
        ((unique.front().vertex >= 0 && unique.front().vertex == unique.back().vertex) ||
         (unique.front().point - unique.back().point).norm() < 1e-12 * spacing_))
    {
      unique.pop_back();
    }
    if (curve.topology() != CurveTopology::closed)
    {
      if (unique.empty() || unique.front().vertex < 0 || unique.back().vertex < 0 ||
          (unique.front().point - curve.point(0.0)).norm() > 1e-12 ||
          (unique.back().point - curve.point(1.0)).norm() > 1e-12)
      {
        throw MeshError(
            "interface endpoints are not mesh vertices; periodic sheets must cross the "
            "cell faces at a grid height");
      }
    }
    if (unique.size() < 2)
    {
      throw MeshError("interface is under-resolved by the mesh");
    }
    return unique;
  }

  bool boundary_edge(int a, int b) const
  {
    const Vec2 &p = mesh_.vertices[a];
    const Vec2 &q = mesh_.vertices[b];
    return (p.x() == q.x() && (p.x() == 0.0 || p.x() == 1.0)) ||
           (p.y() == q.y() && (p.y() == 0.0 || p.y() == 1.0));
  }

  void insert_crossings(std::vector<std::vector<Event>> &events)
  {
    splits_.assign(edges_.size(), {});
    for (std::size_t c = 0; c < events.size(); ++c)
    {
      auto &evs = events[c];
      for (auto &ev : evs)
      {
        if (ev.vertex < 0)
        {
          ev.vertex = static_cast<int>(mesh_.vertices.size());
          mesh_.vertices.push_back(ev.point);
          // Orient the split position from the edge's first stored endpoint.
          splits_[ev.edge].push_back({ev.t, ev.vertex});
        }
      }
      const bool closed = geom_.interfaces[c].topology() == CurveTopology::closed;
      const std::size_t count = closed ? evs.size() : evs.size() - 1;
      for (std::size_t k = 0; k < count; ++k)
      {
        const int a = evs[k].vertex;
        const int b = evs[(k + 1) % evs.size()].vertex;
        if (a != b)
        {
          mesh_.interface_segments.push_back({a, b, c});
        }
      }
    }
    for (auto &sp : splits_)
    {
      std::sort(sp.begin(), sp.end());
    }
  }

  // Points of edge (a -> b) including both ends, in order from a.
  std::vector<int> edge_chain(int a, int b) const
  {
    const int e = edge_index_.at(edge_key(a, b));
    std::vector<int> chain{a};
    const auto &sp = splits_[e];
    if (edges_[e][0] == a)
    {
      for (const auto &[t, v] : sp)
      {
        chain.push_back(v);
      }
    }
    else
    {
      for (auto it = sp.rbegin(); it != sp.rend(); ++it)
      {
        chain.push_back(it->second);
      }
    }
    chain.push_back(b);
    return chain;
  }

  void retriangulate()
  {
    std::unordered_map<int, std::vector<int>> seg_of_vertex;
    for (std::size_t s = 0; s < mesh_.interface_segments.size(); ++s)
    {
      seg_of_vertex[mesh_.interface_segments[s].v0].push_back(static_cast<int>(s));
      seg_of_vertex[mesh_.interface_segments[s].v1].push_back(static_cast<int>(s));
    }

    std::vector<std::array<int, 3>> result;
    result.reserve(mesh_.triangles.size() + 4 * mesh_.interface_segments.size());
    for (const auto &tri : mesh_.triangles)
    {
      // Boundary loop with the side index of every point (corners belong to two sides).
      std::vector<int> loop;
      std::map<int, std::vector<int>> sides;
      for (int k = 0; k < 3; ++k)
      {
        const auto chain = edge_chain(tri[k], tri[(k + 1) % 3]);
        for (std::size_t m = 0; m < chain.size(); ++m)
        {
          sides[chain[m]].push_back(k);
          if (m + 1 < chain.size())
          {
            loop.push_back(chain[m]);
          }
        }
      }

      std::vector<std::pair<int, int>> chords;
      for (int v : loop)
      {
        auto it = seg_of_vertex.find(v);
        if (it == seg_of_vertex.end())
        {
          continue;
        }
        for (int s : it->second)
        {
          const auto &seg = mesh_.interface_segments[s];
          if (seg.v0 != v)
          {
            continue;
          }
          auto other = sides.find(seg.v1);
          if (other == sides.end())
          {
            continue;
          }
          bool shared_side = false;
          for (int a : sides[v])
          {
            for (int b : other->second)
            {
              shared_side = shared_side || a == b;
            }
          }
          if (!shared_side)
          {
            chords.emplace_back(seg.v0, seg.v1);
          }
        }
      }

      if (loop.size() == 3 && chords.empty())
      {
        result.push_back(tri);
        continue;
      }
      std::vector<std::vector<int>> pieces{loop};
      for (const auto &[a, b] : chords)
      {
        for (std::size_t p = 0; p < pieces.size(); ++p)
        {
          auto &poly = pieces[p];
          auto ia = std::find(poly.begin(), poly.end(), a);
          auto ib = std::find(poly.begin(), poly.end(), b);
          if (ia == poly.end() || ib == poly.end())
          {
            continue;
          }
          std::size_t i = ia - poly.begin(), j = ib - poly.begin();
          if (i > j)
          {
            std::swap(i, j);
          }
          if (j - i == 1 || (i == 0 && j == poly.size() - 1))
          {
            break;  // already a polygon side
          }
          std::vector<int> first(poly.begin() + i, poly.begin() + j + 1);
          std::vector<int> second(poly.begin() + j, poly.end());
          second.insert(second.end(), poly.begin(), poly.begin() + i + 1);
          poly = std::move(first);
          pieces.push_back(std::move(second));
          break;
        }
      }
      for (auto &poly : pieces)
      {
        clip_ears(poly, result);
      }
    }
    mesh_.triangles = std::move(result);
  }

  void clip_ears(std::vector<int> poly, std::vector<std::array<int, 3>> &out) const
  {
    const auto &X = mesh_.vertices;
    const double area_eps = 1e-12 * spacing_ * spacing_;
    while (poly.size() > 3)
    {
      const std::size_t m = poly.size();
      int best = -1;
      double best_quality = -1.0;
      for (std::size_t i = 0; i < m; ++i)
      {
        const int u = poly[(i + m - 1) % m], v = poly[i], w = poly[(i + 1) % m];
        if (orient(X[u], X[v], X[w]) <= area_eps)
        {
          continue;
        }
        bool blocked = false;
        for (std::size_t k = 0; k < m && !blocked; ++k)
        {
          const int p = poly[k];
          if (p == u || p == v || p == w)
          {
            continue;
          }
          blocked = orient(X[u], X[v], X[p]) >= -area_eps &&
                    orient(X[v], X[w], X[p]) >= -area_eps &&
                    orient(X[w], X[u], X[p]) >= -area_eps;
        }
        if (blocked)
        {
          continue;
        }
        const double q = min_angle(X[u], X[v], X[w]);
        if (q > best_quality)
        {
          best_quality = q;
          best = static_cast<int>(i);
        }
      }
      if (best < 0)
      {
        throw MeshError("cannot re-triangulate a cut element");
      }
      const std::size_t i = best;
      out.push_back({poly[(i + m - 1) % m], poly[i], poly[(i + 1) % m]});
      poly.erase(poly.begin() + i);
    }
    if (orient(X[poly[0]], X[poly[1]], X[poly[2]]) <= 0.0)
    {
      throw MeshError("re-triangulation produced a degenerate element");
    }
    out.push_back({poly[0], poly[1], poly[2]});
  }

  void classify_regions()
  {
    mesh_.regions.resize(mesh_.triangles.size());
    for (std::size_t t = 0; t < mesh_.triangles.size(); ++t)
    {
      mesh_.regions[t] = geom_.in_inclusion(centroid(t)) ? Region::inclusion : Region::host;
    }
  }

  void periodic_pairs()
  {
    for (int j = 0; j <= n_; ++j)
    {
      mesh_.periodic_pairs.push_back({vid(n_, j), vid(0, j), 0});
    }
    for (int i = 0; i < n_; ++i)
    {
      mesh_.periodic_pairs.push_back({vid(i, n_), vid(i, 0), 1});
    }
  }

  const UnitCellGeometry &geom_;
  MeshOptions options_;
  Mesh mesh_;
  int n_ = 0;
  double spacing_ = 0.0;
  double original_area_ = 0.0;
  std::vector<bool> near_cell_;
  std::vector<int> candidates_;
  std::vector<std::vector<double>> samples_;
  std::vector<std::array<int, 2>> edges_;
  std::unordered_map<std::uint64_t, int> edge_index_;
  std::vector<std::vector<int>> edge_buckets_;
  std::vector<std::vector<std::pair<double, int>>> splits_;
};

int find_root(std::vector<int> &parent, int v)
{
  while (parent[v] != v)
  {
    parent[v] = parent[parent[v]];
    v = parent[v];
  }
  return v;
}

}  // namespace

double Mesh::triangle_area(std::size_t t) const
{
  const auto &tri = triangles[t];
  return 0.5 * orient(vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]);
}

double Mesh::interface_length() const
{
  double total = 0.0;
  for (const auto &s : interface_segments)
  {
    total += (vertices[s.v1] - vertices[s.v0]).norm();
  }
  return total;
}

double Mesh::max_diameter() const
{
  double d = 0.0;
  for (const auto &tri : triangles)
  {
    for (int k = 0; k < 3; ++k)
    {
      d = std::max(d, (vertices[tri[k]] - vertices[tri[(k + 1) % 3]]).norm());
    }
  }
  return d;
}

PeriodicClasses Mesh::periodic_classes() const
{
  const int nv = static_cast<int>(vertices.size());
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto &p : periodic_pairs)
  {
    const int a = find_root(parent, p.image);
    const int b = find_root(parent, p.source);
    if (a != b)
    {
      parent[std::max(a, b)] = std::min(a, b);
    }
  }
  PeriodicClasses classes;
  classes.of_vertex.assign(nv, -1);
  std::vector<int> label(nv, -1);
  for (int v = 0; v < nv; ++v)
  {
    const int r = find_root(parent, v);
    if (label[r] < 0)
    {
      label[r] = classes.count++;
    }
    classes.of_vertex[v] = label[r];
  }
  return classes;
}

std::string Mesh::id() const
{
  // FNV-1a over the raw vertex and connectivity data.
  std::uint64_t hash = 14695981039346656037ull;
  auto mix = [&hash](const void *data, std::size_t bytes) {
    const auto *p = static_cast<const unsigned char *>(data);
    for (std::size_t i = 0; i < bytes; ++i)
    {
      hash ^= p[i];
      hash *= 1099511628211ull;
    }
  };
  for (const auto &v : vertices)
  {
    mix(v.data(), 2 * sizeof(double));
  }
  for (const auto &t : triangles)
  {
    mix(t.data(), sizeof(t));
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

Mesh generate_mesh(const UnitCellGeometry &geom, double h, const MeshOptions &options)
{
  return Builder(geom, h, options).build();
}

MeshReport check_mesh(const Mesh &mesh)
{
  MeshReport report;
  report.min_area = std::numeric_limits<double>::infinity();
  std::set<std::uint64_t> edges;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const double area = mesh.triangle_area(t);
    report.min_area = std::min(report.min_area, area);
    if (!(area > 0.0))
    {
      report.oriented = false;
      report.issues.push_back("triangle " + std::to_string(t) + " has area " +
                              std::to_string(area));
    }
    const auto &tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k)
    {
      edges.insert(edge_key(tri[k], tri[(k + 1) % 3]));
    }
  }
  for (std::size_t s = 0; s < mesh.interface_segments.size(); ++s)
  {
    const auto &seg = mesh.interface_segments[s];
    if (!edges.count(edge_key(seg.v0, seg.v1)))
    {
      report.conforming = false;
      report.issues.push_back("interface segment " + std::to_string(s) +
                              " is not a triangle edge");
    }
  }
  const double tol = 1e-12 * std::max(mesh.h, 1e-300);
  std::set<int> images;
  for (const auto &p : mesh.periodic_pairs)
  {
    const Vec2 &a = mesh.vertices[p.image];
    const Vec2 &b = mesh.vertices[p.source];
    const int other = 1 - p.axis;
    if (std::abs(a[p.axis] - 1.0) > tol || std::abs(b[p.axis]) > tol ||
        std::abs(a[other] - b[other]) > tol)
    {
      report.periodic = false;
      report.issues.push_back("periodic pair (" + std::to_string(p.image) + ", " +
                              std::to_string(p.source) + ") is misaligned");
    }
    if (!images.insert(p.image * 2 + p.axis).second)
    {
      report.periodic = false;
      report.issues.push_back("vertex paired twice along one axis");
    }
  }
  return report;
}

void write_mesh(std::ostream &os, const Mesh &mesh)
{
  os << "# plasmahom mesh\n";
  os << "format_version 1\n";
  os << std::setprecision(17);
  os << "h " << mesh.h << "\n";
  os << "grid_cells " << mesh.grid_cells << "\n";
  os << "vertices " << mesh.vertices.size() << "\n";
  for (const auto &v : mesh.vertices)
  {
    os << v.x() << ' ' << v.y() << '\n';
  }
  os << "triangles " << mesh.triangles.size() << "\n";
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t)
  {
    const auto &tri = mesh.triangles[t];
    const int region = t < mesh.regions.size() ? static_cast<int>(mesh.regions[t]) : 0;
    os << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << region << '\n';
  }
  os << "interface_segments " << mesh.interface_segments.size() << "\n";
  for (const auto &s : mesh.interface_segments)
  {
    os << s.v0 << ' ' << s.v1 << ' ' << s.curve << '\n';
  }
  os << "edge_vertices " << mesh.edge_vertices.size() << "\n";
  for (const auto &e : mesh.edge_vertices)
  {
    os << e.vertex << ' ' << e.edge << '\n';
  }
  os << "periodic_pairs " << mesh.periodic_pairs.size() << "\n";
  for (const auto &p : mesh.periodic_pairs)
  {
    os << p.image << ' ' << p.source << ' ' << p.axis << '\n';
  }
  os << "end\n";
}

Mesh read_mesh(std::istream &is)
{
  Mesh mesh;
  std::string line;
  auto expect = [&](const std::string &key) -> std::size_t {
    std::string word;
    while (is >> word)
    {
      if (word.front() == '#')
      {
        std::getline(is, line);
        continue;
      }
      if (word != key)
      {
        throw MeshError("mesh file: expected '" + key + "', found '" + word + "'");
      }
      std::size_t value = 0;
      if (!(is >> value))
      {
        throw MeshError("mesh file: missing value after '" + key + "'");
      }
      return value;
    }
    throw MeshError("mesh file: unexpected end of input before '" + key + "'");
  };
  const auto version = expect("format_version");
  if (version != 1)
  {
    throw MeshError("mesh file: unsupported format version " + std::to_string(version));
  }
  std::string word;
  is >> word;
  if (word != "h" || !(is >> mesh.h))
  {
    throw MeshError("mesh file: missing h");
  }
  mesh.grid_cells = static_cast<int>(expect("grid_cells"));
  mesh.vertices.resize(expect("vertices"));
  for (auto &v : mesh.vertices)
  {
    if (!(is >> v.x() >> v.y()))
    {
      throw MeshError("mesh file: truncated vertex section");
    }
  }
  const std::size_t nt = expect("triangles");
  mesh.triangles.resize(nt);
  mesh.regions.resize(nt);
  for (std::size_t t = 0; t < nt; ++t)
  {
    int region = 0;
    auto &tri = mesh.triangles[t];
    if (!(is >> tri[0] >> tri[1] >> tri[2] >> region))
    {
      throw MeshError("mesh file: truncated triangle section");
    }
    mesh.regions[t] = static_cast<Region>(region);
  }
  mesh.interface_segments.resize(expect("interface_segments"));
  for (auto &s : mesh.interface_segments)
  {
    if (!(is >> s.v0 >> s.v1 >> s.curve))
    {
      throw MeshError("mesh file: truncated interface section");
    }
  }
  mesh.edge_vertices.resize(expect("edge_vertices"));
  for (auto &e : mesh.edge_vertices)
  {
    if (!(is >> e.vertex >> e.edge))
    {
      throw MeshError("mesh file: truncated edge-vertex section");
    }
  }
  mesh.periodic_pairs.resize(expect("periodic_pairs"));
  for (auto &p : mesh.periodic_pairs)
  {
    if (!(is >> p.image >> p.source >> p.axis))
    {
      throw MeshError("mesh file: truncated periodic section");
    }
  }
  is >> word;
  if (word != "end")
  {
    throw MeshError("mesh file: missing end marker");
  }
  return mesh;
}

}  // namespace plasmahom
