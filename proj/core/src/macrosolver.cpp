// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include "plasmahom/macrosolver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "plasmahom/errors.hpp"

namespace plasmahom
{

namespace
{

bool is_zero_or_bad(cplx v)
{
  return v == 0.0 || !std::isfinite(v.real()) || !std::isfinite(v.imag());
}

struct Stretch
{
  double lo_end = 0.0;   // PML occupies [0, lo_end] and [hi_start, length]
  double hi_start = 0.0;
  double depth = 0.0;
  double sigma_max = 0.0;
  int order = 3;
  double omega = 1.0;
  bool active = true;

  cplx operator()(double x) const
  {
    if (!active)
    {
      return 1.0;
    }
    double d = 0.0;
    if (x < lo_end)
    {
      d = (lo_end - x) / depth;
    }
    else if (x > hi_start)
    {
      d = (x - hi_start) / depth;
    }
    if (d <= 0.0)
    {
      return 1.0;
    }
    return cplx(1.0, sigma_max * std::pow(std::min(d, 1.0), order) / omega);
  }

  bool inside(double x) const { return active && (x < lo_end || x > hi_start); }
};

Stretch make_stretch(const MacroProblem &p, double length, double h, bool active)
{
  Stretch s;
  s.active = active;
  s.depth = p.pml.cells * h;
  s.lo_end = s.depth;
  s.hi_start = length - s.depth;
  s.order = p.pml.order;
  s.omega = p.omega;
  // Round-trip reflection of about 1e-8 at normal incidence in vacuum.
  s.sigma_max = p.pml.strength > 0.0
                    ? p.pml.strength
                    : (p.pml.order + 1) * std::log(1e8) / (2.0 * std::max(s.depth, 1e-300));
  return s;
}

struct SourceSampler
{
  const MacroProblem &p;

  double radius(const MacroSource &s) const
  {
    return s.radius > 0.0 ? s.radius : 2.0 * std::max(p.dx(), p.dy());
  }

  // Current density at (x, y); `face_y` is the face row for sheet sources.
  Eigen::Vector2cd current(double x, double y) const
  {
    Eigen::Vector2cd j = Eigen::Vector2cd::Zero();
    for (const auto &s : p.sources)
    {
      if (s.kind == SourceKind::current_patch)
      {
        const double r = radius(s);
        const double d2 = (x - s.x) * (x - s.x) + (y - s.y) * (y - s.y);
        if (d2 > 16.0 * r * r)
        {
          continue;
        }
        const double g = std::exp(-d2 / (2.0 * r * r)) / (2.0 * std::numbers::pi * r * r);
        const Eigen::Vector2d dir = s.direction.normalized();
        j += s.amplitude * g * dir.cast<cplx>();
      }
    }
    return j;
  }
};

// Arithmetic mean of the two adjacent cells: the face component is tangential to any
// interface through the face.
cplx face_eps(const MacroProblem &p, double xa, double ya, double xb, double yb,
              bool has_a, bool has_b, int component)
{
  auto wrap = [&](double x) { return p.periodic_x ? x - p.lx * std::floor(x / p.lx) : x; };
  if (has_a && has_b)
  {
    return 0.5 * (p.eps_at(wrap(xa), ya)[component] + p.eps_at(wrap(xb), yb)[component]);
  }
  return has_a ? p.eps_at(wrap(xa), ya)[component] : p.eps_at(wrap(xb), yb)[component];
}

int sheet_row(const MacroProblem &p, const MacroSource &s)
{
  return static_cast<int>(std::lround(s.y / p.dy()));
}

}  // namespace

std::array<cplx, 3> MacroProblem::eps_at(double x, double y) const
{
  std::array<cplx, 3> e = ambient;
  for (const auto &r : regions)
  {
    if (r.contains(x, y))
    {
      e = r.eps;
    }
  }
  return e;
}

void MacroProblem::validate() const
{
  if (!(lx > 0.0 && ly > 0.0))
  {
    throw InvalidParameterError("macro: domain extents must be positive");
  }
  if (nx < 4 || ny < 4)
  {
    throw InvalidParameterError("macro: at least 4 cells per direction are required");
  }
  if (!(omega > 0.0) || !(mu > 0.0))
  {
    throw InvalidParameterError("macro: omega and mu must be positive");
  }
  if (pml.cells < 1 || 2 * pml.cells >= ny || (!periodic_x && 2 * pml.cells >= nx))
  {
    throw InvalidParameterError("macro: PML layers must lie strictly inside the domain");
  }
  if (pml.order < 0)
  {
    throw InvalidParameterError("macro: PML order must be nonnegative");
  }
  auto check_eps = [](const std::array<cplx, 3> &e, const std::string &where) {
    for (const auto &v : e)
    {
      if (is_zero_or_bad(v))
      {
        throw SolverError("macro: permittivity in " + where +
                          " is zero or not finite; the system is singular. Include the "
                          "material loss (a small positive Im eps) as a floor");
      }
    }
  };
  check_eps(ambient, "the ambient medium");
  for (std::size_t k = 0; k < regions.size(); ++k)
  {
    check_eps(regions[k].eps, "region " + std::to_string(k));
  }
  const double px = periodic_x ? 0.0 : pml.cells * dx();
  const double py = pml.cells * dy();
  for (std::size_t k = 0; k < sources.size(); ++k)
  {
    const auto &s = sources[k];
    double rx = 0.0, ry = 0.0;
    if (s.kind == SourceKind::current_patch)
    {
      const double r = s.radius > 0.0 ? s.radius : 2.0 * std::max(dx(), dy());
      rx = ry = 4.0 * r;
      if (s.direction.norm() == 0.0)
      {
        throw InvalidParameterError("macro: source " + std::to_string(k) +
                                    " has a zero direction");
      }
    }
    const bool in_y = s.y - ry > py && s.y + ry < ly - py;
    const bool in_x =
        s.kind == SourceKind::sheet_current || (s.x - rx > px && s.x + rx < lx - px);
    if (!in_x || !in_y)
    {
      throw InvalidParameterError("macro: support of source " + std::to_string(k) +
                                  " overlaps the PML or leaves the domain");
    }
  }
}

MacroField solve_macro(const MacroProblem &p, double tol)
{
  if (!(tol > 0.0 && tol <= 1e-6))
  {
    throw InvalidParameterError("macro: tolerance must lie in (0, 1e-6]");
  }
  p.validate();
  const int nx = p.nx, ny = p.ny;
  const double dx = p.dx(), dy = p.dy();
  const Stretch sx = make_stretch(p, p.lx, dx, !p.periodic_x);
  const Stretch sy = make_stretch(p, p.ly, dy, true);
  const SourceSampler sampler{p};
  const cplx iw = kI * p.omega;

  // Face data: Ex faces (i, j - 1/2), j = 0..ny; Ey faces (i - 1/2, j), i = 0..nx.
  const Eigen::Index nex = static_cast<Eigen::Index>(nx) * (ny + 1);
  const Eigen::Index ney = static_cast<Eigen::Index>(nx + 1) * ny;
  Eigen::VectorXcd epsx(nex), jx(nex), sfy(nex);
  Eigen::VectorXcd epsy(ney), jy(ney), sfx(ney);
  for (int j = 0; j <= ny; ++j)
  {
    for (int i = 0; i < nx; ++i)
    {
      const double x = (i + 0.5) * dx, y = j * dy;
      const Eigen::Index k = static_cast<Eigen::Index>(j) * nx + i;
      epsx[k] = face_eps(p, x, y - 0.5 * dy, x, y + 0.5 * dy, j > 0, j < ny, 0);
      jx[k] = sampler.current(x, y)[0];
      sfy[k] = sy(y);
    }
  }
  for (int j = 0; j < ny; ++j)
  {
    for (int i = 0; i <= nx; ++i)
    {
      const double x = i * dx, y = (j + 0.5) * dy;
      const Eigen::Index k = static_cast<Eigen::Index>(j) * (nx + 1) + i;
      epsy[k] = face_eps(p, x - 0.5 * dx, y, x + 0.5 * dx, y, i > 0 || p.periodic_x,
                         i < nx || p.periodic_x, 1);
      jy[k] = sampler.current(x, y)[1];
      sfx[k] = sx(x);
    }
  }
  for (const auto &s : p.sources)
  {
    if (s.kind != SourceKind::sheet_current)
    {
      continue;
    }
    const int row = sheet_row(p, s);
    for (int i = 0; i < nx; ++i)
    {
      const double x = (i + 0.5) * dx;
      if (p.periodic_x || !sx.inside(x))
      {
        jx[static_cast<Eigen::Index>(row) * nx + i] += s.amplitude / dy;
      }
    }
  }
  if (p.periodic_x)
  {
    for (int j = 0; j < ny; ++j)
    {
      const Eigen::Index base = static_cast<Eigen::Index>(j) * (nx + 1);
      epsy[base] = epsy[base + nx];
      jy[base] = jy[base + nx];
    }
  }

  const Eigen::Index n = static_cast<Eigen::Index>(nx) * ny;
  std::vector<Eigen::Triplet<cplx>> triplets;
  triplets.reserve(5 * n);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
  auto cell = [nx](int i, int j) { return static_cast<Eigen::Index>(j) * nx + i; };
  auto exi = [nx](int i, int j) { return static_cast<Eigen::Index>(j) * nx + i; };
  auto eyi = [nx](int i, int j) { return static_cast<Eigen::Index>(j) * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
  {
    const cplx syc = sy((j + 0.5) * dy);
    for (int i = 0; i < nx; ++i)
    {
      const cplx sxc = sx((i + 0.5) * dx);
      const Eigen::Index r = cell(i, j);
      cplx diag = p.omega * p.omega * p.mu * sxc * syc * dx * dy;
      // x faces at i - 1/2 (Ey index i) and i + 1/2 (index i + 1).
      for (int side = 0; side < 2; ++side)
      {
        const Eigen::Index f = eyi(i + side, j);
        const cplx c = syc * dy / (dx * sfx[f] * epsy[f]);
        diag -= c;
        int nb = side == 0 ? i - 1 : i + 1;
        if (p.periodic_x)
        {
          nb = (nb + nx) % nx;
        }
        if (nb >= 0 && nb < nx)
        {
          triplets.emplace_back(r, cell(nb, j), c);
        }
        const cplx flux = jy[f] / (sfx[f] * epsy[f]);
        rhs[r] += (side == 0 ? 1.0 : -1.0) * syc * dy * flux;
      }
      for (int side = 0; side < 2; ++side)
      {
        const Eigen::Index f = exi(i, j + side);
        const cplx c = sxc * dx / (dy * sfy[f] * epsx[f]);
        diag -= c;
        const int nb = side == 0 ? j - 1 : j + 1;
        if (nb >= 0 && nb < ny)
        {
          triplets.emplace_back(r, cell(i, nb), c);
        }
        const cplx flux = jx[f] / (sfy[f] * epsx[f]);
        rhs[r] += (side == 0 ? -1.0 : 1.0) * sxc * dx * flux;
      }
      triplets.emplace_back(r, r, diag);
    }
  }
  for (const auto &s : p.sources)
  {
    if (s.kind == SourceKind::magnetic_point)
    {
      const int i = std::clamp(static_cast<int>(s.x / dx), 0, nx - 1);
      const int j = std::clamp(static_cast<int>(s.y / dy), 0, ny - 1);
      rhs[cell(i, j)] += s.amplitude * dx * dy;
    }
  }

  MacroField f;
  f.nx = nx;
  f.ny = ny;
  f.dx = dx;
  f.dy = dy;
  if (rhs.norm() == 0.0)
  {
    f.h = Eigen::VectorXcd::Zero(n);
  }
  else
  {
    Eigen::SparseMatrix<cplx> a(n, n);
    a.setFromTriplets(triplets.begin(), triplets.end());
    a.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(a);
    lu.factorize(a);
    if (lu.info() != Eigen::Success)
    {
      throw SolverError("macro: LU factorization failed (singular system; add a loss "
                        "floor to near-zero permittivities)");
    }
    f.h = lu.solve(rhs);
    f.h += lu.solve(Eigen::VectorXcd(rhs - a * f.h));
    f.residual = (a * f.h - rhs).norm() / rhs.norm();
    if (!std::isfinite(f.residual) || f.residual > tol)
    {
      throw SolverError("macro: residual above tolerance", 0, f.residual);
    }
  }

  // Recover E on the faces; H vanishes outside the domain unless periodic in x.
  auto h_or_zero = [&](int i, int j) -> cplx {
    if (p.periodic_x)
    {
      i = (i + nx) % nx;
    }
    if (i < 0 || i >= nx || j < 0 || j >= ny)
    {
      return 0.0;
    }
    return f.h[cell(i, j)];
  };
  f.ex.resize(nex);
  for (int j = 0; j <= ny; ++j)
  {
    for (int i = 0; i < nx; ++i)
    {
      const Eigen::Index k = exi(i, j);
      const cplx dh = (h_or_zero(i, j) - h_or_zero(i, j - 1)) / dy;
      f.ex[k] = (jx[k] - dh / sfy[k]) / (iw * epsx[k]);
    }
  }
  f.ey.resize(ney);
  for (int j = 0; j < ny; ++j)
  {
    for (int i = 0; i <= nx; ++i)
    {
      const Eigen::Index k = eyi(i, j);
      const cplx dh = (h_or_zero(i, j) - h_or_zero(i - 1, j)) / dx;
      f.ey[k] = (dh / sfx[k] + jy[k]) / (iw * epsy[k]);
    }
  }
  return f;
}

double divergence_check(const MacroField &f, const MacroProblem &p, int margin)
{
  const int nx = f.nx, ny = f.ny;
  const double dx = f.dx, dy = f.dy;
  const SourceSampler sampler{p};
  const cplx iw = kI * p.omega;
  const int px = p.periodic_x ? 0 : p.pml.cells;
  const int py = p.pml.cells;
  auto jx_at = [&](int i, int j) {
    cplx v = sampler.current((i + 0.5) * dx, j * dy)[0];
    for (const auto &s : p.sources)
    {
      if (s.kind == SourceKind::sheet_current && sheet_row(p, s) == j)
      {
        v += s.amplitude / dy;
      }
    }
    return v;
  };
  auto jy_at = [&](int i, int j) { return sampler.current(i * dx, (j + 0.5) * dy)[1]; };
  auto dx_face = [&](int i, int j) {
    const Eigen::Index k = static_cast<Eigen::Index>(j) * nx + i;
    const double x = (i + 0.5) * dx, y = j * dy;
    return face_eps(p, x, y - 0.5 * dy, x, y + 0.5 * dy, j > 0, j < ny, 0) * f.ex[k];
  };
  auto dy_face = [&](int i, int j) {
    const Eigen::Index k = static_cast<Eigen::Index>(j) * (nx + 1) + i;
    const double x = i * dx, y = (j + 0.5) * dy;
    return face_eps(p, x - 0.5 * dx, y, x + 0.5 * dx, y, i > 0 || p.periodic_x,
                    i < nx || p.periodic_x, 1) *
           f.ey[k];
  };
  double num = 0.0, src = 0.0, field = 0.0;
  // Corner (i - 1/2, j - 1/2) between cells i - 1, i and rows j - 1, j.
  for (int j = py + margin + 1; j < ny - py - margin; ++j)
  {
    for (int i = px + margin + 1; i < nx - px - margin; ++i)
    {
      const cplx div_d = (dx_face(i, j) - dx_face(i - 1, j)) / dx +
                         (dy_face(i, j) - dy_face(i, j - 1)) / dy;
      const cplx div_j = ((jx_at(i, j) - jx_at(i - 1, j)) / dx +
                          (jy_at(i, j) - jy_at(i, j - 1)) / dy) /
                         iw;
      num += std::norm(div_d - div_j);
      src += std::norm(div_j);
      field += (std::norm(dx_face(i, j)) + std::norm(dy_face(i, j))) /
               (std::min(dx, dy) * std::min(dx, dy));
    }
  }
  const double scale = std::sqrt(src) + std::sqrt(field);
  return scale > 0.0 ? std::sqrt(num) / scale : 0.0;
}

double phase_spread_degrees(const MacroField &f, const EpsRegion &rect, double threshold)
{
  double max_abs = 0.0;
  for (int j = 0; j < f.ny; ++j)
  {
    for (int i = 0; i < f.nx; ++i)
    {
      if (rect.contains(f.x_center(i), f.y_center(j)))
      {
        max_abs = std::max(max_abs, std::abs(f.h_at(i, j)));
      }
    }
  }
  double spread = 0.0;
  for (int i = 0; i < f.nx; ++i)
  {
    if (f.x_center(i) < rect.x0 || f.x_center(i) > rect.x1)
    {
      continue;
    }
    cplx ref = 0.0;
    for (int j = 0; j < f.ny; ++j)
    {
      if (rect.contains(f.x_center(i), f.y_center(j)) &&
          std::abs(f.h_at(i, j)) > std::abs(ref))
      {
        ref = f.h_at(i, j);
      }
    }
    double lo = 0.0, hi = 0.0;
    int count = 0;
    for (int j = 0; j < f.ny; ++j)
    {
      const cplx v = f.h_at(i, j);
      if (!rect.contains(f.x_center(i), f.y_center(j)) || std::abs(v) <= threshold * max_abs)
      {
        continue;
      }
      const double a = std::arg(v / ref);
      lo = std::min(lo, a);
      hi = std::max(hi, a);
      ++count;
    }
    if (count >= 2)
    {
      spread = std::max(spread, (hi - lo) * 180.0 / std::numbers::pi);
    }
  }
  return spread;
}

double interior_energy(const MacroField &f, const MacroProblem &p)
{
  const int px = p.periodic_x ? 0 : p.pml.cells;
  const int py = p.pml.cells;
  double e = 0.0;
  for (int j = py; j < f.ny - py; ++j)
  {
    for (int i = px; i < f.nx - px; ++i)
    {
      e += std::norm(f.h_at(i, j)) * f.dx * f.dy;
    }
  }
  return e;
}

double line_amplitude(const MacroField &f, double y, double x0, double x1)
{
  // Linear interpolation between the two cell rows around y.
  const double t = std::clamp(y / f.dy - 0.5, 0.0, f.ny - 1.0);
  const int j0 = std::min(static_cast<int>(t), f.ny - 2);
  const double w = t - j0;
  double sum = 0.0;
  int count = 0;
  for (int i = 0; i < f.nx; ++i)
  {
    const double x = f.x_center(i);
    if (x >= x0 && x <= x1)
    {
      sum += std::abs((1.0 - w) * f.h_at(i, j0) + w * f.h_at(i, j0 + 1));
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

double region_energy(const MacroField &f, const EpsRegion &rect)
{
  double e = 0.0;
  for (int j = 0; j < f.ny; ++j)
  {
    for (int i = 0; i < f.nx; ++i)
    {
      if (rect.contains(f.x_center(i), f.y_center(j)))
      {
        e += std::norm(f.h_at(i, j)) * f.dx * f.dy;
      }
    }
  }
  return e;
}

namespace
{

template <typename T>
void put(std::ostream &os, T value)
{
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
  {
    std::reverse(bytes, bytes + sizeof(T));
  }
  os.write(reinterpret_cast<const char *>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream &is)
{
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char *>(bytes), sizeof(T)))
  {
    throw Error("field dump truncated");
  }
  if constexpr (std::endian::native == std::endian::big)
  {
    std::reverse(bytes, bytes + sizeof(T));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

void put_vector(std::ostream &os, const Eigen::VectorXcd &v)
{
  for (Eigen::Index k = 0; k < v.size(); ++k)
  {
    put(os, v[k].real());
    put(os, v[k].imag());
  }
}

Eigen::VectorXcd get_vector(std::istream &is, Eigen::Index n)
{
  Eigen::VectorXcd v(n);
  for (Eigen::Index k = 0; k < n; ++k)
  {
    const double re = get<double>(is);
    const double im = get<double>(is);
    v[k] = cplx(re, im);
  }
  return v;
}

}  // namespace

void write_field_binary(std::ostream &os, const MacroField &f, double omega)
{
  os.write("PHMF", 4);
  put<std::uint32_t>(os, 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.nx));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.ny));
  put(os, f.dx);
  put(os, f.dy);
  put(os, omega);
  put_vector(os, f.h);
  put_vector(os, f.ex);
  put_vector(os, f.ey);
}

MacroField read_field_binary(std::istream &is, double *omega)
{
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "PHMF", 4) != 0)
  {
    throw Error("not a plasmahom field dump");
  }
  if (get<std::uint32_t>(is) != 1)
  {
    throw Error("unsupported field dump version");
  }
  MacroField f;
  f.nx = static_cast<int>(get<std::uint32_t>(is));
  f.ny = static_cast<int>(get<std::uint32_t>(is));
  f.dx = get<double>(is);
  f.dy = get<double>(is);
  const double w = get<double>(is);
  if (omega)
  {
    *omega = w;
  }
  const Eigen::Index nx = f.nx, ny = f.ny;
  f.h = get_vector(is, nx * ny);
  f.ex = get_vector(is, nx * (ny + 1));
  f.ey = get_vector(is, (nx + 1) * ny);
  return f;
}

namespace
{

std::string hex_color(double r, double g, double b)
{
  char buf[8];
  auto c = [](double v) { return static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255)); };
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c(r), c(g), c(b));
  return buf;
}

// Cyclic colour for a phase in [-pi, pi].
std::string phase_color(double a)
{
  const double t = (a + std::numbers::pi) / (2.0 * std::numbers::pi);
  const double r = 0.5 + 0.5 * std::cos(2.0 * std::numbers::pi * t);
  const double g = 0.5 + 0.5 * std::cos(2.0 * std::numbers::pi * (t - 1.0 / 3.0));
  const double b = 0.5 + 0.5 * std::cos(2.0 * std::numbers::pi * (t - 2.0 / 3.0));
  return hex_color(r, g, b);
}

}  // namespace

std::string field_svg(const MacroField &f, const MacroProblem &p)
{
  const int step = std::max({1, f.nx / 120, f.ny / 120});
  const int cx = (f.nx + step - 1) / step, cy = (f.ny + step - 1) / step;
  const double px = 3.0;
  const double panel_w = cx * px, panel_h = cy * px;
  double max_abs = 0.0;
  for (Eigen::Index k = 0; k < f.h.size(); ++k)
  {
    max_abs = std::max(max_abs, std::abs(f.h[k]));
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << 2 * panel_w + 60
     << "\" height=\"" << panel_h + 50 << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"20\" y=\"18\">|H|</text>\n";
  os << "<text x=\"" << panel_w + 40 << "\" y=\"18\">arg H</text>\n";
  for (int panel = 0; panel < 2; ++panel)
  {
    const double ox = 20 + panel * (panel_w + 20);
    const double oy = 28;
    for (int bj = 0; bj < cy; ++bj)
    {
      for (int bi = 0; bi < cx; ++bi)
      {
        const int i = std::min(bi * step, f.nx - 1);
        const int j = std::min(bj * step, f.ny - 1);
        const cplx v = f.h_at(i, j);
        const std::string color =
            panel == 0 ? [&] {
              const double m = max_abs > 0.0 ? std::sqrt(std::abs(v) / max_abs) : 0.0;
              return hex_color(m, m * 0.85, 1.0 - m);
            }()
                       : phase_color(std::arg(v));
        os << "<rect x=\"" << ox + bi * px << "\" y=\"" << oy + (cy - 1 - bj) * px
           << "\" width=\"" << px << "\" height=\"" << px << "\" fill=\"" << color
           << "\"/>\n";
      }
    }
    for (const auto &r : p.regions)
    {
      const double x0 = ox + r.x0 / (f.dx * step) * px;
      const double x1 = ox + r.x1 / (f.dx * step) * px;
      const double y0 = oy + panel_h - r.y1 / (f.dy * step) * px;
      const double y1 = oy + panel_h - r.y0 / (f.dy * step) * px;
      os << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << x1 - x0
         << "\" height=\"" << y1 - y0 << "\" fill=\"none\" stroke=\"white\" "
         << "stroke-dasharray=\"3 2\"/>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace plasmahom
