// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include "plasmahom/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "plasmahom/errors.hpp"
#include "plasmahom/io.hpp"

namespace plasmahom
{

std::string to_string(Entry e)
{
  switch (e)
  {
    case Entry::eps11:
      return "eps11";
    case Entry::eps22:
      return "eps22";
    case Entry::eps33:
      return "eps33";
  }
  return "eps11";
}

Entry entry_from_string(const std::string &name)
{
  if (name == "eps11" || name == "11")
  {
    return Entry::eps11;
  }
  if (name == "eps22" || name == "22")
  {
    return Entry::eps22;
  }
  if (name == "eps33" || name == "33")
  {
    return Entry::eps33;
  }
  throw InvalidParameterError("unknown tensor entry '" + name + "'");
}

MaterialBuilder drude_material(double fermi_energy_tilde, double spacing_tilde,
                               double prefactor, double damping, cplx eps_bulk)
{
  return [=](double omega) {
    const cplx eta =
        rescaled_eta(fermi_energy_tilde, spacing_tilde, omega, prefactor, damping);
    return MaterialSpec::from_eta(eta, omega, eps_bulk);
  };
}

std::vector<double> linear_grid(double a, double b, int n)
{
  if (n < 1)
  {
    throw InvalidParameterError("linear_grid: need at least one point");
  }
  std::vector<double> grid(n);
  for (int k = 0; k < n; ++k)
  {
    grid[k] = n == 1 ? a : a + (b - a) * k / (n - 1);
  }
  return grid;
}

namespace
{

bool same_bulk(const MaterialSpec &a, const MaterialSpec &b)
{
  return a.eps_bulk == b.eps_bulk && a.eps_inside() == b.eps_inside();
}

void fill_record(SweepRecord &r, const EffectiveTensor &t)
{
  for (int i = 0; i < 3; ++i)
  {
    r.eps[i] = t.matrix(i, i);
    for (int j = 0; j < 3; ++j)
    {
      if (i != j)
      {
        r.offdiag = std::max(r.offdiag, std::abs(t.matrix(i, j)));
      }
    }
  }
  r.eta = t.eta;
}

}  // namespace

std::vector<SweepRecord> frequency_sweep(const UnitCellGeometry &geom,
                                         std::shared_ptr<const Mesh> mesh,
                                         const MaterialBuilder &material,
                                         const std::vector<double> &grid,
                                         const SweepOptions &options)
{
  if (grid.empty())
  {
    throw InvalidParameterError("frequency sweep: empty grid");
  }
  for (std::size_t k = 0; k + 1 < grid.size(); ++k)
  {
    if (!(grid[k + 1] > grid[k]))
    {
      throw InvalidParameterError("frequency sweep: grid must be strictly increasing");
    }
  }
  if (!material)
  {
    throw InvalidParameterError("frequency sweep: no material builder");
  }
  if (options.method != SweepMethod::closed_form && !mesh)
  {
    throw ContractError("frequency sweep: a mesh is required");
  }

  std::vector<MaterialSpec> mats;
  mats.reserve(grid.size());
  for (double w : grid)
  {
    mats.push_back(material(w));
  }

  std::unique_ptr<ReducedCellOperator> reduced;
  bool use_reduced = options.method == SweepMethod::reduced ||
                     options.method == SweepMethod::automatic;
  if (use_reduced)
  {
    use_reduced = std::all_of(mats.begin(), mats.end(), [&](const MaterialSpec &m) {
      return same_bulk(m, mats[0]) &&
             std::all_of(m.lambda_slope.begin(), m.lambda_slope.end(),
                         [](cplx v) { return v == 0.0; });
    });
    if (!use_reduced && options.method == SweepMethod::reduced)
    {
      throw InvalidParameterError("reduced sweep requires a frequency-independent bulk "
                                  "permittivity and a y3-independent lambda");
    }
  }
  if (use_reduced)
  {
    reduced = std::make_unique<ReducedCellOperator>(
        mesh, mats[0].eps_bulk, mats[0].eps_inclusion,
        static_cast<int>(geom.interfaces.size()));
  }
  const std::string mesh_id = mesh ? mesh->id() : std::string("none");

  std::vector<SweepRecord> records(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < grid.size(); k = next++)
    {
      SweepRecord &r = records[k];
      r.omega_tilde = grid[k];
      r.mesh_id = mesh_id;
      const auto start = std::chrono::steady_clock::now();
      try
      {
        mats[k].validate();
        EffectiveTensor t;
        if (options.method == SweepMethod::closed_form)
        {
          t = effective_permittivity_closed_form(mats[k], geom, grid[k]);
        }
        else if (reduced)
        {
          t = effective_permittivity_reduced(*reduced, geom, mats[k], grid[k]);
        }
        else
        {
          t = compute_effective_tensor(geom, mesh, mats[k], grid[k], options.solve);
        }
        fill_record(r, t);
        bool finite = true;
        for (const auto &e : r.eps)
        {
          finite = finite && std::isfinite(e.real()) && std::isfinite(e.imag());
        }
        if (!finite)
        {
          r.ok = false;
          r.status = "non_finite";
        }
      }
      catch (const SolverError &)
      {
        r.ok = false;
        r.status = "solver_error";
      }
      catch (const Error &)
      {
        r.ok = false;
        r.status = "error";
      }
      r.seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  };
  const int threads =
      std::clamp(options.parallelism, 1, static_cast<int>(std::max<std::size_t>(grid.size(), 1)));
  if (threads == 1)
  {
    worker();
  }
  else
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t)
    {
      pool.emplace_back(worker);
    }
  }
  return records;
}

SweepSeries series(const std::vector<SweepRecord> &sweep, Entry entry)
{
  SweepSeries s;
  for (const auto &r : sweep)
  {
    if (r.ok)
    {
      s.omega.push_back(r.omega_tilde);
      s.values.push_back(r.entry(entry));
    }
  }
  return s;
}

LorentzianFit fit_lorentzian(const std::vector<SweepRecord> &sweep, Entry entry,
                             const FitOptions &options)
{
  const auto s = series(sweep, entry);
  return fit_lorentzian(s.omega, s.values, options);
}

std::vector<EnzCrossing> find_enz_frequency(const std::vector<SweepRecord> &sweep,
                                            Entry entry, const LorentzianFit &fit)
{
  const auto s = series(sweep, entry);
  return find_enz_crossings(s.omega, s.values, fit);
}

std::vector<EnzCrossing> find_enz_frequency(const std::vector<SweepRecord> &sweep,
                                            Entry entry)
{
  const auto s = series(sweep, entry);
  bool sign_change = false;
  for (std::size_t k = 0; k + 1 < s.values.size(); ++k)
  {
    sign_change = sign_change || s.values[k].real() * s.values[k + 1].real() <= 0.0;
  }
  if (!sign_change)
  {
    return {};
  }
  return find_enz_crossings(s.omega, s.values, fit_lorentzian(s.omega, s.values));
}

KramersKronigResult kramers_kronig_residual(const std::vector<SweepRecord> &sweep,
                                            Entry entry, const LorentzianFit &fit)
{
  const auto s = series(sweep, entry);
  KramersKronigResult r;
  r.fit = fit;
  if (s.omega.size() < 2)
  {
    r.reliable = false;
    r.note = "fewer than two successful sweep points";
    return r;
  }
  // For the fitted pole, Re L - background is the principal-value Hilbert transform
  // of Im L, so the analytic real part is the transform.
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < s.omega.size(); ++k)
  {
    const double transform = fit(s.omega[k]).real() - fit.background;
    const double data = s.values[k].real() - fit.background;
    num += (data - transform) * (data - transform);
    den += data * data;
  }
  r.residual = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  const double lo = s.omega.front(), hi = s.omega.back();
  const double wr = fit.resonance_freq;
  std::ostringstream note;
  if (hi - lo < wr)
  {
    r.reliable = false;
    note << "sweep span " << (hi - lo) << " is shorter than omega_R " << wr << "; ";
  }
  if (wr - 5.0 * fit.width < lo || wr + 5.0 * fit.width > hi)
  {
    r.reliable = false;
    note << "pole +- 5 widths not inside the sweep range; ";
  }
  r.note = note.str();
  if (!r.note.empty())
  {
    r.note.resize(r.note.size() - 2);
  }
  return r;
}

KramersKronigResult kramers_kronig_residual(const std::vector<SweepRecord> &sweep,
                                            Entry entry)
{
  return kramers_kronig_residual(sweep, entry, fit_lorentzian(sweep, entry));
}

std::string sweep_csv(const std::vector<SweepRecord> &sweep,
                      const std::vector<std::string> &comments)
{
  std::ostringstream os;
  for (const auto &c : comments)
  {
    os << "# " << c << "\n";
  }
  os << "omega_tilde,re_eps11,im_eps11,re_eps22,im_eps22,re_eps33,im_eps33,status\n";
  for (const auto &r : sweep)
  {
    os << format_double(r.omega_tilde);
    for (const auto &e : r.eps)
    {
      os << "," << format_double(r.ok ? e.real() : NAN) << ","
         << format_double(r.ok ? e.imag() : NAN);
    }
    os << "," << r.status << "\n";
  }
  return os.str();
}

std::string sweep_svg(const std::vector<SweepRecord> &sweep, Entry entry,
                      const std::string &title)
{
  const auto s = series(sweep, entry);
  PlotSpec plot;
  plot.title = title;
  plot.x_label = "omega (rescaled)";
  plot.y_label = to_string(entry);
  PlotSeries re{"Re", "#1f5fbf", s.omega, {}};
  PlotSeries im{"Im", "#c0392b", s.omega, {}};
  double ymax = 1.0;
  for (const auto &v : s.values)
  {
    re.y.push_back(v.real());
    im.y.push_back(v.imag());
  }
  // Clip the pole so the background stays readable.
  std::vector<double> mags;
  for (const auto &v : s.values)
  {
    mags.push_back(std::abs(v));
  }
  if (!mags.empty())
  {
    std::vector<double> sorted = mags;
    std::sort(sorted.begin(), sorted.end());
    ymax = std::max(1.0, 4.0 * sorted[sorted.size() / 2]);
  }
  plot.y_clip = ymax;
  for (std::size_t k = 0; k < s.omega.size(); ++k)
  {
    if (s.values[k].real() < 0.0)
    {
      const double x0 = k > 0 ? 0.5 * (s.omega[k - 1] + s.omega[k]) : s.omega[k];
      const double x1 =
          k + 1 < s.omega.size() ? 0.5 * (s.omega[k] + s.omega[k + 1]) : s.omega[k];
      if (!plot.bands.empty() && std::abs(plot.bands.back().x1 - x0) < 1e-12)
      {
        plot.bands.back().x1 = x1;
      }
      else
      {
        plot.bands.push_back({x0, x1});
      }
    }
  }
  plot.series.push_back(std::move(re));
  plot.series.push_back(std::move(im));
  return render_svg_plot(plot);
}

}  // namespace plasmahom
