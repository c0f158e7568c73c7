// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "plasmahom/cli/app.hpp"
#include "plasmahom/errors.hpp"
#include "plasmahom/io.hpp"

namespace plasmahom::cli
{

namespace
{

std::string join(const std::vector<std::string> &items)
{
  std::string s;
  for (const auto &i : items)
  {
    s += (s.empty() ? "" : "; ") + i;
  }
  return s;
}

const std::map<std::string, std::set<std::string>> &task_keys()
{
  static const std::map<std::string, std::set<std::string>> keys{
      {"mesh", {"type"}},
      {"cell", {"type", "omega"}},
      {"effperm", {"type", "omega", "route"}},
      {"sweep", {"type", "omega_min", "omega_max", "points", "grid", "entry", "fit"}},
      {"enz",
       {"type", "eps_bar", "sigma_bar_d", "lambda_bar_d", "omega", "spacing",
        "loss_threshold"}},
      {"macro",
       {"type", "lx", "ly", "nx", "ny", "omega", "mu", "ambient", "regions", "sources", "pml",
        "periodic_x", "tol", "probe"}}};
  return keys;
}

class Checker
{
public:
  std::vector<std::string> issues;

  void unknown_keys(const json &obj, const std::set<std::string> &allowed,
                    const std::string &where)
  {
    if (!obj.is_object())
    {
      issues.push_back(where + ": expected an object");
      return;
    }
    std::vector<std::string> unknown;
    for (const auto &[key, value] : obj.items())
    {
      if (!allowed.count(key))
      {
        unknown.push_back(key);
      }
    }
    if (!unknown.empty())
    {
      std::string list;
      for (const auto &k : unknown)
      {
        list += (list.empty() ? "" : ", ") + k;
      }
      issues.push_back(where + ": unknown keys: " + list);
    }
  }

  bool number(const json &obj, const std::string &key, const std::string &where,
              double lo = -INFINITY, double hi = INFINITY, bool strict_lo = false)
  {
    if (!obj.contains(key))
    {
      return false;
    }
    const auto &v = obj.at(key);
    if (!v.is_number())
    {
      issues.push_back(where + "." + key + ": expected a number");
      return false;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x) || x < lo || x > hi || (strict_lo && x == lo))
    {
      std::ostringstream msg;
      msg << where << "." << key << ": value " << x << " outside " << (strict_lo ? "(" : "[")
          << lo << ", " << hi << "]";
      issues.push_back(msg.str());
      return false;
    }
    return true;
  }

  void complex(const json &obj, const std::string &key, const std::string &where)
  {
    if (!obj.contains(key))
    {
      return;
    }
    try
    {
      parse_complex(obj.at(key), where + "." + key);
    }
    catch (const ValidationError &e)
    {
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    }
  }

  void complex_list(const json &obj, const std::string &key, const std::string &where)
  {
    if (!obj.contains(key))
    {
      return;
    }
    const auto &v = obj.at(key);
    const bool nested = v.is_array() && !v.empty() && v.front().is_array();
    if (!nested)
    {
      complex(obj, key, where);
      return;
    }
    for (std::size_t k = 0; k < v.size(); ++k)
    {
      try
      {
        parse_complex(v[k], where + "." + key + "[" + std::to_string(k) + "]");
      }
      catch (const ValidationError &e)
      {
        issues.insert(issues.end(), e.issues().begin(), e.issues().end());
      }
    }
  }

  template <typename F>
  void guard(const std::string &where, F &&f)
  {
    try
    {
      f();
    }
    catch (const ValidationError &e)
    {
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    }
    catch (const std::exception &e)
    {
      issues.push_back(where + ": " + e.what());
    }
  }
};

std::vector<cplx> complex_list(const json &v, const std::string &where)
{
  std::vector<cplx> out;
  if (v.is_array() && !v.empty() && v.front().is_array())
  {
    for (std::size_t k = 0; k < v.size(); ++k)
    {
      out.push_back(parse_complex(v[k], where + "[" + std::to_string(k) + "]"));
    }
  }
  else
  {
    out.push_back(parse_complex(v, where));
  }
  return out;
}

Vec2 vec2(const json &v, const std::string &where)
{
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
  {
    throw ValidationError({where + ": expected [x, y]"});
  }
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

std::array<cplx, 3> eps_triplet(const json &v, const std::string &where)
{
  if (v.is_array() && v.size() == 3)
  {
    return {parse_complex(v[0], where + "[0]"), parse_complex(v[1], where + "[1]"),
            parse_complex(v[2], where + "[2]")};
  }
  const cplx e = parse_complex(v, where);
  return {e, e, e};
}

double get_number(const json &obj, const std::string &key, double fallback)
{
  return obj.contains(key) ? obj.at(key).get<double>() : fallback;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
  : Error("invalid configuration: " + join(issues)), issues_(std::move(issues))
{
}

cplx parse_complex(const json &value, const std::string &where)
{
  if (value.is_number())
  {
    return cplx(value.get<double>(), 0.0);
  }
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number())
  {
    const cplx c(value[0].get<double>(), value[1].get<double>());
    if (std::isfinite(c.real()) && std::isfinite(c.imag()))
    {
      return c;
    }
  }
  throw ValidationError({where + ": expected a number or [re, im]"});
}

json complex_json(cplx value)
{
  return json::array({value.real(), value.imag()});
}

std::string config_hash(const json &config)
{
  return fnv1a64_hex(config.dump());
}

void apply_override(json &config, const std::string &assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
  {
    throw ValidationError({"override '" + assignment + "': expected key.path=value"});
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded())
  {
    value = text;
  }
  json *node = &config;
  std::size_t start = 0;
  while (true)
  {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty())
    {
      throw ValidationError({"override '" + assignment + "': empty path component"});
    }
    if (!node->is_object())
    {
      throw ValidationError({"override '" + assignment + "': '" + key +
                             "' is not inside an object"});
    }
    if (dot == std::string::npos)
    {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    if (node->is_null())
    {
      *node = json::object();
    }
    start = dot + 1;
  }
}

GeometrySpec geometry_from_config(const json &config)
{
  const json &g = config.at("geometry");
  GeometrySpec spec;
  if (!g.contains("kind") || !g.at("kind").is_string())
  {
    throw ValidationError({"geometry.kind: required string"});
  }
  spec.kind = geometry_kind_from_string(g.at("kind").get<std::string>());
  spec.width = get_number(g, "width", spec.width);
  spec.radius = get_number(g, "radius", spec.radius);
  spec.amplitude = get_number(g, "amplitude", spec.amplitude);
  spec.level = get_number(g, "level", spec.level);
  if (g.contains("periods"))
  {
    spec.periods = g.at("periods").get<int>();
  }
  if (g.contains("center"))
  {
    spec.center = vec2(g.at("center"), "geometry.center");
  }
  return spec;
}

MaterialSpec material_at(const json &config, double omega)
{
  const json m = config.value("material", json::object());
  MaterialSpec mat;
  if (m.contains("eps_bulk"))
  {
    mat.eps_bulk = parse_complex(m.at("eps_bulk"), "material.eps_bulk");
  }
  if (m.contains("eps_inclusion"))
  {
    mat.eps_inclusion = parse_complex(m.at("eps_inclusion"), "material.eps_inclusion");
  }
  if (m.contains("drude"))
  {
    const json &d = m.at("drude");
    const double ef = get_number(d, "E_F_tilde", 1.0);
    const double dt = get_number(d, "d_tilde", 20.72);
    const double tau = get_number(d, "tau_ps", 0.5);
    const double pref = get_number(d, "prefactor", kDrudePrefactor);
    const cplx eta = rescaled_eta(ef, dt, omega, pref, damping_tilde(tau * 1e-12));
    mat.sigma_surface = {eta * kI * omega};
  }
  else if (m.contains("sigma_surface"))
  {
    mat.sigma_surface = complex_list(m.at("sigma_surface"), "material.sigma_surface");
  }
  if (m.contains("lambda_line"))
  {
    mat.lambda_line = complex_list(m.at("lambda_line"), "material.lambda_line");
  }
  if (m.contains("lambda_slope"))
  {
    mat.lambda_slope = complex_list(m.at("lambda_slope"), "material.lambda_slope");
  }
  return mat;
}

MacroProblem macro_from_config(const json &t)
{
  MacroProblem p;
  p.lx = get_number(t, "lx", p.lx);
  p.ly = get_number(t, "ly", p.ly);
  p.nx = t.value("nx", p.nx);
  p.ny = t.value("ny", p.ny);
  p.omega = get_number(t, "omega", p.omega);
  p.mu = get_number(t, "mu", p.mu);
  p.periodic_x = t.value("periodic_x", false);
  if (t.contains("ambient"))
  {
    p.ambient = eps_triplet(t.at("ambient"), "task.ambient");
  }
  if (t.contains("regions"))
  {
    const json &regions = t.at("regions");
    if (!regions.is_array())
    {
      throw ValidationError({"task.regions: expected an array"});
    }
    for (std::size_t k = 0; k < regions.size(); ++k)
    {
      const json &r = regions[k];
      const std::string where = "task.regions[" + std::to_string(k) + "]";
      EpsRegion region;
      region.x0 = get_number(r, "x0", 0.0);
      region.x1 = get_number(r, "x1", p.lx);
      region.y0 = get_number(r, "y0", 0.0);
      region.y1 = get_number(r, "y1", p.ly);
      if (r.contains("eps"))
      {
        region.eps = eps_triplet(r.at("eps"), where + ".eps");
      }
      p.regions.push_back(region);
    }
  }
  if (t.contains("sources"))
  {
    const json &sources = t.at("sources");
    if (!sources.is_array())
    {
      throw ValidationError({"task.sources: expected an array"});
    }
    for (std::size_t k = 0; k < sources.size(); ++k)
    {
      const json &s = sources[k];
      const std::string where = "task.sources[" + std::to_string(k) + "]";
      MacroSource src;
      const std::string kind = s.value("kind", "current_patch");
      if (kind == "current_patch")
      {
        src.kind = SourceKind::current_patch;
      }
      else if (kind == "sheet_current")
      {
        src.kind = SourceKind::sheet_current;
      }
      else if (kind == "magnetic_point")
      {
        src.kind = SourceKind::magnetic_point;
      }
      else
      {
        throw ValidationError({where + ".kind: unknown source kind '" + kind + "'"});
      }
      src.x = get_number(s, "x", 0.0);
      src.y = get_number(s, "y", 0.0);
      src.radius = get_number(s, "radius", 0.0);
      if (s.contains("direction"))
      {
        src.direction = vec2(s.at("direction"), where + ".direction");
      }
      if (s.contains("amplitude"))
      {
        src.amplitude = parse_complex(s.at("amplitude"), where + ".amplitude");
      }
      p.sources.push_back(src);
    }
  }
  if (t.contains("pml"))
  {
    const json &pml = t.at("pml");
    p.pml.cells = pml.value("cells", p.pml.cells);
    p.pml.strength = get_number(pml, "strength", p.pml.strength);
    p.pml.order = pml.value("order", p.pml.order);
  }
  return p;
}

std::vector<std::string> validate_config(const json &config)
{
  Checker c;
  if (!config.is_object())
  {
    return {"configuration must be a JSON object"};
  }
  c.unknown_keys(config, {"schema_version", "geometry", "material", "solver", "task", "output"},
                 "config");
  if (!config.contains("schema_version"))
  {
    c.issues.push_back("schema_version: required");
  }
  else if (!config.at("schema_version").is_number_integer() ||
           config.at("schema_version").get<int>() != kSchemaVersion)
  {
    c.issues.push_back("schema_version: only version " + std::to_string(kSchemaVersion) +
                       " is supported");
  }

  std::string type;
  if (!config.contains("task") || !config.at("task").is_object())
  {
    c.issues.push_back("task: required object");
  }
  else
  {
    const json &t = config.at("task");
    if (!t.contains("type") || !t.at("type").is_string())
    {
      c.issues.push_back("task.type: required, one of mesh | cell | effperm | sweep | enz | macro");
    }
    else
    {
      type = t.at("type").get<std::string>();
      const auto it = task_keys().find(type);
      if (it == task_keys().end())
      {
        c.issues.push_back("task.type: unknown task '" + type + "'");
        type.clear();
      }
      else
      {
        c.unknown_keys(t, it->second, "task");
      }
    }
  }

  const bool needs_cell = type == "mesh" || type == "cell" || type == "effperm" || type == "sweep";
  if (config.contains("geometry"))
  {
    const json &g = config.at("geometry");
    c.unknown_keys(g, {"kind", "width", "radius", "center", "amplitude", "periods", "level"},
                   "geometry");
    if (g.is_object())
    {
      for (const char *k : {"width", "radius", "amplitude", "level"})
      {
        c.number(g, k, "geometry");
      }
      c.guard("geometry", [&] { build_geometry(geometry_from_config(config)); });
    }
  }
  else if (needs_cell)
  {
    c.issues.push_back("geometry: required for task '" + type + "'");
  }

  if (config.contains("material"))
  {
    const json &m = config.at("material");
    c.unknown_keys(m,
                   {"eps_bulk", "eps_inclusion", "sigma_surface", "lambda_line", "lambda_slope",
                    "drude"},
                   "material");
    if (m.is_object())
    {
      c.complex(m, "eps_bulk", "material");
      c.complex(m, "eps_inclusion", "material");
      c.complex_list(m, "sigma_surface", "material");
      c.complex_list(m, "lambda_line", "material");
      c.complex_list(m, "lambda_slope", "material");
      if (m.contains("drude"))
      {
        const json &d = m.at("drude");
        c.unknown_keys(d, {"E_F_tilde", "omega_tilde", "d_tilde", "tau_ps", "prefactor"},
                       "material.drude");
        if (d.is_object())
        {
          c.number(d, "E_F_tilde", "material.drude", 0.0);
          c.number(d, "omega_tilde", "material.drude", 0.0, INFINITY, true);
          c.number(d, "d_tilde", "material.drude", 0.0, INFINITY, true);
          c.number(d, "tau_ps", "material.drude", 0.0, INFINITY, true);
          c.number(d, "prefactor", "material.drude", 0.0, INFINITY, true);
        }
        if (m.contains("sigma_surface"))
        {
          c.issues.push_back("material: give either drude or sigma_surface, not both");
        }
      }
      c.guard("material", [&] { material_at(config, 1.0).validate(); });
    }
  }

  if (config.contains("solver"))
  {
    const json &s = config.at("solver");
    c.unknown_keys(s, {"h", "tol", "parallelism", "method"}, "solver");
    if (s.is_object())
    {
      c.number(s, "h", "solver", 0.0, 0.5, true);
      c.number(s, "tol", "solver", 0.0, 1e-6, true);
      if (s.contains("parallelism") &&
          (!s.at("parallelism").is_number_integer() || s.at("parallelism").get<int>() < 1))
      {
        c.issues.push_back("solver.parallelism: expected a positive integer");
      }
      if (s.contains("method"))
      {
        const json &m = s.at("method");
        static const std::set<std::string> methods{"automatic", "full", "reduced",
                                                   "closed_form"};
        if (!m.is_string() || !methods.count(m.get<std::string>()))
        {
          c.issues.push_back("solver.method: one of automatic | full | reduced | closed_form");
        }
      }
    }
  }

  if (config.contains("output"))
  {
    const json &o = config.at("output");
    c.unknown_keys(o, {"directory", "formats"}, "output");
    if (o.is_object())
    {
      if (o.contains("directory") && !o.at("directory").is_string())
      {
        c.issues.push_back("output.directory: expected a string");
      }
      if (o.contains("formats"))
      {
        static const std::set<std::string> formats{"csv", "json", "svg", "mesh", "bin"};
        const json &f = o.at("formats");
        if (!f.is_array())
        {
          c.issues.push_back("output.formats: expected an array");
        }
        else
        {
          for (const auto &x : f)
          {
            if (!x.is_string() || !formats.count(x.get<std::string>()))
            {
              c.issues.push_back("output.formats: unknown format " + x.dump());
            }
          }
        }
      }
    }
  }

  if (!type.empty())
  {
    const json &t = config.at("task");
    const bool has_drude =
        config.contains("material") && config.at("material").contains("drude");
    if (type == "cell" || type == "effperm")
    {
      if (!c.number(t, "omega", "task", 0.0, INFINITY, true) && !has_drude)
      {
        c.issues.push_back("task.omega: required unless material.drude.omega_tilde is set");
      }
      if (type == "effperm" && t.contains("route"))
      {
        const json &r = t.at("route");
        if (!r.is_string() || (r != "fem" && r != "closed_form"))
        {
          c.issues.push_back("task.route: one of fem | closed_form");
        }
      }
    }
    if (type == "sweep")
    {
      if (t.contains("grid"))
      {
        const json &g = t.at("grid");
        if (!g.is_array() || g.empty())
        {
          c.issues.push_back("task.grid: expected a nonempty array of frequencies");
        }
        else
        {
          bool numeric = true;
          for (const auto &x : g)
          {
            numeric = numeric && x.is_number() && x.get<double>() > 0.0;
          }
          if (!numeric)
          {
            c.issues.push_back("task.grid: frequencies must be positive numbers");
          }
          else
          {
            for (std::size_t k = 0; k + 1 < g.size(); ++k)
            {
              if (!(g[k + 1].get<double>() > g[k].get<double>()))
              {
                c.issues.push_back("task.grid: frequencies must be strictly increasing "
                                   "(monotonicity violated at index " +
                                   std::to_string(k + 1) + ")");
                break;
              }
            }
          }
        }
      }
      else
      {
        const bool lo = c.number(t, "omega_min", "task", 0.0, INFINITY, true);
        const bool hi = c.number(t, "omega_max", "task", 0.0, INFINITY, true);
        if (lo && hi && !(t.at("omega_max").get<double>() > t.at("omega_min").get<double>()))
        {
          c.issues.push_back("task: omega_max must exceed omega_min (monotonicity)");
        }
        if (t.contains("points") &&
            (!t.at("points").is_number_integer() || t.at("points").get<int>() < 2))
        {
          c.issues.push_back("task.points: expected an integer >= 2");
        }
      }
      if (t.contains("entry"))
      {
        c.guard("task.entry", [&] { entry_from_string(t.at("entry").get<std::string>()); });
      }
      if (t.contains("fit") && !t.at("fit").is_boolean())
      {
        c.issues.push_back("task.fit: expected a boolean");
      }
      if (!has_drude && !(config.contains("material") &&
                          config.at("material").contains("sigma_surface")))
      {
        c.issues.push_back("material: a sweep needs material.drude or material.sigma_surface");
      }
    }
    if (type == "enz")
    {
      c.complex(t, "eps_bar", "task");
      c.complex(t, "sigma_bar_d", "task");
      c.complex(t, "lambda_bar_d", "task");
      c.number(t, "omega", "task", 0.0, INFINITY, true);
      c.number(t, "spacing", "task", 0.0, INFINITY, true);
      c.number(t, "loss_threshold", "task", 0.0, INFINITY, true);
      if (t.contains("eps_bar"))
      {
        c.guard("task.eps_bar", [&] {
          if (!(parse_complex(t.at("eps_bar"), "task.eps_bar").real() > 0.0))
          {
            throw ValidationError({"task.eps_bar: real part must be positive"});
          }
        });
      }
    }
    if (type == "macro")
    {
      c.number(t, "tol", "task", 0.0, 1e-6, true);
      if (t.contains("pml"))
      {
        c.unknown_keys(t.at("pml"), {"cells", "strength", "order"}, "task.pml");
      }
      if (t.contains("probe"))
      {
        c.unknown_keys(t.at("probe"), {"x0", "x1", "y0", "y1", "threshold"}, "task.probe");
      }
      if (t.contains("regions") && t.at("regions").is_array())
      {
        for (std::size_t k = 0; k < t.at("regions").size(); ++k)
        {
          c.unknown_keys(t.at("regions")[k], {"x0", "x1", "y0", "y1", "eps"},
                         "task.regions[" + std::to_string(k) + "]");
        }
      }
      if (t.contains("sources") && t.at("sources").is_array())
      {
        for (std::size_t k = 0; k < t.at("sources").size(); ++k)
        {
          c.unknown_keys(t.at("sources")[k],
                         {"kind", "x", "y", "radius", "direction", "amplitude"},
                         "task.sources[" + std::to_string(k) + "]");
        }
      }
      c.guard("task", [&] { macro_from_config(t).validate(); });
    }
  }
  return c.issues;
}

}  // namespace plasmahom::cli
