// Copyright 2026 The plasmahom Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdlib>
#include <set>
#include <sstream>

#include "plasmahom/cli/app.hpp"
#include "plasmahom/effperm.hpp"
#include "plasmahom/enz.hpp"
#include "plasmahom/errors.hpp"
#include "plasmahom/io.hpp"
#include "plasmahom/mesh.hpp"

namespace plasmahom::cli
{

namespace
{

struct Context
{
  const json &config;
  std::filesystem::path out_dir;
  std::set<std::string> formats;
  std::string hash;
  json outputs = json::array();

  bool wants(const std::string &format) const { return formats.count(format) > 0; }

  json stamp() const
  {
    return json{{"plasmahom_version", kVersion}, {"config_hash", hash}};
  }

  std::vector<std::string> comments() const
  {
    return {std::string("plasmahom ") + kVersion, "config_hash " + hash};
  }

  void write(const std::string &name, const std::string &content)
  {
    atomic_write(out_dir / name, content);
    outputs.push_back((out_dir / name).string());
  }

  void write_json(const std::string &name, json body)
  {
    json doc = stamp();
    doc.update(body);
    write(name, doc.dump(2) + "\n");
  }
};

SolveOptions solve_options(const json &config)
{
  SolveOptions o;
  const json s = config.value("solver", json::object());
  o.tol = s.value("tol", 1e-10);
  return o;
}

int parallelism(const json &config)
{
  int p = config.value("solver", json::object()).value("parallelism", 1);
  if (const char *env = std::getenv("PLASMAHOM_THREADS"))
  {
    const int v = std::atoi(env);
    if (v >= 1)
    {
      p = v;
    }
  }
  return p;
}

double mesh_h(const json &config)
{
  return config.value("solver", json::object()).value("h", 0.025);
}

double task_omega(const json &config)
{
  const json &t = config.at("task");
  if (t.contains("omega"))
  {
    return t.at("omega").get<double>();
  }
  return config.at("material").at("drude").value("omega_tilde", 2.0);
}

json tensor_json(const Eigen::Matrix3cd &m)
{
  json rows = json::array();
  for (int i = 0; i < 3; ++i)
  {
    json row = json::array();
    for (int j = 0; j < 3; ++j)
    {
      row.push_back(complex_json(m(i, j)));
    }
    rows.push_back(row);
  }
  return rows;
}

json fit_json(const LorentzianFit &fit)
{
  return json{{"resonance_freq", fit.resonance_freq}, {"amplitude", fit.amplitude},
              {"width", fit.width},
              {"background", fit.background},
              {"rms_residual", fit.rms_residual}};
}

json run_mesh(Context &ctx)
{
  const auto geom = build_geometry(geometry_from_config(ctx.config));
  const Mesh mesh = generate_mesh(geom, mesh_h(ctx.config));
  const MeshReport report = check_mesh(mesh);
  if (ctx.wants("mesh"))
  {
    std::ostringstream os;
    for (const auto &c : ctx.comments())
    {
      os << "# " << c << "\n";
    }
    write_mesh(os, mesh);
    ctx.write("mesh.txt", os.str());
  }
  json result{{"mesh_id", mesh.id()},
              {"vertices", mesh.vertices.size()},
              {"triangles", mesh.triangles.size()},
              {"interface_segments", mesh.interface_segments.size()},
              {"conforming", report.conforming},
              {"periodic", report.periodic},
              {"oriented", report.oriented},
              {"min_area", report.min_area},
              {"issues", report.issues}};
  if (ctx.wants("json"))
  {
    ctx.write_json("mesh_report.json", result);
  }
  if (!report.ok())
  {
    throw MeshError("generated mesh failed its checks");
  }
  return json{{"mesh_id", mesh.id()}, {"vertices", mesh.vertices.size()}};
}

json run_cell(Context &ctx)
{
  const auto geom = build_geometry(geometry_from_config(ctx.config));
  auto mesh = std::make_shared<const Mesh>(generate_mesh(geom, mesh_h(ctx.config)));
  const double omega = task_omega(ctx.config);
  const MaterialSpec mat = material_at(ctx.config, omega);
  const auto fields = solve_correctors(mesh, mat, omega, solve_options(ctx.config));
  if (ctx.wants("csv"))
  {
    std::ostringstream os;
    for (const auto &c : ctx.comments())
    {
      os << "# " << c << "\n";
    }
    os << "vertex,y1,y2,re_chi1,im_chi1,re_chi2,im_chi2\n";
    for (std::size_t v = 0; v < mesh->vertices.size(); ++v)
    {
      os << v << "," << format_double(mesh->vertices[v].x()) << ","
         << format_double(mesh->vertices[v].y());
      for (const auto &f : fields)
      {
        os << "," << format_double(f.nodal_values[v].real()) << ","
           << format_double(f.nodal_values[v].imag());
      }
      os << "\n";
    }
    ctx.write("correctors.csv", os.str());
  }
  json result{{"mesh_id", mesh->id()},
              {"omega_tilde", omega},
              {"residual", {fields[0].relative_residual, fields[1].relative_residual}},
              {"energy", {discrete_energy(fields[0], mat), discrete_energy(fields[1], mat)}},
              {"max_abs",
               {fields[0].nodal_values.cwiseAbs().maxCoeff(),
                fields[1].nodal_values.cwiseAbs().maxCoeff()}}};
  if (ctx.wants("json"))
  {
    ctx.write_json("cell.json", result);
  }
  return result;
}

json run_effperm(Context &ctx)
{
  const auto geom = build_geometry(geometry_from_config(ctx.config));
  const double omega = task_omega(ctx.config);
  const MaterialSpec mat = material_at(ctx.config, omega);
  const std::string route = ctx.config.at("task").value("route", "fem");
  EffectiveTensor t;
  std::string mesh_id = "none";
  if (route == "closed_form")
  {
    t = effective_permittivity_closed_form(mat, geom, omega);
  }
  else
  {
    auto mesh = std::make_shared<const Mesh>(generate_mesh(geom, mesh_h(ctx.config)));
    mesh_id = mesh->id();
    t = compute_effective_tensor(geom, mesh, mat, omega, solve_options(ctx.config));
  }
  const auto structure = tensor_structure_check(t, geom.spec.kind);
  const auto divfree = check_divergence_free(mat, geom);
  json result{{"omega_tilde", omega},
              {"geometry", to_string(geom.spec.kind)},
              {"provenance", to_string(t.provenance)},
              {"mesh_id", mesh_id},
              {"eps_eff", tensor_json(t.matrix)},
              {"structure", {{"pass", structure.pass},
                             {"offdiag_ratio", structure.offdiag_ratio},
                             {"diagnostics", structure.diagnostics}}},
              {"divergence_free", {{"volume", divfree.volume_ok},
                                   {"surface", divfree.surface_ok},
                                   {"edge", divfree.edge_ok},
                                   {"failures", divfree.failures}}}};
  if (ctx.wants("json"))
  {
    ctx.write_json("effperm.json", result);
  }
  return json{{"eps11", complex_json(t.matrix(0, 0))},
              {"eps22", complex_json(t.matrix(1, 1))},
              {"eps33", complex_json(t.matrix(2, 2))}};
}

json run_sweep(Context &ctx)
{
  const json &task = ctx.config.at("task");
  const auto geom = build_geometry(geometry_from_config(ctx.config));
  std::vector<double> grid;
  if (task.contains("grid"))
  {
    grid = task.at("grid").get<std::vector<double>>();
  }
  else
  {
    grid = linear_grid(task.value("omega_min", 0.5), task.value("omega_max", 4.0),
                       task.value("points", 200));
  }
  const Entry entry = entry_from_string(task.value("entry", "eps11"));
  SweepOptions options;
  options.solve = solve_options(ctx.config);
  options.parallelism = parallelism(ctx.config);
  const std::string method =
      ctx.config.value("solver", json::object()).value("method", "automatic");
  options.method = method == "full"          ? SweepMethod::full
                   : method == "reduced"     ? SweepMethod::reduced
                   : method == "closed_form" ? SweepMethod::closed_form
                                             : SweepMethod::automatic;
  std::shared_ptr<const Mesh> mesh;
  if (options.method != SweepMethod::closed_form)
  {
    mesh = std::make_shared<const Mesh>(generate_mesh(geom, mesh_h(ctx.config)));
  }
  const json cfg = ctx.config;
  const MaterialBuilder builder = [cfg](double w) { return material_at(cfg, w); };
  const auto sweep = frequency_sweep(geom, mesh, builder, grid, options);

  std::size_t failed = 0;
  for (const auto &r : sweep)
  {
    failed += r.ok ? 0 : 1;
  }
  if (ctx.wants("csv"))
  {
    ctx.write("sweep.csv", sweep_csv(sweep, ctx.comments()));
  }
  json result{{"entry", to_string(entry)},
              {"points", sweep.size()},
              {"failed_points", failed},
              {"mesh_id", mesh ? mesh->id() : std::string("none")}};
  json fit_doc = json::object();
  if (task.value("fit", true))
  {
    try
    {
      const auto fit = fit_lorentzian(sweep, entry);
      const auto enz = find_enz_frequency(sweep, entry, fit);
      const auto kk = kramers_kronig_residual(sweep, entry, fit);
      json roots = json::array();
      for (const auto &e : enz)
      {
        roots.push_back({{"omega_tilde", e.omega}, {"direction", e.rising ? "rising" : "falling"}});
      }
      fit_doc = {{"fit", fit_json(fit)},
                 {"enz", roots},
                 {"kramers_kronig",
                  {{"residual", kk.residual}, {"reliable", kk.reliable}, {"note", kk.note}}}};
      result["resonance_freq"] = fit.resonance_freq;
      result["enz"] = roots;
    }
    catch (const FitError &e)
    {
      fit_doc = {{"fit", nullptr}, {"fit_error", e.what()}};
      result["fit_error"] = e.what();
    }
  }
  if (ctx.wants("json"))
  {
    json body = result;
    body.update(fit_doc);
    ctx.write_json("sweep_fit.json", body);
  }
  if (ctx.wants("svg"))
  {
    ctx.write("sweep.svg", "<!-- plasmahom " + std::string(kVersion) + " config_hash " +
                               ctx.hash + " -->\n" +
                               sweep_svg(sweep, entry, to_string(geom.spec.kind) + " " +
                                                           to_string(entry)));
  }
  return result;
}

json run_enz(Context &ctx)
{
  const json &t = ctx.config.at("task");
  EnzParams p;
  if (t.contains("eps_bar"))
  {
    p.eps_bar = parse_complex(t.at("eps_bar"), "task.eps_bar");
  }
  if (t.contains("sigma_bar_d"))
  {
    p.sigma_bar_d = parse_complex(t.at("sigma_bar_d"), "task.sigma_bar_d");
  }
  if (t.contains("lambda_bar_d"))
  {
    p.lambda_bar_d = parse_complex(t.at("lambda_bar_d"), "task.lambda_bar_d");
  }
  p.omega = t.value("omega", p.omega);
  p.spacing = t.value("spacing", p.spacing);
  EnzOptions o;
  o.loss_threshold = t.value("loss_threshold", o.loss_threshold);
  const EnzReport r = analyze_enz(p, o);
  json result{{"xi0", complex_json(r.xi0)},
              {"d_c", complex_json(r.critical_spacing)},
              {"realizable", r.realizable},
              {"regime", to_string(r.regime)},
              {"eps_eff_ratio", complex_json(r.eps_eff_ratio)}};
  if (ctx.wants("json"))
  {
    json body = result;
    body["quadratic_residual"] = r.quadratic_residual;
    ctx.write_json("enz.json", body);
  }
  return result;
}

json run_macro(Context &ctx)
{
  const json &t = ctx.config.at("task");
  const MacroProblem p = macro_from_config(t);
  const double tol = t.value("tol", 1e-8);
  const MacroField f = solve_macro(p, tol);
  json result{{"residual", f.residual},
              {"divergence_residual", divergence_check(f, p)},
              {"interior_energy", interior_energy(f, p)}};
  if (t.contains("probe"))
  {
    const json &pr = t.at("probe");
    EpsRegion rect;
    rect.x0 = pr.value("x0", 0.0);
    rect.x1 = pr.value("x1", p.lx);
    rect.y0 = pr.value("y0", 0.0);
    rect.y1 = pr.value("y1", p.ly);
    result["phase_spread_deg"] = phase_spread_degrees(f, rect, pr.value("threshold", 0.1));
  }
  if (ctx.wants("bin"))
  {
    std::ostringstream os(std::ios::binary);
    write_field_binary(os, f, p.omega);
    ctx.write("field.bin", os.str());
  }
  if (ctx.wants("svg"))
  {
    ctx.write("field.svg", "<!-- plasmahom " + std::string(kVersion) + " config_hash " +
                               ctx.hash + " -->\n" + field_svg(f, p));
  }
  if (ctx.wants("json"))
  {
    json body = result;
    body["nx"] = f.nx;
    body["ny"] = f.ny;
    ctx.write_json("macro.json", body);
  }
  return result;
}

}  // namespace

RunOutcome execute(const json &config, const std::filesystem::path &base_dir)
{
  const json output = config.value("output", json::object());
  std::filesystem::path dir = output.value("directory", "out");
  if (dir.is_relative())
  {
    dir = base_dir / dir;
  }
  Context ctx{config, dir, {}, config_hash(config)};
  if (output.contains("formats"))
  {
    for (const auto &f : output.at("formats"))
    {
      ctx.formats.insert(f.get<std::string>());
    }
  }
  else
  {
    ctx.formats = {"csv", "json", "svg", "mesh", "bin"};
  }
  const std::string type = config.at("task").at("type").get<std::string>();
  RunOutcome outcome;
  json result;
  try
  {
    if (type == "mesh")
    {
      result = run_mesh(ctx);
    }
    else if (type == "cell")
    {
      result = run_cell(ctx);
    }
    else if (type == "effperm")
    {
      result = run_effperm(ctx);
    }
    else if (type == "sweep")
    {
      result = run_sweep(ctx);
    }
    else if (type == "enz")
    {
      result = run_enz(ctx);
    }
    else
    {
      result = run_macro(ctx);
    }
  }
  catch (const ValidationError &)
  {
    throw;
  }
  catch (const InvalidParameterError &e)
  {
    throw ValidationError({e.what()});
  }
  catch (const GeometryError &e)
  {
    throw ValidationError({e.what()});
  }
  catch (const Error &e)
  {
    outcome.exit_code = kExitSolver;
    outcome.summary = {{"status", "solver_failure"}, {"task", type}, {"error", e.what()},
                       {"config_hash", ctx.hash}, {"version", kVersion},
                       {"outputs", ctx.outputs}};
    return outcome;
  }
  outcome.summary = {{"status", "ok"},           {"task", type},
                     {"config_hash", ctx.hash},  {"version", kVersion},
                     {"outputs", ctx.outputs},   {"result", result}};
  return outcome;
}

}  // namespace plasmahom::cli
