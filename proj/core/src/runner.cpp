#include "fsi/runner.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fsi/dependence.hpp"
#include "fsi/elastic.hpp"
#include "fsi/errors.hpp"
#include "fsi/kinematics.hpp"
#include "fsi/mms.hpp"
#include "fsi/vtk.hpp"

#ifndef FSI_VERSION
#define FSI_VERSION "unknown"
#endif

namespace fsi {

namespace fs = std::filesystem;

namespace {

struct Context {
  const RunConfig& cfg;
  std::string subcommand;
  fs::path dir;
  std::vector<std::string> outputs;
  std::ostream& out;

  void write(const std::string& name, const std::string& content) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + (dir / name).string());
    os << content;
    outputs.push_back(name);
  }
};

std::string format(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct LoadedData {
  InitialData data;
  DerivedData derived;
  bool has_derived = false;
};

LoadedData load_data(const RunConfig& cfg, const MeshPtr& mesh) {
  LoadedData r;
  const DataSpec& d = cfg.data;
  if (d.from_files()) {
    const int dim = mesh->dim();
    r.data.u0 = read_field_file(d.u0_file, solid_space(mesh), dim);
    r.data.u1 = read_field_file(d.u1_file, solid_space(mesh), dim);
    r.data.v0 = read_field_file(d.v0_file, fluid_velocity_space(mesh), dim);
    return r;
  }
  auto [data, derived] = d.family == "flux-violating"
                             ? flux_violating_fixture(d.amplitude, mesh, cfg.material)
                             : generate_compatible_data(parse_data_family(d.family), d.amplitude, mesh, cfg.material);
  r.data = std::move(data);
  r.derived = std::move(derived);
  r.has_derived = true;
  return r;
}

void write_fields_vtk(Context& ctx, const ReferenceMesh& mesh, const Solution& sol, int n, const std::string& name) {
  std::vector<NamedField> fields;
  if (!sol.solid.u.empty()) fields.push_back({"u", &sol.solid.u[n]});
  if (!sol.fluid.v.empty()) fields.push_back({"v", &sol.fluid.v[n]});
  if (!sol.fluid.p.empty()) fields.push_back({"p", &sol.fluid.p[n]});
  if (n < sol.chi.num_levels()) fields.push_back({"J", &sol.chi[n].J});
  write_vtk_file((ctx.dir / name).string(), mesh, fields, "fsi t=" + format("%.6g", sol.solid.u[n].time));
  ctx.outputs.push_back(name);
}

int cmd_simulate(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  MeshPtr mesh = build_reference_mesh(cfg.geometry);
  LoadedData ld = load_data(cfg, mesh);
  Solution sol = outer_fixed_point(ld.data, mesh, cfg.material, cfg.fixed_point);
  if (cfg.output.csv) {
    ctx.write("iterations.csv", sol.report.iterations_csv());
    ctx.write("energy.csv", sol.energy.to_csv());
  }
  std::ostringstream s;
  s << "accepted_T = " << format("%.10e", sol.report.accepted_T) << '\n'
    << "window_shrinks = " << sol.report.window_shrinks << '\n'
    << "outer_iterations = " << sol.report.outer_iterations() << '\n'
    << "inner_iterations_last = " << sol.report.inner_iterations() << '\n'
    << "J_min = " << format("%.12f", sol.report.J_range.first) << '\n'
    << "J_max = " << format("%.12f", sol.report.J_range.second) << '\n'
    << "interface_mismatch = " << format("%.6e", sol.interface_mismatch) << '\n'
    << "piola_residual = " << format("%.6e", sol.piola_residual) << '\n'
    << "energy_integrated_residual = " << format("%.6e", sol.energy.integrated_residual) << '\n';
  ctx.write("summary.txt", s.str());
  const int last = sol.solid.u.num_levels() - 1;
  if (cfg.output.vtk && last >= 0) write_fields_vtk(ctx, *mesh, sol, last, "fields_final.vtk");
  if (cfg.output.iteration_dumps) {
    for (int n = 0; n <= last; ++n) {
      char name[32];
      std::snprintf(name, sizeof name, "fields_%04d.vtk", n);
      write_fields_vtk(ctx, *mesh, sol, n, name);
    }
  }
  ctx.out << s.str();
  return kExitOk;
}

int cmd_verify(Context& ctx) {
  const auto r = tensor_identity_suite(1000, ctx.cfg.seed);
  MeshPtr mesh = build_reference_mesh(ctx.cfg.geometry);
  SpacePtr vs = fluid_velocity_space(mesh);
  Tensor2 A = identity(mesh->dim());
  A(0, 0) = 1.2;
  A(0, 1) = 0.3;
  A(1, 0) = -0.1;
  const FieldSnapshot chi = interpolate_vector(
      vs, [&A](const SmallVec& X, double) -> SmallVec { return A * X + SmallVec::Constant(X.size(), 0.5); }, 0.0);
  const double piola = piola_condition_residual(deformation_from_map(chi).cof);
  const double tol = 1e-10;
  const bool pass = r.passed(tol) && piola < 1e-12;
  std::ostringstream s;
  s << "samples = " << r.samples << '\n'
    << "seed = " << ctx.cfg.seed << '\n'
    << "max_cof_transpose_error = " << format("%.3e", r.max_cof_transpose_error) << '\n'
    << "max_cof_inverse_error = " << format("%.3e", r.max_cof_inverse_error) << '\n'
    << "max_mismatch_error = " << format("%.3e", r.max_mismatch_error) << '\n'
    << "affine_piola_residual = " << format("%.3e", piola) << '\n'
    << "status = " << (pass ? "pass" : "fail") << '\n';
  ctx.write("verify.txt", s.str());
  ctx.out << s.str();
  return pass ? kExitOk : kExitNonConvergence;
}

int cmd_mms(Context& ctx) {
  const auto& m = ctx.cfg.mms;
  std::vector<MmsStudy> studies{mms_elastic(m.h, ctx.cfg.material, m.T, m.dt_over_h),
                                mms_stokes(m.h, ctx.cfg.material, m.T, m.dt_over_h)};
  const std::string csv = convergence_csv(studies);
  ctx.write("convergence.csv", csv);
  ctx.out << csv;
  return kExitOk;
}

int cmd_compat(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  MeshPtr mesh = build_reference_mesh(cfg.geometry);
  LoadedData ld;
  std::string failure;
  try {
    ld = load_data(cfg, mesh);
    if (!ld.has_derived) ld.derived = construct_derived(ld.data, mesh, cfg.material);
  } catch (const FluxImbalance& e) {
    failure = e.what();
  }
  std::ostringstream s;
  int code = kExitOk;
  if (!failure.empty()) {
    s << "construct_derived = failed\nreason = " << failure << "\nfailed = (iv)\n";
    code = kExitCompat;
  } else {
    const CompatReport rep = check_compatibility(ld.data, ld.derived, mesh, cfg.material, cfg.fixed_point.compat_tol);
    s << rep.to_text();
    if (!rep.all_pass()) code = kExitCompat;
  }
  ctx.write("compat.txt", s.str());
  ctx.out << s.str();
  return code;
}

int cmd_dependence(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  MeshPtr mesh = build_reference_mesh(cfg.geometry);
  LoadedData base = load_data(cfg, mesh);
  const auto pert = generate_compatible_data(parse_data_family(cfg.dependence.perturbation),
                                             cfg.dependence.perturbation_amplitude, mesh, cfg.material);
  const DependenceSweep sw =
      dependence_sweep(base.data, pert.first, cfg.dependence.eps, mesh, cfg.material, cfg.fixed_point);
  std::ostringstream s;
  s << "eps,solution_difference,data_difference,ratio,guarded\n";
  for (size_t i = 0; i < sw.eps.size(); ++i) {
    const auto& r = sw.results[i];
    s << format("%.10e", sw.eps[i]) << ',' << format("%.10e", r.solution_difference) << ','
      << format("%.10e", r.data_difference) << ',' << format("%.10e", r.ratio) << ',' << r.guarded << '\n';
  }
  ctx.write("dependence.csv", s.str());
  ctx.out << s.str() << "slope = " << format("%.4f", sw.slope)
          << "\nratio_variation = " << format("%.4f", sw.ratio_variation) << '\n';
  return kExitOk;
}

int cmd_inequalities(Context& ctx) {
  const auto& q = ctx.cfg.inequalities;
  std::string csv;
  bool first = true;
  for (LemmaId id : q.lemmas) {
    const auto r = inequality_harness(id, q.params, q.samples, q.T_grid, ctx.cfg.seed);
    csv += r.to_csv(first);
    first = false;
  }
  ctx.write("inequalities.csv", csv);
  ctx.out << csv;
  return kExitOk;
}

void write_manifest(Context& ctx, int code, double seconds) {
  std::ostringstream s;
  s << "subcommand = " << ctx.subcommand << '\n'
    << "config_hash = " << ctx.cfg.hash() << '\n'
    << "code_version = " << FSI_VERSION << '\n'
    << "seed = " << ctx.cfg.seed << '\n'
    << "deterministic = " << (ctx.cfg.deterministic ? "true" : "false") << '\n'
    << "exit_code = " << code << '\n';
  if (!ctx.cfg.deterministic) s << "wall_seconds = " << format("%.3f", seconds) << '\n';
  s << "outputs =";
  for (const auto& o : ctx.outputs) s << ' ' << o;
  s << "\n\n[config]\n" << ctx.cfg.canonical();
  std::ofstream os(ctx.dir / "manifest.txt", std::ios::binary);
  os << s.str();
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"simulate", "verify", "mms", "compat", "dependence", "inequalities"};
  return names;
}

int run(const std::string& subcommand, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  int (*fn)(Context&) = nullptr;
  if (subcommand == "simulate") fn = cmd_simulate;
  else if (subcommand == "verify") fn = cmd_verify;
  else if (subcommand == "mms") fn = cmd_mms;
  else if (subcommand == "compat") fn = cmd_compat;
  else if (subcommand == "dependence") fn = cmd_dependence;
  else if (subcommand == "inequalities") fn = cmd_inequalities;
  if (!fn) {
    err << "unknown subcommand '" << subcommand << "'\n";
    return kExitUsage;
  }
  Context ctx{cfg, subcommand, fs::path(cfg.output.directory), {}, out};
  std::error_code ec;
  fs::create_directories(ctx.dir, ec);
  if (ec || !fs::is_directory(ctx.dir)) {
    err << "output directory " << ctx.dir.string() << " is not writable\n";
    return kExitUsage;
  }
  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    code = fn(ctx);
  } catch (const DegenerateDeformation& e) {
    err << "degenerate deformation: " << e.what() << '\n';
    code = kExitDegenerate;
  } catch (const CompatibilityError& e) {
    err << "compatibility failure: " << e.what() << '\n';
    code = kExitCompat;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const ShapeError& e) {
    err << "config error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const MeshError& e) {
    err << "config error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << '\n';
    code = kExitNonConvergence;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_manifest(ctx, code, secs);
  return code;
}

int run(const std::string& subcommand, const std::string& config_path, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run(subcommand, cfg, out, err);
}

}  // namespace fsi
