// Command-line driver: steady solves, single trajectories, convergence
// studies and the two reference experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>

#include "CLI11.hpp"
#include "json.hpp"

#include "burgers/config.hpp"
#include "burgers/error.hpp"
#include "burgers/kernels.hpp"
#include "burgers/steady.hpp"
#include "burgers/study.hpp"

namespace fs = std::filesystem;
using namespace burgers;
using nlohmann::json;

namespace {

RunConfig read_config(const std::string& path) { return path.empty() ? config_from_json(json::object()) : load_config(path); }

void write_to(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string());
  body(os);
  std::cout << "wrote " << path.string() << '\n';
}

int cmd_steady(const RunConfig& c, bool dump_mesh) {
  MeshPtr mesh = build_unit_square_mesh(c.n);
  if (!c.problem.dirichlet.empty()) mesh = tag_boundary(mesh, c.problem.dirichlet);
  const FeSpace space(mesh);
  const ClosedForm u = c.steady.u_inf;
  const ScalarFunction u_value = [u](Vec2 x) { return u.value(x); };

  SteadySpec spec;
  spec.nu = c.problem.nu;
  ScalarFunction forcing;
  BoundaryFunction flux;
  if (c.steady.f_inf) {
    const ClosedForm f = *c.steady.f_inf;
    forcing = [f](Vec2 x) { return f.value(x); };
  } else {
    const ManufacturedData d = manufacture_forcing(u.field(), spec.nu);
    forcing = d.forcing;
    flux = d.neumann_flux;
  }
  if (c.steady.mode == SteadySection::Mode::Manufactured) {
    spec.mode = SteadySpec::Mode::ManufacturedAnalytic;
    spec.u_inf = u.field();
  } else {
    spec.mode = SteadySpec::Mode::SolveFromForcing;
    spec.forcing = forcing;
    spec.neumann_flux = flux;
    const Vector integral = domain_load(space, u_value);
    spec.mean_value = c.steady.mean.value_or(std::accumulate(integral.begin(), integral.end(), 0.0));
  }
  const SteadyResult res = solve_steady(space, spec);
  const AssumptionReport rep = assumption_report(space, res.field, spec.nu);

  json out{{"n", c.n},
           {"h", mesh->h()},
           {"mode", c.steady.mode == SteadySection::Mode::Solve ? "solve" : "manufactured"},
           {"newton_iterations", res.iterations},
           {"multiplier", res.multiplier},
           {"residual", steady_residual(space, res.field, forcing, spec.nu, flux)},
           {"grad_norm", rep.grad_norm},
           {"n_hat", rep.n_hat},
           {"bound", rep.bound},
           {"bound_large", rep.bound_large},
           {"satisfied", rep.satisfied},
           {"delta_laplacian_norm", rep.delta_laplacian_norm}};
  if (!c.steady.f_inf) out["l2_error_vs_u_inf"] = l2_error(space, res.field, u_value);
  std::cout << out.dump(2) << '\n';

  write_to(c.output_dir / "steady_field.csv", [&](std::ostream& os) {
    os << "x1,x2,u\n";
    char buf[96];
    for (std::size_t i = 0; i < mesh->num_vertices(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", mesh->vertices()[i].x, mesh->vertices()[i].y,
                    res.field.values[i]);
      os << buf;
    }
  });
  if (dump_mesh) write_to(c.output_dir / "mesh.txt", [&](std::ostream& os) { write_mesh(os, *mesh); });
  return 0;
}

int cmd_simulate(const RunConfig& c) {
  PreparedProblem p = prepare_problem(c.problem, build_unit_square_mesh(c.n), c.k, c.t_end);
  p.evolution.record_every = c.record_every;
  const RunResult r = simulate(p);
  write_to(c.output_dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, r.record); });
  if (c.problem.controlled && r.record.size() >= 10) {
    const DecayReport d = fit_decay_rate(r.record, r.record.times.front(), r.record.times.back(), c.problem.nu,
                                         c.problem.c0, friedrichs_constant(*p.mesh));
    std::cout << json{{"fitted_rate", d.fitted_rate},
                      {"predicted_alpha", d.predicted_alpha},
                      {"c_lyp", d.c_lyp},
                      {"final_l2", r.record.l2.back()}}
                     .dump(2)
              << '\n';
  }
  return 0;
}

int cmd_study(const RunConfig& c) {
  ConvergenceStudy study(c.study);
  const RateTable t = study.rate_table();
  write_to(c.output_dir / "rates_state.csv", [&](std::ostream& os) { write_state_rates_csv(os, t); });
  if (!t.control.empty()) {
    write_to(c.output_dir / "rates_control.csv", [&](std::ostream& os) { write_control_rates_csv(os, t); });
  }
  write_state_rates_csv(std::cout, t);
  if (!t.control.empty()) write_control_rates_csv(std::cout, t);
  return 0;
}

int cmd_examples(const RunConfig& c, const std::string& which, bool skip_rates, int level) {
  ExampleOptions opts;
  opts.trajectory_level = level;
  opts.t_final = c.t_end;
  opts.k = c.k;
  opts.record_every = c.record_every;
  opts.with_rate_tables = !skip_rates;
  opts.study = c.study;
  if (which == "1" || which == "all") {
    const Example1Result r = run_example1(c.output_dir, opts);
    for (const auto& f : r.files) std::cout << "wrote " << f.string() << '\n';
  }
  if (which == "2" || which == "all") {
    const Example2Result r = run_example2(c.output_dir, opts);
    for (const auto& f : r.files) std::cout << "wrote " << f.string() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-element simulator for Neumann feedback stabilization of the forced 2D Burgers equation"};
  app.require_subcommand(1);
  std::string config_path;
  std::string output_override;
  app.add_option("-c,--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("-o,--output", output_override, "Output directory (overrides output.dir)");
  std::string isa;
  app.add_option("--isa", isa, "Force a kernel variant: scalar, avx2, neon")
      ->check(CLI::IsMember({"scalar", "avx2", "neon"}));

  auto* steady = app.add_subcommand("steady", "Solve the steady state and report the smallness diagnostics");
  int steady_n = 0;
  bool dump_mesh = false;
  steady->add_option("-n,--subdivisions", steady_n, "Mesh subdivisions per side (overrides domain.n)");
  steady->add_flag("--dump-mesh", dump_mesh, "Also write the mesh in plain-text form");

  auto* sim = app.add_subcommand("simulate", "Run one trajectory and write its diagnostics CSV");
  int sim_n = 0;
  sim->add_option("-n,--subdivisions", sim_n, "Mesh subdivisions per side (overrides domain.n)");

  auto* study = app.add_subcommand("study", "Mesh-refinement study; writes rates_state.csv and rates_control.csv");

  auto* ex = app.add_subcommand("examples", "Reproduce the whole-boundary and partial-boundary experiments");
  std::string which = "all";
  bool skip_rates = false;
  int level = 32;
  ex->add_option("--which", which, "1, 2 or all")->check(CLI::IsMember({"1", "2", "all"}));
  ex->add_flag("--skip-rates", skip_rates, "Skip the convergence tables");
  ex->add_option("--level", level, "Mesh subdivisions for the trajectory runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!isa.empty()) {
      const kernels::Isa want = isa == "avx2" ? kernels::Isa::Avx2 : isa == "neon" ? kernels::Isa::Neon : kernels::Isa::Scalar;
      if (!kernels::set_active_isa(want)) {
        std::cerr << "kernel variant '" << isa << "' is not available on this machine\n";
        return 2;
      }
    }
    RunConfig c = read_config(config_path);
    if (!output_override.empty()) c.output_dir = output_override;
    if (*steady) {
      if (steady_n > 0) c.n = steady_n;
      return cmd_steady(c, dump_mesh);
    }
    if (*sim) {
      if (sim_n > 0) c.n = sim_n;
      return cmd_simulate(c);
    }
    if (*study) return cmd_study(c);
    if (*ex) return cmd_examples(c, which, skip_rates, level);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
