#include "burgers/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>

#include "burgers/error.hpp"
#include "burgers/steady.hpp"

namespace burgers {

PreparedProblem prepare_problem(const ProblemConfig& problem, const MeshPtr& untagged_mesh, double k, double t_end) {
  PreparedProblem p;
  p.mesh = problem.dirichlet.empty() ? untagged_mesh : tag_boundary(untagged_mesh, problem.dirichlet);
  p.space = std::make_unique<FeSpace>(p.mesh);
  const ClosedForm u = problem.u_inf;
  const ScalarFunction u_value = [u](Vec2 x) { return u.value(x); };

  if (problem.coefficient_source == CoefficientSource::DiscreteSteady) {
    SteadySpec spec;
    spec.mode = SteadySpec::Mode::SolveFromForcing;
    spec.nu = problem.nu;
    if (problem.forcing) {
      const ClosedForm f = *problem.forcing;
      spec.forcing = [f](Vec2 x) { return f.value(x); };
    } else {
      const ManufacturedData data = manufacture_forcing(u.field(), problem.nu);
      spec.forcing = data.forcing;
      spec.neumann_flux = data.neumann_flux;
    }
    if (problem.steady_mean) {
      spec.mean_value = *problem.steady_mean;
    } else {
      const Vector integral = domain_load(*p.space, u_value);
      spec.mean_value = std::accumulate(integral.begin(), integral.end(), 0.0);
    }
    SteadyOptions opts;
    opts.initial_guess = interpolate(u_value, p.mesh);
    p.steady = SteadyCoefficient::discrete(solve_steady(*p.space, spec, opts).field);
  } else {
    p.steady = SteadyCoefficient::from_closed_form(u_value, p.mesh);
  }

  p.w0 = initial_datum(*p.space, problem.w0.field(), problem.initial);
  p.evolution.nu = problem.nu;
  p.evolution.k = k;
  p.evolution.t_end = t_end;
  p.evolution.nonlinear = problem.nonlinear;
  p.evolution.coefficient_source = problem.coefficient_source;
  if (problem.controlled) p.evolution.control = ControlParams{problem.nu, problem.c0, TagSet::control()};
  p.evolution.validate();
  return p;
}

RunResult simulate(const PreparedProblem& p, const StepObserver& observer) {
  return run(*p.space, p.w0, p.evolution, p.steady, observer);
}

std::vector<double> compute_rates(const std::vector<double>& errors, const std::vector<double>& hs) {
  if (errors.size() != hs.size() || errors.size() < 2) {
    throw InvalidParameter("rates need matching error and mesh-size lists of length >= 2");
  }
  for (double e : errors) {
    if (!(e > 0.0)) throw InvalidParameter("errors must be positive to compute rates");
  }
  std::vector<double> rates;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (!(hs[i] > 0.0 && hs[i] < hs[i - 1])) throw InvalidParameter("mesh sizes must decrease");
    rates.push_back(std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]));
  }
  return rates;
}

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_opt(const std::optional<double>& x) { return x ? fmt17(*x) : std::string(); }

}  // namespace

void write_state_rates_csv(std::ostream& os, const RateTable& t) {
  os << "h,error_l2,rate_l2,error_h1,rate_h1\n";
  for (const auto& r : t.state) {
    os << fmt17(r.h) << ',' << fmt17(r.error_l2) << ',' << fmt_opt(r.rate_l2) << ',' << fmt17(r.error_h1) << ','
       << fmt_opt(r.rate_h1) << '\n';
  }
}

void write_control_rates_csv(std::ostream& os, const RateTable& t) {
  os << "h,error_control,rate_control\n";
  for (const auto& r : t.control) {
    os << fmt17(r.h) << ',' << fmt17(r.error_control) << ',' << fmt_opt(r.rate_control) << '\n';
  }
}

void write_control_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << "time,control_l2\n";
  for (std::size_t i = 0; i < rec.size(); ++i) os << fmt17(rec.times[i]) << ',' << fmt17(rec.control_l2[i]) << '\n';
}

ConvergenceStudy::ConvergenceStudy(StudyConfig cfg) : cfg_(std::move(cfg)) {
  if (cfg_.mesh_levels.empty()) throw InvalidConfiguration("study needs at least one mesh level");
  const double steps = cfg_.t_eval / cfg_.k;
  if (!(cfg_.t_eval > 0.0) || std::abs(steps - std::round(steps)) > 1e-9 * steps) {
    throw InvalidConfiguration("t_eval must be a positive multiple of the time step");
  }
  int coarsest = cfg_.reference_level;
  for (int n : cfg_.mesh_levels) coarsest = std::min(coarsest, n);
  if (coarsest < 1) throw InvalidConfiguration("mesh levels must be positive");
  // Every level and the reference must sit on one halving chain from the coarsest.
  MeshPtr m = build_unit_square_mesh(coarsest);
  int n = coarsest;
  meshes_[n] = m;
  while (n < cfg_.reference_level) {
    m = refine_uniform(m);
    n *= 2;
    meshes_[n] = m;
  }
  if (n != cfg_.reference_level) {
    throw InvalidConfiguration("reference level is not a nested refinement of the coarsest level");
  }
  for (int level : cfg_.mesh_levels) {
    if (!meshes_.count(level)) throw InvalidConfiguration("mesh level " + std::to_string(level) + " is not nested in the reference");
  }
}

const ConvergenceStudy::Solution& ConvergenceStudy::solution(int level) {
  auto it = solutions_.find(level);
  if (it != solutions_.end()) return *it->second;
  if (!meshes_.count(level)) throw InvalidConfiguration("level not part of this study");
  auto s = std::make_unique<Solution>();
  s->problem = prepare_problem(cfg_.problem, meshes_.at(level), cfg_.k, cfg_.t_eval);
  s->problem.evolution.record_every = std::max(1, s->problem.evolution.num_steps());
  s->state = simulate(s->problem).final_state;
  return *solutions_.emplace(level, std::move(s)).first->second;
}

std::pair<double, double> ConvergenceStudy::state_errors(int level) {
  const Solution& ref = solution(cfg_.reference_level);
  const Solution& sol = solution(level);
  FeField diff = prolong(sol.state, ref.problem.mesh);
  kernels::axpy(-1.0, ref.state.values, diff.values);
  const Norms n = norms(*ref.problem.space, diff);
  return {n.l2, n.h1_semi};
}

double ConvergenceStudy::control_errors(int level) {
  if (!cfg_.problem.controlled) throw InvalidConfiguration("control errors need a controlled study");
  const Solution& ref = solution(cfg_.reference_level);
  const Solution& sol = solution(level);
  const FeSpace& space = *ref.problem.space;
  const ControlParams& p = *ref.problem.evolution.control;
  EdgeValues diff = control_trace(space, prolong(sol.state, ref.problem.mesh), ref.problem.steady, p);
  const EdgeValues vref = control_trace(space, ref.state, ref.problem.steady, p);
  for (std::size_t e = 0; e < diff.size(); ++e) {
    for (int q = 0; q < 3; ++q) {
      const double d = diff[e][q] - vref[e][q];
      diff[e][q] = d * d;
    }
  }
  return std::sqrt(boundary_integral(space, diff, p.active));
}

RateTable ConvergenceStudy::rate_table() {
  RateTable t;
  std::vector<double> hs, el2, eh1, ec;
  for (int level : cfg_.mesh_levels) {
    const auto [l2, h1] = state_errors(level);
    hs.push_back(meshes_.at(level)->h());
    el2.push_back(l2);
    eh1.push_back(h1);
    if (cfg_.problem.controlled) ec.push_back(control_errors(level));
  }
  auto rates_or_empty = [&](const std::vector<double>& e) {
    const bool ok = e.size() >= 2 && std::all_of(e.begin(), e.end(), [](double x) { return x > 0.0; });
    return ok ? compute_rates(e, hs) : std::vector<double>{};
  };
  const auto rl2 = rates_or_empty(el2);
  const auto rh1 = rates_or_empty(eh1);
  const auto rc = rates_or_empty(ec);
  for (std::size_t i = 0; i < hs.size(); ++i) {
    StateRateRow row{hs[i], el2[i], std::nullopt, eh1[i], std::nullopt};
    if (i > 0 && !rl2.empty()) row.rate_l2 = rl2[i - 1];
    if (i > 0 && !rh1.empty()) row.rate_h1 = rh1[i - 1];
    t.state.push_back(row);
    if (!ec.empty()) {
      ControlRateRow crow{hs[i], ec[i], std::nullopt};
      if (i > 0 && !rc.empty()) crow.rate_control = rc[i - 1];
      t.control.push_back(crow);
    }
  }
  return t;
}

ProblemConfig example1_problem() { return ProblemConfig{}; }

ProblemConfig example2_problem() {
  ProblemConfig p;
  p.u_inf = ClosedForm{0.0, -0.2, 0.0, 0.0, 0.0};
  p.w0 = ClosedForm{0.0, 0.0, 0.0, 1.0, 0.0};
  p.dirichlet = {BoundarySegment{0, 1.0, 0.0, 1.0}};
  return p;
}

namespace {

std::filesystem::path write_file(const std::filesystem::path& dir, const std::string& name,
                                 const std::function<void(std::ostream&)>& body) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  body(os);
  return path;
}

TrajectoryRecord trajectory(const ProblemConfig& problem, const ExampleOptions& opts, double* max_dirichlet = nullptr) {
  PreparedProblem p = prepare_problem(problem, build_unit_square_mesh(opts.trajectory_level), opts.k, opts.t_final);
  p.evolution.record_every = opts.record_every;
  StepObserver obs;
  if (max_dirichlet) {
    const auto nodes = p.mesh->dirichlet_vertices();
    obs = [nodes, max_dirichlet](int, double, const FeField& w) {
      for (int i : nodes) *max_dirichlet = std::max(*max_dirichlet, std::abs(w.values[i]));
    };
  }
  return simulate(p, obs).record;
}

}  // namespace

Example1Result run_example1(const std::filesystem::path& output_dir, const ExampleOptions& opts) {
  Example1Result r;
  ProblemConfig problem = example1_problem();
  problem.controlled = true;
  r.controlled = trajectory(problem, opts);
  problem.controlled = false;
  r.uncontrolled = trajectory(problem, opts);

  r.files.push_back(write_file(output_dir, "example1_controlled.csv",
                               [&](std::ostream& os) { write_trajectory_csv(os, r.controlled); }));
  r.files.push_back(write_file(output_dir, "example1_uncontrolled.csv",
                               [&](std::ostream& os) { write_trajectory_csv(os, r.uncontrolled); }));
  r.files.push_back(write_file(output_dir, "example1_control.csv",
                               [&](std::ostream& os) { write_control_csv(os, r.controlled); }));
  if (opts.with_rate_tables) {
    StudyConfig sc = opts.study;
    sc.problem = example1_problem();
    ConvergenceStudy study(sc);
    r.rates = study.rate_table();
    r.files.push_back(write_file(output_dir, "rates_state.csv",
                                 [&](std::ostream& os) { write_state_rates_csv(os, *r.rates); }));
    r.files.push_back(write_file(output_dir, "rates_control.csv",
                                 [&](std::ostream& os) { write_control_rates_csv(os, *r.rates); }));
  }
  return r;
}

Example2Result run_example2(const std::filesystem::path& output_dir, const ExampleOptions& opts) {
  Example2Result r;
  ProblemConfig problem = example2_problem();
  problem.controlled = true;
  r.controlled = trajectory(problem, opts, &r.max_dirichlet_value);
  problem.controlled = false;
  r.uncontrolled = trajectory(problem, opts);
  r.files.push_back(write_file(output_dir, "example2_controlled.csv",
                               [&](std::ostream& os) { write_trajectory_csv(os, r.controlled); }));
  r.files.push_back(write_file(output_dir, "example2_uncontrolled.csv",
                               [&](std::ostream& os) { write_trajectory_csv(os, r.uncontrolled); }));
  r.files.push_back(write_file(output_dir, "example2_control.csv",
                               [&](std::ostream& os) { write_control_csv(os, r.controlled); }));
  return r;
}

}  // namespace burgers
