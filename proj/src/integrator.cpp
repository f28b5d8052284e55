#include "burgers/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "burgers/error.hpp"

namespace burgers {

void EvolutionConfig::validate() const {
  if (!(nu > 0.0)) throw InvalidParameter("viscosity must be positive");
  if (!(k > 0.0 && k < 1.0)) throw InvalidParameter("time step must satisfy 0 < k < 1");
  if (!(t_end >= k)) throw InvalidParameter("final time must be at least one step");
  if (newton_max < 1 || !(newton_tol > 0.0)) throw InvalidParameter("bad Newton settings");
  if (record_every < 1) throw InvalidParameter("record_every must be positive");
  if (control) {
    control->validate();
    if (control->nu != nu) throw InvalidParameter("control viscosity differs from the evolution viscosity");
  }
}

int EvolutionConfig::num_steps() const { return static_cast<int>(std::llround(t_end / k)); }

void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec) {
  os << "time,l2,h1semi,lyapunov,control_l2,newton_iters\n";
  char buf[160];
  for (std::size_t i = 0; i < rec.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", rec.times[i], rec.l2[i], rec.h1_semi[i],
                  rec.lyapunov[i], rec.control_l2[i], rec.newton_iterations[i]);
    os << buf;
  }
}

BackwardEuler::BackwardEuler(const FeSpace& space, SteadyCoefficient u_inf, EvolutionConfig cfg)
    : space_(space), u_inf_(std::move(u_inf)), cfg_(std::move(cfg)) {
  cfg_.validate();
  space_.require_same_mesh(u_inf_.field);
  mass_ = assemble_mass(space_);
  stiffness_ = assemble_stiffness(space_);
  constant_ = mass_.scaled(1.0 / cfg_.k);
  constant_.add_scaled(cfg_.nu, stiffness_);
  constant_.add_scaled(1.0, assemble_convection_by_transport(space_, u_inf_.field));
  constant_.add_scaled(1.0, assemble_convection_by_gradient(space_, u_inf_.field));
  if (cfg_.control) constant_.add_scaled(1.0, control_linear_matrix(space_, u_inf_, *cfg_.control));
  dirichlet_ = space_.mesh()->dirichlet_vertices();
}

Vector BackwardEuler::residual(const FeField& w, const FeField& w_prev) const {
  space_.require_same_mesh(w);
  space_.require_same_mesh(w_prev);
  Vector r = convection_residual(space_, w, w);
  kernels::axpy(1.0, spmv(constant_, w.values), r);
  kernels::axpy(-1.0 / cfg_.k, spmv(mass_, w_prev.values), r);
  if (cfg_.control) {
    Vector cubic = boundary_cubic_residual(space_, w, cfg_.control->active);
    kernels::axpy(2.0 / (9.0 * cfg_.control->c0), cubic, r);
  }
  for (int i : dirichlet_) r[i] = w.values[i];
  return r;
}

SparseMatrix BackwardEuler::jacobian(const FeField& w) const {
  SparseMatrix j = constant_;
  j.add_scaled(1.0, assemble_convection_by_transport(space_, w));
  j.add_scaled(1.0, assemble_convection_by_gradient(space_, w));
  if (cfg_.control) {
    j.add_scaled(2.0 / (9.0 * cfg_.control->c0), boundary_cubic_jacobian(space_, w, cfg_.control->active));
  }
  j.eliminate(dirichlet_);
  return j;
}

StepResult BackwardEuler::step(const FeField& w_prev) {
  space_.require_same_mesh(w_prev);
  StepResult out;
  if (cfg_.nonlinear == NonlinearSolve::PicardLagged) {
    SparseMatrix a = constant_;
    a.add_scaled(1.0, assemble_convection_by_transport(space_, w_prev));
    if (cfg_.control) {
      // Cubic weight frozen: (2/(9 c0)) <w_prev^2 W, phi>.
      EdgeValues sq = trace_values(space_, w_prev);
      for (auto& e : sq) {
        for (double& x : e) x *= x;
      }
      a.add_scaled(2.0 / (9.0 * cfg_.control->c0), assemble_boundary_mass(space_, sq, cfg_.control->active));
    }
    a.eliminate(dirichlet_);
    Vector rhs = spmv(mass_, w_prev.values);
    for (double& x : rhs) x /= cfg_.k;
    for (int i : dirichlet_) rhs[i] = 0.0;
    lu_.factorize(a);
    out.w = FeField(space_.mesh(), lu_.solve(rhs));
    out.iterations = 1;
    return out;
  }

  FeField w = w_prev;
  for (int i : dirichlet_) w.values[i] = 0.0;
  Vector r = residual(w, w_prev);
  double rn = norm2(r);
  out.residual_history.push_back(rn);
  while (rn > cfg_.newton_tol) {
    if (out.iterations == cfg_.newton_max) {
      throw NonConvergence("backward Euler Newton did not converge", out.residual_history);
    }
    lu_.factorize(jacobian(w));
    const Vector delta = lu_.solve(r);
    kernels::axpy(-1.0, delta, w.values);
    ++out.iterations;
    r = residual(w, w_prev);
    rn = norm2(r);
    out.residual_history.push_back(rn);
    if (!std::isfinite(rn)) throw NonConvergence("backward Euler Newton diverged", out.residual_history);
  }
  out.w = std::move(w);
  return out;
}

double lyapunov(const SparseMatrix& mass, const FeField& w) {
  return 0.5 * kernels::dot(w.values, spmv(mass, w.values));
}

RunResult run(const FeSpace& space, const FeField& w0, const EvolutionConfig& cfg, const SteadyCoefficient& u_inf,
              const StepObserver& observer) {
  BackwardEuler stepper(space, u_inf, cfg);
  const SparseMatrix& m = stepper.mass();
  const SparseMatrix& k = stepper.stiffness();

  RunResult out;
  auto& rec = out.record;
  auto record = [&](double t, const FeField& w, int iters) {
    const double mw = kernels::dot(w.values, spmv(m, w.values));
    rec.times.push_back(t);
    rec.l2.push_back(std::sqrt(std::max(0.0, mw)));
    rec.h1_semi.push_back(std::sqrt(std::max(0.0, kernels::dot(w.values, spmv(k, w.values)))));
    rec.lyapunov.push_back(0.5 * mw);
    rec.control_l2.push_back(cfg.control ? control_boundary_l2(space, w, u_inf, *cfg.control) : 0.0);
    rec.newton_iterations.push_back(iters);
  };

  FeField w = w0;
  space.require_same_mesh(w);
  for (int i : stepper.dirichlet_vertices()) w.values[i] = 0.0;
  record(0.0, w, 0);
  if (observer) observer(0, 0.0, w);
  const int steps = cfg.num_steps();
  for (int n = 1; n <= steps; ++n) {
    StepResult s = stepper.step(w);
    w = std::move(s.w);
    const double t = n * cfg.k;
    if (n % cfg.record_every == 0 || n == steps) record(t, w, s.iterations);
    if (observer) observer(n, t, w);
  }
  out.final_state = std::move(w);
  return out;
}

FeField initial_datum(const FeSpace& space, const AnalyticField& w0, InitialProjection how) {
  FeField out = interpolate(w0.value, space.mesh());
  if (how == InitialProjection::EllipticProjection) {
    SparseMatrix a = assemble_stiffness(space);
    a.add_scaled(1.0, assemble_mass(space));
    Vector rhs = domain_load(space, w0.value);
    // (grad w0, grad phi_i) by the 6-point rule
    const auto& rule = quadrature::triangle();
    const auto& verts = space.mesh()->vertices();
    const auto& tris = space.mesh()->triangles();
    for (std::size_t t = 0; t < tris.size(); ++t) {
      const auto& tri = tris[t];
      const auto& g = space.gradients(t);
      for (int q = 0; q < 6; ++q) {
        const auto& lam = rule.points[q];
        const Vec2 p = lam[0] * verts[tri[0]] + lam[1] * verts[tri[1]] + lam[2] * verts[tri[2]];
        const Vec2 gw = w0.gradient(p);
        for (int i = 0; i < 3; ++i) rhs[tri[i]] += space.area(t) * rule.weights[q] * dot(gw, g[i]);
      }
    }
    out.values = solve_spd(a, rhs, 1e-12).x;
  }
  for (int i : space.mesh()->dirichlet_vertices()) out.values[i] = 0.0;
  return out;
}

double predicted_decay_rate(double nu, double c0, double friedrichs) {
  return std::min(nu / 2.0, c0 + 7.0 * nu / 4.0) / (2.0 * friedrichs);
}

double lyapunov_constant(double nu, double c0, double friedrichs) {
  return 2.0 / friedrichs * std::min(7.0 * nu / 8.0, c0 / 2.0 + 7.0 * nu / 8.0);
}

DecayReport fit_decay_rate(const TrajectoryRecord& rec, double t0, double t1, double nu, double c0,
                           double friedrichs) {
  if (!(t1 > t0)) throw FitDomainError("empty fit window");
  if (rec.size() == 0 || t0 < rec.times.front() - 1e-12 || t1 > rec.times.back() + 1e-12) {
    throw FitDomainError("fit window outside the trajectory");
  }
  std::vector<double> ts, ys;
  for (std::size_t i = 0; i < rec.size(); ++i) {
    const double t = rec.times[i];
    if (t < t0 - 1e-12 || t > t1 + 1e-12) continue;
    if (!(rec.l2[i] > 0.0)) throw FitDomainError("nonpositive norm inside the fit window");
    ts.push_back(t);
    ys.push_back(std::log(rec.l2[i]));
  }
  const std::size_t n = ts.size();
  if (n < 10) throw FitDomainError("fewer than 10 samples in the fit window");
  double tm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < n; ++i) tm += ts[i], ym += ys[i];
  tm /= static_cast<double>(n);
  ym /= static_cast<double>(n);
  double sty = 0.0, stt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sty += (ts[i] - tm) * (ys[i] - ym);
    stt += (ts[i] - tm) * (ts[i] - tm);
  }
  const double slope = sty / stt;
  DecayReport r;
  r.fitted_rate = -slope;
  r.window_start = t0;
  r.window_end = t1;
  r.predicted_alpha = predicted_decay_rate(nu, c0, friedrichs);
  r.c_lyp = lyapunov_constant(nu, c0, friedrichs);
  r.samples = n;
  return r;
}

}  // namespace burgers
