#include "burgers/steady.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "burgers/error.hpp"

namespace burgers {

ManufacturedData manufacture_forcing(const AnalyticField& u_inf, double nu) {
  if (!(nu > 0.0)) throw InvalidParameter("viscosity must be positive");
  ManufacturedData d;
  d.forcing = [u_inf, nu](Vec2 p) {
    const Vec2 g = u_inf.gradient(p);
    return -nu * u_inf.laplacian(p) + u_inf.value(p) * (g.x + g.y);
  };
  d.neumann_flux = [u_inf](Vec2 p, Vec2 n) { return dot(u_inf.gradient(p), n); };
  return d;
}

namespace {

Vector steady_load(const FeSpace& space, const ScalarFunction& forcing, double nu, const BoundaryFunction& flux) {
  Vector load = forcing ? domain_load(space, forcing) : Vector(space.size(), 0.0);
  if (flux) {
    const Vector g = boundary_load(space, boundary_values(space, flux), TagSet::all());
    kernels::axpy(nu, g, load);
  }
  return load;
}

Vector steady_operator(const FeSpace& space, const SparseMatrix& k, const FeField& u, double nu,
                       const Vector& load) {
  Vector f = convection_residual(space, u, u);
  kernels::axpy(nu, spmv(k, u.values), f);
  kernels::axpy(-1.0, load, f);
  return f;
}

double bordered_norm(const Vector& f, double mu, const Vector& c, const Vector& u, double mean) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = f[i] + mu * c[i];
    s += r * r;
  }
  const double g = kernels::dot(c, u) - mean;
  return std::sqrt(s + g * g);
}

}  // namespace

SteadyResult solve_steady(const FeSpace& space, const SteadySpec& spec, const SteadyOptions& opts) {
  if (!(spec.nu > 0.0)) throw InvalidParameter("viscosity must be positive");
  if (spec.mode == SteadySpec::Mode::ManufacturedAnalytic) {
    if (!spec.u_inf.value) throw InvalidParameter("manufactured mode needs a closed-form steady state");
    return {interpolate(spec.u_inf.value, space.mesh()), 0.0, 0, {}};
  }

  const SparseMatrix k = assemble_stiffness(space);
  const Vector c = mass_row_sums(space);
  const Vector load = steady_load(space, spec.forcing, spec.nu, spec.neumann_flux);

  FeField u = opts.initial_guess ? *opts.initial_guess : FeField::zeros(space.mesh());
  space.require_same_mesh(u);
  double mu = 0.0;
  Vector f = steady_operator(space, k, u, spec.nu, load);
  double norm = bordered_norm(f, mu, c, u.values, spec.mean_value);

  SteadyResult out;
  out.residual_history.push_back(norm);
  for (int it = 1; norm > opts.tol; ++it) {
    if (it > opts.max_iterations) {
      throw NonConvergence("steady Newton did not converge", out.residual_history);
    }
    SparseMatrix jac = assemble_convection_by_transport(space, u);
    jac.add_scaled(1.0, assemble_convection_by_gradient(space, u));
    jac.add_scaled(spec.nu, k);

    BorderedSystem sys{std::move(jac), c, f, kernels::dot(c, u.values) - spec.mean_value};
    for (std::size_t i = 0; i < sys.rhs.size(); ++i) sys.rhs[i] = -(f[i] + mu * c[i]);
    sys.constraint_value = -sys.constraint_value;
    const BorderedSolution step = solve_bordered(sys);

    double scale = 1.0;
    for (int halving = 0;; ++halving) {
      FeField trial = u;
      kernels::axpy(scale, step.x, trial.values);
      const double trial_mu = mu + scale * step.multiplier;
      Vector trial_f = steady_operator(space, k, trial, spec.nu, load);
      const double trial_norm = bordered_norm(trial_f, trial_mu, c, trial.values, spec.mean_value);
      if (trial_norm < norm || trial_norm <= opts.tol) {
        u = std::move(trial);
        mu = trial_mu;
        f = std::move(trial_f);
        norm = trial_norm;
        break;
      }
      if (halving == opts.max_halvings) {
        out.residual_history.push_back(trial_norm);
        throw NonConvergence("steady Newton step could not reduce the residual", out.residual_history);
      }
      scale *= 0.5;
    }
    out.residual_history.push_back(norm);
    out.iterations = it;
  }
  out.field = std::move(u);
  out.multiplier = mu;
  return out;
}

double steady_residual(const FeSpace& space, const FeField& u, const ScalarFunction& forcing, double nu,
                       const BoundaryFunction& neumann_flux) {
  space.require_same_mesh(u);
  const Vector load = steady_load(space, forcing, nu, neumann_flux);
  return norm2(steady_operator(space, assemble_stiffness(space), u, nu, load));
}

std::optional<double> trilinear_ratio(const FeSpace& space, const FeField& v, const FeField& z,
                                      const FeField& phi) {
  const SparseMatrix k = assemble_stiffness(space);
  auto semi = [&](const FeField& f) { return std::sqrt(std::max(0.0, kernels::dot(f.values, spmv(k, f.values)))); };
  const double denom = semi(v) * semi(z) * semi(phi);
  if (!(denom > 1e-300)) return std::nullopt;
  return std::abs(trilinear_B(space, v, z, phi)) / denom;
}

double max_trilinear_ratio(const FeSpace& space, const std::vector<FieldTriple>& triples) {
  double best = -1.0;
  for (const auto& t : triples) {
    if (auto r = trilinear_ratio(space, t[0], t[1], t[2])) best = std::max(best, *r);
  }
  if (best < 0.0) throw NoValidSample("every triple had a vanishing gradient");
  return best;
}

double estimate_N(const FeSpace& space, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidParameter("at least one sample required");
  std::mt19937_64 rng(seed);
  // Explicit mapping to [-1, 1) keeps samples identical across standard libraries.
  auto uniform = [&rng] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
  const Vector c = mass_row_sums(space);
  double area = 0.0;
  for (double x : c) area += x;

  auto random_field = [&] {
    Vector v(space.size());
    for (double& x : v) x = uniform();
    const double mean = kernels::dot(c, v) / area;
    for (double& x : v) x -= mean;
    return FeField(space.mesh(), std::move(v));
  };

  std::vector<FieldTriple> triples;
  triples.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    FeField v = random_field();
    FeField z = random_field();
    FeField phi = random_field();
    triples.push_back({std::move(v), std::move(z), std::move(phi)});
  }
  return max_trilinear_ratio(space, triples);
}

AssumptionReport assumption_report(const FeSpace& space, const FeField& u_inf, double nu, int samples,
                                   std::uint64_t seed) {
  if (!(nu > 0.0)) throw InvalidParameter("viscosity must be positive");
  AssumptionReport r;
  const Norms n = norms(space, u_inf);
  r.grad_norm = n.h1_semi;
  r.n_hat = estimate_N(space, samples, seed);
  r.bound = nu / (4.0 * r.n_hat);
  r.bound_large = 3.0 * nu / (4.0 * r.n_hat);
  r.satisfied = r.grad_norm <= r.bound;
  const FeField lap = discrete_laplacian(space, u_inf, [](Vec2, Vec2) { return 0.0; });
  r.delta_laplacian_norm = norms(space, lap).l2;
  return r;
}

}  // namespace burgers
