#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "burgers/analytic.hpp"
#include "burgers/fem.hpp"

namespace burgers {

/// Forcing and Neumann data that make a given closed form an exact steady
/// state of  -nu Lap u + u (grad u . 1) = f,  du/dn = g.
struct ManufacturedData {
  ScalarFunction forcing;
  BoundaryFunction neumann_flux;
};

ManufacturedData manufacture_forcing(const AnalyticField& u_inf, double nu);

struct SteadySpec {
  enum class Mode { ManufacturedAnalytic, SolveFromForcing };
  Mode mode = Mode::SolveFromForcing;
  double nu = 0.1;
  /// Used in ManufacturedAnalytic mode.
  AnalyticField u_inf;
  /// Used in SolveFromForcing mode. An empty flux means zero Neumann data.
  ScalarFunction forcing;
  BoundaryFunction neumann_flux;
  /// Prescribed integral of the solution over the domain.
  double mean_value = 0.0;
};

struct SteadyOptions {
  double tol = 1e-10;
  int max_iterations = 50;
  int max_halvings = 8;
  std::optional<FeField> initial_guess;
};

struct SteadyResult {
  FeField field;
  /// Lagrange multiplier of the mean constraint (a constant source term).
  double multiplier = 0.0;
  int iterations = 0;
  /// Euclidean norm of the bordered residual, one entry per iterate.
  std::vector<double> residual_history;
};

/// Damped Newton on  nu K u + B(u; u, .) - load + mu c = 0,  c^T u = mean.
SteadyResult solve_steady(const FeSpace& space, const SteadySpec& spec, const SteadyOptions& opts = {});

/// Euclidean norm of  nu K u + B(u; u, .) - (f, .) - nu <g, .>.
double steady_residual(const FeSpace& space, const FeField& u, const ScalarFunction& forcing, double nu,
                       const BoundaryFunction& neumann_flux = {});

/// |B(v; z, phi)| / (|v|_1 |z|_1 |phi|_1), or nullopt when a seminorm vanishes.
std::optional<double> trilinear_ratio(const FeSpace& space, const FeField& v, const FeField& z,
                                      const FeField& phi);

using FieldTriple = std::array<FeField, 3>;

/// Maximum of trilinear_ratio over the given triples, skipping degenerate
/// ones. Throws NoValidSample when none is usable.
double max_trilinear_ratio(const FeSpace& space, const std::vector<FieldTriple>& triples);

/// Running maximum of trilinear_ratio over seeded random zero-mean P1
/// triples; a lower bound on the continuity constant N. Throws NoValidSample
/// when every triple is degenerate.
double estimate_N(const FeSpace& space, int samples, std::uint64_t seed);

struct AssumptionReport {
  double grad_norm = 0.0;
  double n_hat = 0.0;
  /// nu / (4 n_hat)
  double bound = 0.0;
  /// 3 nu / (4 n_hat), the large root of the quadratic factorization.
  double bound_large = 0.0;
  bool satisfied = false;
  double delta_laplacian_norm = 0.0;
};

AssumptionReport assumption_report(const FeSpace& space, const FeField& u_inf, double nu, int samples = 32,
                                   std::uint64_t seed = 1);

}  // namespace burgers
