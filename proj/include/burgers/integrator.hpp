#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "burgers/control.hpp"
#include "burgers/fem.hpp"

namespace burgers {

enum class NonlinearSolve { Newton, PicardLagged };
enum class CoefficientSource { DiscreteSteady, AnalyticSteady };

struct EvolutionConfig {
  double nu = 0.1;
  double k = 0.0005;
  double t_end = 1.0;
  NonlinearSolve nonlinear = NonlinearSolve::Newton;
  double newton_tol = 1e-10;
  int newton_max = 20;
  /// Empty means uncontrolled: zero Neumann data on every non-Dirichlet edge.
  std::optional<ControlParams> control;
  CoefficientSource coefficient_source = CoefficientSource::AnalyticSteady;
  /// Store diagnostics every this many steps (the last step is always kept).
  int record_every = 1;

  /// Throws InvalidParameter on 0 < k < 1 or t_end >= k violations.
  void validate() const;
  int num_steps() const;
};

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> l2;
  std::vector<double> h1_semi;
  std::vector<double> lyapunov;
  std::vector<double> control_l2;
  std::vector<int> newton_iterations;

  std::size_t size() const { return times.size(); }
};

/// Header `time,l2,h1semi,lyapunov,control_l2,newton_iters`, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const TrajectoryRecord& rec);

struct StepResult {
  FeField w;
  int iterations = 0;
  std::vector<double> residual_history;
};

/// Backward Euler for the shifted equation
///   (W - W_prev)/k + nu K W + B(u; W) + B(W; u) + B(W; W) + boundary(W) = 0
/// with Newton (or one lagged Picard solve) per step. Constant operators
/// are assembled once; DirichletZero vertices are eliminated.
class BackwardEuler {
 public:
  BackwardEuler(const FeSpace& space, SteadyCoefficient u_inf, EvolutionConfig cfg);

  StepResult step(const FeField& w_prev);
  /// Residual of one step in Galerkin form (Dirichlet rows hold W_i).
  Vector residual(const FeField& w, const FeField& w_prev) const;
  /// Exact derivative of residual() with respect to w.
  SparseMatrix jacobian(const FeField& w) const;

  const FeSpace& space() const { return space_; }
  const EvolutionConfig& config() const { return cfg_; }
  const SteadyCoefficient& steady() const { return u_inf_; }
  const SparseMatrix& mass() const { return mass_; }
  const SparseMatrix& stiffness() const { return stiffness_; }
  const std::vector<int>& dirichlet_vertices() const { return dirichlet_; }

 private:
  const FeSpace& space_;
  SteadyCoefficient u_inf_;
  EvolutionConfig cfg_;
  SparseMatrix mass_;
  SparseMatrix stiffness_;
  SparseMatrix constant_;  // M/k + nu K + T(u_inf) + G(u_inf) + boundary linear part
  std::vector<int> dirichlet_;
  SparseLu lu_;
};

double lyapunov(const SparseMatrix& mass, const FeField& w);

using StepObserver = std::function<void(int step, double t, const FeField& w)>;

struct RunResult {
  TrajectoryRecord record;
  FeField final_state;
};

RunResult run(const FeSpace& space, const FeField& w0, const EvolutionConfig& cfg, const SteadyCoefficient& u_inf,
              const StepObserver& observer = {});

enum class InitialProjection { Interpolation, EllipticProjection };

/// W^0 from a closed form: nodal interpolation, or the projection
/// (grad w, grad chi) + (w, chi) = (grad w0, grad chi) + (w0, chi).
/// Values at DirichletZero vertices are set to zero.
FeField initial_datum(const FeSpace& space, const AnalyticField& w0,
                      InitialProjection how = InitialProjection::Interpolation);

/// Decay-rate bound  (1/(2 C_F)) min{nu/2, c0 + 7 nu/4}.
double predicted_decay_rate(double nu, double c0, double friedrichs);
/// (2/C_F) min{7 nu/8, c0/2 + 7 nu/8}
double lyapunov_constant(double nu, double c0, double friedrichs);

struct DecayReport {
  double fitted_rate = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  double predicted_alpha = 0.0;
  double c_lyp = 0.0;
  std::size_t samples = 0;
};

/// Least-squares slope of log ||W^n|| over the window; fitted_rate is minus
/// the slope. Needs at least 10 samples in the window.
DecayReport fit_decay_rate(const TrajectoryRecord& rec, double t0, double t1, double nu, double c0,
                           double friedrichs);

}  // namespace burgers
