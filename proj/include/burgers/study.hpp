#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "burgers/analytic.hpp"
#include "burgers/integrator.hpp"
#include "burgers/mesh.hpp"

namespace burgers {

/// Physical setup of one stabilization experiment on the unit square.
struct ProblemConfig {
  double nu = 0.1;
  double c0 = 1.0;
  /// Steady state the feedback stabilizes around.
  ClosedForm u_inf{0.0, -0.2, 0.0, 0.0, 0.0};
  /// Initial perturbation w0 = u0 - u_inf.
  ClosedForm w0{0.0, 0.2, 0.0, 1.0, 0.0};
  /// DiscreteSteady only: solve from this forcing with zero Neumann data
  /// instead of the data manufactured from u_inf.
  std::optional<ClosedForm> forcing;
  /// DiscreteSteady only: prescribed integral (default: that of u_inf).
  std::optional<double> steady_mean;
  std::vector<BoundarySegment> dirichlet;
  bool controlled = true;
  CoefficientSource coefficient_source = CoefficientSource::AnalyticSteady;
  NonlinearSolve nonlinear = NonlinearSolve::Newton;
  InitialProjection initial = InitialProjection::Interpolation;
};

/// Everything needed to time-step a ProblemConfig on one mesh.
struct PreparedProblem {
  MeshPtr mesh;
  std::unique_ptr<FeSpace> space;
  SteadyCoefficient steady;
  FeField w0;
  EvolutionConfig evolution;
};

/// Tags the mesh, builds the steady coefficient (solving the discrete
/// steady problem for DiscreteSteady) and the initial datum.
PreparedProblem prepare_problem(const ProblemConfig& problem, const MeshPtr& untagged_mesh, double k, double t_end);

RunResult simulate(const PreparedProblem& p, const StepObserver& observer = {});

struct StudyConfig {
  std::vector<int> mesh_levels{4, 8, 16, 32};
  int reference_level = 64;
  double k = 0.0005;
  double t_eval = 1.0;
  ProblemConfig problem;
};

/// rate_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i), which is log2 of the error
/// ratio for halving h. Result has one entry fewer than the inputs.
std::vector<double> compute_rates(const std::vector<double>& errors, const std::vector<double>& hs);

struct StateRateRow {
  double h = 0.0;
  double error_l2 = 0.0;
  std::optional<double> rate_l2;
  double error_h1 = 0.0;
  std::optional<double> rate_h1;
};

struct ControlRateRow {
  double h = 0.0;
  double error_control = 0.0;
  std::optional<double> rate_control;
};

struct RateTable {
  std::vector<StateRateRow> state;
  std::vector<ControlRateRow> control;
};

void write_state_rates_csv(std::ostream& os, const RateTable& t);
void write_control_rates_csv(std::ostream& os, const RateTable& t);

/// Mesh-refinement study against a reference solution on a nested fine mesh.
/// Runs are computed on first use and cached.
class ConvergenceStudy {
 public:
  /// Throws InvalidConfiguration unless every level reaches the reference
  /// level by repeated halving (nestedness guard) and t_eval is a multiple of k.
  explicit ConvergenceStudy(StudyConfig cfg);

  /// (L2, H1-seminorm) of prolong(W_n) - W_ref at t_eval on the reference mesh.
  std::pair<double, double> state_errors(int level);
  /// L2 norm over the active boundary of the difference of feedback traces.
  double control_errors(int level);
  RateTable rate_table();

  const StudyConfig& config() const { return cfg_; }
  const MeshPtr& mesh(int level) const { return meshes_.at(level); }

 private:
  struct Solution {
    PreparedProblem problem;
    FeField state;
  };
  const Solution& solution(int level);

  StudyConfig cfg_;
  std::map<int, MeshPtr> meshes_;
  std::map<int, std::unique_ptr<Solution>> solutions_;
};

struct ExampleOptions {
  /// Mesh level for the trajectory runs.
  int trajectory_level = 32;
  double t_final = 5.0;
  double k = 0.0005;
  int record_every = 1;
  bool with_rate_tables = true;
  StudyConfig study;
};

struct Example1Result {
  TrajectoryRecord controlled;
  TrajectoryRecord uncontrolled;
  std::optional<RateTable> rates;
  std::vector<std::filesystem::path> files;
};

struct Example2Result {
  TrajectoryRecord controlled;
  TrajectoryRecord uncontrolled;
  /// Largest |W| seen on Dirichlet vertices over the controlled run.
  double max_dirichlet_value = 0.0;
  std::vector<std::filesystem::path> files;
};

ProblemConfig example1_problem();
ProblemConfig example2_problem();

/// Writes example1_controlled.csv, example1_uncontrolled.csv,
/// example1_control.csv and, with rate tables, rates_state.csv and
/// rates_control.csv.
Example1Result run_example1(const std::filesystem::path& output_dir, const ExampleOptions& opts = {});

/// Writes example2_controlled.csv, example2_uncontrolled.csv,
/// example2_control.csv.
Example2Result run_example2(const std::filesystem::path& output_dir, const ExampleOptions& opts = {});

/// Header `time,control_l2`.
void write_control_csv(std::ostream& os, const TrajectoryRecord& rec);

}  // namespace burgers
