#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "burgers/error.hpp"
#include "burgers/integrator.hpp"

using namespace burgers;

namespace {

const ClosedForm u_lin{0.0, -0.2, 0.0, 0.0, 0.0};
const ClosedForm w_init{0.0, 0.2, 0.0, 1.0, 0.0};

EvolutionConfig controlled(double k, double t_end) {
  EvolutionConfig c;
  c.k = k;
  c.t_end = t_end;
  c.control = ControlParams{0.1, 1.0};
  return c;
}

SteadyCoefficient steady(const FeSpace& space) {
  return SteadyCoefficient::from_closed_form([](Vec2 p) { return u_lin.value(p); }, space.mesh());
}

double max_diff(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("configuration checks") {
  EvolutionConfig c = controlled(0.01, 0.1);
  CHECK(c.num_steps() == 10);
  c.k = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  c.k = 1.0;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  c = controlled(0.1, 0.05);
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
  c = controlled(0.01, 0.1);
  c.control->nu = 0.2;
  CHECK_THROWS_AS(c.validate(), InvalidParameter);
}

TEST_CASE("zero is an equilibrium") {
  const FeSpace space(build_unit_square_mesh(6));
  const RunResult r = run(space, FeField::zeros(space.mesh()), controlled(0.01, 0.2), steady(space));
  CHECK(norm_inf(r.final_state.values) == 0.0);
  CHECK(r.record.size() == 21);
  for (double v : r.record.l2) CHECK(v == 0.0);
}

TEST_CASE("Newton Jacobian matches finite differences") {
  for (bool dirichlet : {false, true}) {
    MeshPtr mesh = build_unit_square_mesh(4);
    if (dirichlet) mesh = tag_boundary(mesh, {{0, 1.0, 0.0, 1.0}});
    const FeSpace space(mesh);
    const BackwardEuler be(space, steady(space), controlled(0.01, 0.1));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Vector v(space.size());
    for (double& x : v) x = d(rng);
    const FeField w(mesh, v), prev(mesh, Vector(space.size(), 0.3));
    const SparseMatrix j = be.jacobian(w);
    const double eps = 1e-6;
    for (std::size_t c = 0; c < space.size(); ++c) {
      FeField wp = w, wm = w;
      wp.values[c] += eps;
      wm.values[c] -= eps;
      const Vector rp = be.residual(wp, prev), rm = be.residual(wm, prev);
      for (std::size_t r = 0; r < space.size(); ++r) {
        // residual rows of Dirichlet vertices are the identity; columns are eliminated in the Jacobian only
        const bool skip = std::find(be.dirichlet_vertices().begin(), be.dirichlet_vertices().end(),
                                    static_cast<int>(c)) != be.dirichlet_vertices().end();
        if (skip) continue;
        CHECK(std::abs((rp[r] - rm[r]) / (2 * eps) - j.at(r, c)) <= 1e-6 * (1.0 + std::abs(j.at(r, c))));
      }
    }
  }
}

TEST_CASE("one step changes the state by O(k)") {
  const FeSpace space(build_unit_square_mesh(8));
  const FeField w0 = initial_datum(space, w_init.field());
  double prev = 0.0;
  for (double k : {0.004, 0.002, 0.001}) {
    BackwardEuler be(space, steady(space), controlled(k, 1.0));
    const StepResult s = be.step(w0);
    CHECK(s.iterations <= 4);
    Vector d = s.w.values;
    kernels::axpy(-1.0, w0.values, d);
    const double inc = std::sqrt(kernels::dot(d, spmv(be.mass(), d)));
    if (prev > 0.0) CHECK(prev / inc == doctest::Approx(2.0).epsilon(0.1));
    prev = inc;
  }
}

TEST_CASE("Picard-lagged and Newton steps agree to first order") {
  const FeSpace space(build_unit_square_mesh(8));
  const FeField w0 = initial_datum(space, w_init.field());
  double prev = 0.0;
  for (double k : {0.01, 0.005}) {
    EvolutionConfig c = controlled(k, 0.1);
    const FeField a = run(space, w0, c, steady(space)).final_state;
    c.nonlinear = NonlinearSolve::PicardLagged;
    const FeField b = run(space, w0, c, steady(space)).final_state;
    const double diff = max_diff(a.values, b.values);
    CHECK(diff > 0.0);
    if (prev > 0.0) CHECK(prev / diff == doctest::Approx(2.0).epsilon(0.2));
    prev = diff;
  }
}

TEST_CASE("controlled run decays and keeps Dirichlet values at zero") {
  const MeshPtr mesh = tag_boundary(build_unit_square_mesh(6), {{0, 1.0, 0.0, 1.0}});
  const FeSpace space(mesh);
  const FeField w0 = initial_datum(space, w_init.field());
  double worst = 0.0;
  const RunResult r = run(space, w0, controlled(0.01, 0.5), steady(space), [&](int, double, const FeField& w) {
    for (int i : mesh->dirichlet_vertices()) worst = std::max(worst, std::abs(w.values[i]));
  });
  CHECK(worst == 0.0);
  for (std::size_t i = 1; i < r.record.size(); ++i) CHECK(r.record.lyapunov[i] <= r.record.lyapunov[i - 1]);
  CHECK(r.record.l2.back() < r.record.l2.front());
}

TEST_CASE("recording stride keeps the last step") {
  const FeSpace space(build_unit_square_mesh(4));
  EvolutionConfig c = controlled(0.01, 0.25);
  c.record_every = 10;
  const RunResult r = run(space, initial_datum(space, w_init.field()), c, steady(space));
  CHECK(r.record.times == std::vector<double>{0.0, 0.1, 0.2, 0.25});
  CHECK(r.record.newton_iterations.front() == 0);
}

TEST_CASE("trajectory CSV is deterministic") {
  const FeSpace space(build_unit_square_mesh(4));
  auto once = [&] {
    std::ostringstream os;
    write_trajectory_csv(os, run(space, initial_datum(space, w_init.field()), controlled(0.01, 0.05), steady(space)).record);
    return os.str();
  };
  const std::string a = once();
  CHECK(a == once());
  CHECK(a.rfind("time,l2,h1semi,lyapunov,control_l2,newton_iters\n", 0) == 0);
  CHECK(std::count(a.begin(), a.end(), '\n') == 7);
}

TEST_CASE("Lyapunov functional") {
  const FeSpace space(build_unit_square_mesh(3));
  const SparseMatrix m = assemble_mass(space);
  CHECK(lyapunov(m, FeField(space.mesh(), Vector(space.size(), 1.0))) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(lyapunov(m, FeField::zeros(space.mesh())) == 0.0);
  CHECK(lyapunov(m, FeField(space.mesh(), Vector(space.size(), -2.0))) == doctest::Approx(2.0).epsilon(1e-14));
  const FeField w = initial_datum(space, w_init.field());
  FeField w3 = w;
  for (double& x : w3.values) x *= 3.0;
  CHECK(lyapunov(m, w3) == doctest::Approx(9.0 * lyapunov(m, w)).epsilon(1e-14));
}

TEST_CASE("initial data") {
  const FeSpace space(build_unit_square_mesh(6));
  const ClosedForm lin{1.0, 0.5, -2.0, 0.0, 0.0};
  const FeField a = initial_datum(space, lin.field(), InitialProjection::EllipticProjection);
  CHECK(l2_error(space, a, [&](Vec2 p) { return lin.value(p); }) <= 1e-10);
  const FeField b = initial_datum(space, lin.field());
  CHECK(l2_error(space, b, [&](Vec2 p) { return lin.value(p); }) <= 1e-14);
}

TEST_CASE("decay rate fit and predicted constants") {
  TrajectoryRecord rec;
  for (int i = 0; i <= 100; ++i) {
    const double t = 0.01 * i;
    rec.times.push_back(t);
    rec.l2.push_back(3.0 * std::exp(-2.0 * t));
  }
  const DecayReport r = fit_decay_rate(rec, 0.2, 1.0, 0.1, 1.0, 2.0);
  CHECK(std::abs(r.fitted_rate - 2.0) <= 1e-10);
  CHECK(r.samples == 81);
  CHECK(r.predicted_alpha == doctest::Approx(0.0125).epsilon(1e-14));
  CHECK(r.c_lyp == doctest::Approx(0.0875).epsilon(1e-14));

  TrajectoryRecord flat = rec;
  for (double& v : flat.l2) v = 0.7;
  CHECK(std::abs(fit_decay_rate(flat, 0.0, 1.0, 0.1, 1.0, 2.0).fitted_rate) <= 1e-12);

  CHECK_THROWS_AS(fit_decay_rate(rec, 0.5, 0.55, 0.1, 1.0, 2.0), FitDomainError);
  CHECK_THROWS_AS(fit_decay_rate(rec, 0.5, 2.0, 0.1, 1.0, 2.0), FitDomainError);
  CHECK_THROWS_AS(fit_decay_rate(rec, 0.5, 0.5, 0.1, 1.0, 2.0), FitDomainError);
  flat.l2[50] = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(flat, 0.0, 1.0, 0.1, 1.0, 2.0), FitDomainError);

  CHECK(predicted_decay_rate(10.0, 1.0, 2.0) == doctest::Approx(1.25));
  CHECK(predicted_decay_rate(0.1, 1.0, 1.0) == doctest::Approx(0.025));
  CHECK(lyapunov_constant(0.1, 1.0, 1.0) == doctest::Approx(0.175));
}
