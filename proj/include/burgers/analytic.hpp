#pragma once

#include <functional>

#include "burgers/mesh.hpp"

namespace burgers {

using ScalarFunction = std::function<double(Vec2)>;
/// Function of a boundary point and its outward unit normal.
using BoundaryFunction = std::function<double(Vec2 point, Vec2 normal)>;

/// Twice-differentiable closed form with its first and second derivatives.
struct AnalyticField {
  ScalarFunction value;
  std::function<Vec2(Vec2)> gradient;
  ScalarFunction laplacian;
};

/// a0 + a1 x1 + a2 x2 + s sin(pi x1) sin(pi x2) + c cos(pi x1) cos(pi x2).
/// Covers every steady state and initial datum the experiments use.
struct ClosedForm {
  double constant = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double sin_product = 0.0;
  double cos_product = 0.0;

  double value(Vec2 p) const;
  Vec2 gradient(Vec2 p) const;
  double laplacian(Vec2 p) const;
  AnalyticField field() const;

  ClosedForm operator-(const ClosedForm& o) const;
  ClosedForm operator+(const ClosedForm& o) const;
  ClosedForm operator*(double s) const;
  bool operator==(const ClosedForm&) const = default;
};

}  // namespace burgers
