#include "burgers/analytic.hpp"

#include <cmath>
#include <numbers>

namespace burgers {

using std::numbers::pi;

double ClosedForm::value(Vec2 p) const {
  return constant + x1 * p.x + x2 * p.y + sin_product * std::sin(pi * p.x) * std::sin(pi * p.y) +
         cos_product * std::cos(pi * p.x) * std::cos(pi * p.y);
}

Vec2 ClosedForm::gradient(Vec2 p) const {
  const double sx = std::sin(pi * p.x), sy = std::sin(pi * p.y);
  const double cx = std::cos(pi * p.x), cy = std::cos(pi * p.y);
  return {x1 + pi * (sin_product * cx * sy - cos_product * sx * cy),
          x2 + pi * (sin_product * sx * cy - cos_product * cx * sy)};
}

double ClosedForm::laplacian(Vec2 p) const {
  const double trig = sin_product * std::sin(pi * p.x) * std::sin(pi * p.y) +
                      cos_product * std::cos(pi * p.x) * std::cos(pi * p.y);
  return -2.0 * pi * pi * trig;
}

AnalyticField ClosedForm::field() const {
  const ClosedForm self = *this;
  return {[self](Vec2 p) { return self.value(p); }, [self](Vec2 p) { return self.gradient(p); },
          [self](Vec2 p) { return self.laplacian(p); }};
}

ClosedForm ClosedForm::operator+(const ClosedForm& o) const {
  return {constant + o.constant, x1 + o.x1, x2 + o.x2, sin_product + o.sin_product,
          cos_product + o.cos_product};
}

ClosedForm ClosedForm::operator-(const ClosedForm& o) const { return *this + o * -1.0; }

ClosedForm ClosedForm::operator*(double s) const {
  return {s * constant, s * x1, s * x2, s * sin_product, s * cos_product};
}

}  // namespace burgers
