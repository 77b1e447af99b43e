#include "spall/quadode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spall/errors.hpp"

namespace spall {

Complex OdePoint::value() const {
  if (!value_) throw DomainError("OdePoint: value requested at infinity");
  return *value_;
}

SolutionDisk::SolutionDisk(double radius) : radius_(radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw DomainError("SolutionDisk: radius must be positive and finite");
}

double SolutionDisk::margin(Complex z) const {
  return radius_ - std::abs(z - center());
}

HalfLine::HalfLine(double angle) : angle_(angle) {
  if (!(angle > 0.0 && angle < std::numbers::pi))
    throw DomainError("HalfLine: angle must lie in (0, pi)");
}

bool HalfLine::left_of(Complex z) const {
  // cross(e^{i angle}, z) >= 0
  return std::cos(angle_) * z.imag() - std::sin(angle_) * z.real() >= 0.0;
}

OdePoint ode_flow(Complex t, Complex u0) {
  if (u0 == Complex{}) return OdePoint::finite({});
  const Complex chart = 1.0 / u0 - t;  // U^{-1}(t) = U0^{-1} - t
  const double tol = 1e-14 * std::max(1.0, std::abs(t));
  if (std::abs(chart) <= tol) return OdePoint::infinity();
  return OdePoint::finite(1.0 / chart);
}

double conserved_quantity(Complex u) {
  if (u == Complex{}) throw DomainError("conserved_quantity: undefined at 0");
  return (1.0 / u).imag();
}

SolutionDisk enclosing_disk(std::span<const Complex> samples) {
  if (samples.empty()) throw DomainError("enclosing_disk: no samples");
  double radius = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Complex z = samples[i];
    if (!(z.imag() > 0.0))
      throw DomainError("enclosing_disk: sample " + std::to_string(i) +
                        " is not in the open upper half-plane");
    radius = std::max(radius, std::norm(z) / (2.0 * z.imag()));
  }
  return SolutionDisk(radius);
}

double min_angle(std::span<const Complex> samples) {
  if (samples.empty()) throw DomainError("min_angle: no samples");
  double angle = std::numbers::pi;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Complex z = samples[i];
    if (!(z.imag() > 0.0))
      throw DomainError("min_angle: sample " + std::to_string(i) +
                        " is not in the open upper half-plane");
    angle = std::min(angle, std::arg(z));
  }
  return angle;
}

double supnorm_bound(double t, double s0, double phi) {
  if (!(phi > 0.0 && phi < std::numbers::pi))
    throw DomainError("supnorm_bound: phi must lie in (0, pi)");
  if (!(s0 > 0.0)) throw DomainError("supnorm_bound: s0 must be positive");
  if (t < 0.0) throw DomainError("supnorm_bound: t must be non-negative");
  const double alpha = std::cos(phi);
  const double beta = std::sin(phi);
  if (alpha * t < 1.0 / s0) {
    const double a = alpha / s0 - t;
    return 1.0 / std::sqrt(a * a + beta * beta / (s0 * s0));
  }
  return 1.0 / (alpha * beta * t);
}

double line_curvature(double s, double t, double phi) {
  if (!(t > 0.0)) throw DomainError("line_curvature: t must be positive");
  if (!(phi > 0.0 && phi < std::numbers::pi))
    throw DomainError("line_curvature: phi must lie in (0, pi)");
  const double a = s * t - std::cos(phi);
  const double b = std::sin(phi);
  const double d = a * a + b * b;
  return 2.0 * t * b / (d * d * d);
}

}  // namespace spall
