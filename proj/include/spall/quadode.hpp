#pragma once

// Closed-form flow of the scalar equation dU/dt = U^2 in complex time and
// the invariant geometry (solution disks, half-lines) used to trap PDE values.

#include <complex>
#include <optional>
#include <span>

namespace spall {

using Complex = std::complex<double>;

/// A point on the Riemann sphere: either a finite value or infinity.
class OdePoint {
 public:
  static OdePoint finite(Complex v) { return OdePoint(v); }
  static OdePoint infinity() { return OdePoint(); }

  bool is_infinite() const { return !value_.has_value(); }
  bool is_finite() const { return value_.has_value(); }
  /// Throws DomainError for the point at infinity.
  Complex value() const;

 private:
  OdePoint() = default;
  explicit OdePoint(Complex v) : value_(v) {}
  std::optional<Complex> value_;
};

/// Disk of radius R centred at iR; its boundary passes through the origin.
class SolutionDisk {
 public:
  explicit SolutionDisk(double radius);

  double radius() const { return radius_; }
  Complex center() const { return {0.0, radius_}; }
  /// Signed distance margin: radius - |z - center|. Non-negative inside.
  double margin(Complex z) const;
  bool contains(Complex z, double tol = 0.0) const { return margin(z) >= -tol; }

 private:
  double radius_;
};

/// Half-line s * exp(i angle), s >= 0, with 0 < angle < pi.
class HalfLine {
 public:
  explicit HalfLine(double angle);
  double angle() const { return angle_; }
  /// True when z lies on the closed side containing the negative real axis.
  bool left_of(Complex z) const;

 private:
  double angle_;
};

/// Exact flow U(t) = 1 / (1/u0 - t). Returns infinity when 1/u0 == t up to
/// an absolute tolerance of 1e-14 * max(1, |t|).
OdePoint ode_flow(Complex t, Complex u0);

/// Im(1/u), conserved along real-time trajectories.
double conserved_quantity(Complex u);

/// Smallest disk through the origin, centred on the positive imaginary axis,
/// that contains every sample. All samples need Im > 0.
SolutionDisk enclosing_disk(std::span<const Complex> samples);

/// Minimum argument over samples in the open upper half-plane.
double min_angle(std::span<const Complex> samples);

/// Sup-norm bound of the ODE flow for data of modulus <= s0 and argument
/// >= phi. Two branches, switching at cos(phi) * t = 1 / s0.
double supnorm_bound(double t, double s0, double phi);

/// Curvature of s -> ode_flow(t, s e^{i phi}).
double line_curvature(double s, double t, double phi);

}  // namespace spall
