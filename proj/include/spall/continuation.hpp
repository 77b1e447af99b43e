#pragma once

// Method-of-lines evolution of u_t = u_xx + u^2 along piecewise-linear
// complex time paths. The linear part is propagated exactly in the sine basis
// (exp(lambda_n dt)), the quadratic term by a fourth-order exponential
// time-differencing scheme, with step-doubling error control.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "spall/spatial.hpp"

namespace spall {

/// Waypoints t_0 = 0, t_1, ..., with Re(t_{k+1} - t_k) >= 0 and distinct
/// consecutive entries.
class TimePath {
 public:
  explicit TimePath(std::vector<Complex> waypoints);

  /// 0 -> t along the straight segment.
  static TimePath segment(Complex t);

  const std::vector<Complex>& waypoints() const { return waypoints_; }
  int segment_count() const { return static_cast<int>(waypoints_.size()) - 1; }
  Complex end() const { return waypoints_.back(); }
  double length() const;
  /// Complex time at arc length s.
  Complex at(double s) const;
  TimePath conjugate() const;
  /// This path followed by `next`, translated to start at end().
  TimePath then(const TimePath& next) const;

 private:
  std::vector<Complex> waypoints_;
};

struct EvolveOptions {
  double rel_tol = 1e-9;
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double blowup_threshold = 1e8;
  /// Store every stride-th accepted step; 0 keeps waypoints only.
  int snapshot_stride = 0;
  /// Test hook: drop the quadratic term (pure heat flow).
  bool nonlinear = true;

  void validate() const;
};

enum class TrajectoryStatus { completed, blowup };

struct Trajectory {
  std::vector<double> arclength;
  std::vector<Complex> times;
  std::vector<StateField> snapshots;
  std::vector<double> supnorms;
  TrajectoryStatus status = TrajectoryStatus::completed;
  /// Extrapolated blow-up time when status == blowup.
  std::optional<Complex> blowup_time;
  long accepted_steps = 0;
  long rejected_steps = 0;

  bool completed() const { return status == TrajectoryStatus::completed; }
  const StateField& final_state() const { return snapshots.back(); }
  Complex final_time() const { return times.back(); }
  /// Conjugate of every stored time and snapshot.
  Trajectory conjugate() const;
};

Trajectory evolve(const StateField& u0, const TimePath& path,
                  const EvolveOptions& opts = {});

/// Pure reaction flow u_t = u^2 evaluated pointwise in closed form.
/// Blows up iff some 1/u0(x_j) lies on the path.
Trajectory evolve_ode_mode(const StateField& u0, const TimePath& path);

/// 1 / (c^2 nu0): guaranteed regular arc length from data of sup-norm nu0.
double lower_existence_time(double nu0, double c_const);

struct SemigroupCalibration {
  double constant;  // sup of ||e^{t A} f||_inf / ||f||_inf
  int samples;
  double max_angle;
  unsigned seed;
};

/// Measures the sup-norm amplification of the discrete heat semigroup over
/// times r e^{i theta}, |theta| <= max_angle, r in [1e-3, 10], for `samples`
/// random complex fields with coefficients ~ N(0,1)/n drawn from `seed`.
SemigroupCalibration calibrate_semigroup_constant(const SpatialGrid& grid,
                                                  int samples = 64,
                                                  double max_angle = 0.7853981633974483,
                                                  unsigned seed = 20240521u);

}  // namespace spall
