#pragma once

// Positive equilibrium of u_xx + u^2 = 0 with u(+-1) = 0, the spectrum of its
// linearisation A = d_xx + 2 u_+, and the Rayleigh quotient of A.

#include <Eigen/Core>
#include <vector>

#include "spall/spatial.hpp"

namespace spall {

using RealMatrix = Eigen::MatrixXd;

/// Real positive even profile with the sup-norm of its discrete residual
/// L u + square_dealiased(u).
struct Equilibrium {
  StateField profile;
  double residual;

  const SpatialGrid& grid() const { return profile.grid; }
  /// ||u_+||_inf of the sine interpolant, i.e. its value at x = 0. Grids
  /// with even N have no node there.
  double peak() const;
  /// The zero state, for tests that need the bare Laplacian.
  static Equilibrium trivial(const SpatialGrid& grid);
};

/// Eigenvalue mu and L2-normalised real eigenfunction of A.
struct EigenPair {
  double mu;
  StateField phi;
  double residual;  // || A phi - mu phi ||_{L2}
};

struct ShootResult {
  std::vector<double> field;  // u at x = i/steps, i = 0..steps
  double end_value;           // u(1)
};

/// RK4 for u'' = -u^2 on [0, 1] from u(0) = center_value, u'(0) = 0.
/// Integration stops early once u diverges to -infinity; `end_value` is then
/// the last (large negative) value reached.
ShootResult shoot_profile(double center_value, int steps);

/// Shooting + bisection for the centre value, mirrored onto the grid and
/// polished by Newton's method in mode space until residual < tol.
Equilibrium find_equilibrium(const SpatialGrid& grid, double tol = 1e-10);

/// Matrix of L + diag(2 u) in orthonormal sine coordinates (symmetric).
RealMatrix linearization_matrix(const SpatialGrid& grid, const RealVector& u);
inline RealMatrix linearization_matrix(const Equilibrium& eq) {
  return linearization_matrix(eq.grid(), eq.profile.real());
}

/// Top-k eigenpairs by decreasing eigenvalue. Shifts come from a dense solve
/// on a 32-point grid; each pair is refined by shifted inverse iteration.
std::vector<EigenPair> leading_eigenpairs(const Equilibrium& eq, int k);

/// (int -Q_x^2 + 2 u_+ Q^2) / ||Q||^2 for the real part of q.
double rayleigh(const StateField& q, const Equilibrium& eq);

/// Discrete ||Q_x||^2 = sum (n pi/2)^2 a_n^2.
double gradient_norm_squared(const StateField& q);

}  // namespace spall
