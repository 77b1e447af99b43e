#include "spall/equilibrium.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spall/errors.hpp"

namespace spall {

namespace {

constexpr int kCoarseGrid = 32;
constexpr int kShootSteps = 4096;

// Bilinear products are real here; all fields in this module are real.
RealVector real_modes(const RealVector& values) {
  return to_modes(StateField::from_real(SpatialGrid(values.size()), values))
      .coeffs.real();
}

RealVector real_values(const RealVector& coeffs) {
  const SpatialGrid g(coeffs.size());
  return from_modes(ModeVector(coeffs.cast<Complex>()), g).values.real();
}

RealVector laplacian_diagonal(int n) {
  RealVector d(n);
  for (int k = 0; k < n; ++k) d(k) = dirichlet_eigenvalue(k + 1);
  return d;
}

// Mode-space matrix of f -> to_modes(w .* from_modes(f)).
RealMatrix multiplication_matrix(const RealVector& w) {
  const int n = static_cast<int>(w.size());
  RealMatrix m(n, n);
  RealVector e = RealVector::Zero(n);
  for (int k = 0; k < n; ++k) {
    e.setZero();
    e(k) = 1.0;
    m.col(k) = real_modes(w.cwiseProduct(real_values(e)));
  }
  return m;
}

// Discrete residual in mode space: L a + P_K to_modes(u^2).
RealVector residual_modes(const RealVector& a, const SpatialGrid& grid) {
  const RealVector u = real_values(a);
  RealVector r = real_modes(u.cwiseProduct(u));
  r.tail(r.size() - grid.dealias_cutoff()).setZero();
  r += laplacian_diagonal(grid.size()).cwiseProduct(a);
  return r;
}

RealVector mirrored_shot(const SpatialGrid& grid, double center) {
  // |x_j| = m / (N+1) for integer m, so a step of 1/((N+1) r) hits every node.
  const int per = std::max(1, kShootSteps / (grid.size() + 1) + 1);
  const int steps = (grid.size() + 1) * per;
  const ShootResult shot = shoot_profile(center, steps);
  RealVector u(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const int m = std::abs(2 * (j + 1) - grid.size() - 1);
    u(j) = shot.field[static_cast<std::size_t>(m * per)];
  }
  return u;
}

}  // namespace

Equilibrium Equilibrium::trivial(const SpatialGrid& grid) {
  return {StateField::zero(grid), 0.0};
}

double Equilibrium::peak() const {
  const ComplexVector a = to_modes(profile).coeffs;
  double v = 0.0;
  // sin(n pi / 2) = 0, 1, 0, -1, ...
  for (int k = 0; k < a.size(); k += 2) v += (k % 4 == 0 ? 1.0 : -1.0) * a(k).real();
  return v;
}

ShootResult shoot_profile(double center_value, int steps) {
  if (!(center_value > 0.0))
    throw DomainError("shoot_profile: center_value must be positive");
  if (steps < 1) throw DomainError("shoot_profile: steps must be positive");
  const double h = 1.0 / steps;
  const double diverged = -1e8 * std::max(1.0, center_value);
  ShootResult out;
  out.field.reserve(static_cast<std::size_t>(steps) + 1);
  double u = center_value, p = 0.0;
  out.field.push_back(u);
  for (int i = 0; i < steps; ++i) {
    const double k1u = p, k1p = -u * u;
    const double u2 = u + 0.5 * h * k1u, p2 = p + 0.5 * h * k1p;
    const double k2u = p2, k2p = -u2 * u2;
    const double u3 = u + 0.5 * h * k2u, p3 = p + 0.5 * h * k2p;
    const double k3u = p3, k3p = -u3 * u3;
    const double u4 = u + h * k3u, p4 = p + h * k3p;
    const double k4u = p4, k4p = -u4 * u4;
    u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
    p += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    if (!(u > diverged)) {
      out.end_value = std::isnan(u) ? diverged : u;
      return out;
    }
    out.field.push_back(u);
  }
  out.end_value = u;
  return out;
}

Equilibrium find_equilibrium(const SpatialGrid& grid, double tol) {
  if (!(tol > 0.0)) throw DomainError("find_equilibrium: tol must be positive");

  // Bracket the first sign change of u(1) on a geometric scan of [0.1, 50].
  double lo = 0.1, hi = lo;
  bool bracketed = false;
  while (hi < 50.0) {
    const double next = std::min(50.0, hi * 1.25);
    if (shoot_profile(next, kShootSteps).end_value < 0.0) {
      hi = next;
      bracketed = true;
      break;
    }
    lo = hi = next;
  }
  if (!bracketed || shoot_profile(lo, kShootSteps).end_value <= 0.0)
    throw ComputationError("find_equilibrium: no shooting bracket in [0.1, 50]");
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shoot_profile(mid, kShootSteps).end_value > 0.0 ? lo : hi) = mid;
  }

  RealVector a = real_modes(mirrored_shot(grid, 0.5 * (lo + hi)));
  const RealVector lap = laplacian_diagonal(grid.size());
  const int keep = grid.dealias_cutoff();
  double residual = 0.0;
  for (int it = 0; it < 50; ++it) {
    const RealVector r = residual_modes(a, grid);
    residual = real_values(r).cwiseAbs().maxCoeff();
    if (residual < tol) {
      RealVector u = real_values(a);
      if ((u.array() <= 0.0).any())
        throw ComputationError("find_equilibrium: profile is not positive");
      return {StateField::from_real(grid, u), residual};
    }
    const RealVector u = real_values(a);
    RealMatrix jac = multiplication_matrix(2.0 * u);
    jac.bottomRows(grid.size() - keep).setZero();
    jac.diagonal() += lap;
    a -= jac.partialPivLu().solve(r);
  }
  throw ComputationError("find_equilibrium: Newton residual stalled at " +
                         std::to_string(residual));
}

RealMatrix linearization_matrix(const SpatialGrid& grid, const RealVector& u) {
  if (u.size() != grid.size())
    throw DomainError("linearization_matrix: length mismatch");
  RealMatrix a = multiplication_matrix(2.0 * u);
  // Symmetrise away round-off so the self-adjoint solvers see exact symmetry.
  a = 0.5 * (a + a.transpose()).eval();
  a.diagonal() += laplacian_diagonal(grid.size());
  return a;
}

std::vector<EigenPair> leading_eigenpairs(const Equilibrium& eq, int k) {
  const SpatialGrid& grid = eq.grid();
  if (k < 1 || k > std::min(kCoarseGrid, grid.size()))
    throw DomainError("leading_eigenpairs: k must lie in [1, min(32, N)]");

  // Coarse shifts from the first 32 modes of the profile.
  const RealVector fine_modes = real_modes(eq.profile.real());
  RealVector coarse_modes = RealVector::Zero(kCoarseGrid);
  const int shared = std::min(kCoarseGrid, grid.size());
  coarse_modes.head(shared) = fine_modes.head(shared);
  const SpatialGrid coarse(kCoarseGrid);
  const Eigen::SelfAdjointEigenSolver<RealMatrix> coarse_solver(
      linearization_matrix(coarse, real_values(coarse_modes)),
      Eigen::EigenvaluesOnly);
  const RealVector& coarse_eigs = coarse_solver.eigenvalues();  // ascending

  const RealMatrix a = linearization_matrix(eq.grid(), eq.profile.real());
  const int n = grid.size();
  std::vector<RealVector> found;
  std::vector<EigenPair> pairs;
  for (int i = 0; i < k; ++i) {
    const double shift = coarse_eigs(kCoarseGrid - 1 - i);
    // Offset keeps the shifted matrix away from exact singularity.
    const double sigma = shift + 1e-7 * std::max(1.0, std::abs(shift));
    RealMatrix shifted = a;
    shifted.diagonal().array() -= sigma;
    const Eigen::PartialPivLU<RealMatrix> lu(shifted);

    RealVector v = RealVector::Ones(n).normalized();
    double mu = 0.0, res = 0.0;
    bool converged = false;
    for (int it = 0; it < 500; ++it) {
      v = lu.solve(v);
      for (const RealVector& w : found) v -= w.dot(v) * w;
      v.normalize();
      const RealVector av = a * v;
      mu = v.dot(av);
      res = (av - mu * v).norm();
      if (res < 1e-11 * std::max(1.0, std::abs(mu))) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw ComputationError("leading_eigenpairs: inverse iteration for pair " +
                             std::to_string(i + 1) + " stalled, residual " +
                             std::to_string(res));
    // Sign: positive mean for the ground state, positive largest entry otherwise.
    RealVector values = real_values(v);
    Eigen::Index imax = 0;
    values.cwiseAbs().maxCoeff(&imax);
    const double sign_ref = i == 0 ? values.sum() : values(imax);
    if (sign_ref < 0.0) {
      v = -v;
      values = -values;
    }
    found.push_back(v);
    pairs.push_back({mu, StateField::from_real(grid, values), res});
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const EigenPair& x, const EigenPair& y) { return x.mu > y.mu; });
  return pairs;
}

double gradient_norm_squared(const StateField& q) {
  const RealVector a = to_modes(q).coeffs.real();
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) s += -dirichlet_eigenvalue(k + 1) * a(k) * a(k);
  return s;
}

double rayleigh(const StateField& q, const Equilibrium& eq) {
  if (!(q.grid == eq.grid())) throw DomainError("rayleigh: grid mismatch");
  const RealVector v = q.real();
  const double mass = q.grid.spacing() * v.squaredNorm();
  if (!(mass > 0.0)) throw DomainError("rayleigh: zero field");
  const RealVector u = eq.profile.real();
  const double potential =
      q.grid.spacing() * (2.0 * u.array() * v.array().square()).sum();
  return (-gradient_norm_squared(StateField::from_real(q.grid, v)) + potential) /
         mass;
}

}  // namespace spall
