#pragma once

// Taylor graph of the one-dimensional fast unstable manifold of u_+,
//   u = u_+ + q phi + sum_{k>=2} q^k psi_k,
// together with the reduced scalar flow dq/dt = mu q + sum_{k>=2} c_k q^k and
// the complex times obtained from it by separation of variables.

#include <complex>
#include <vector>

#include "spall/equilibrium.hpp"

namespace spall {

/// Scalar vector field mu q + sum_k c_k q^k; coeffs[i] holds c_{i+2}.
struct ReducedField {
  double mu;
  std::vector<double> coeffs;

  Complex operator()(Complex q) const;
};

class ManifoldExpansion {
 public:
  ManifoldExpansion(Equilibrium eq, EigenPair pair, std::vector<StateField> psi,
                    std::vector<double> reduced_coeffs);

  const Equilibrium& equilibrium() const { return eq_; }
  const EigenPair& pair() const { return pair_; }
  const SpatialGrid& grid() const { return eq_.grid(); }
  double mu() const { return pair_.mu; }
  /// Highest retained power K.
  int order() const { return static_cast<int>(psi_.size()) + 1; }
  /// psi_k for k = 2..K.
  const StateField& psi(int k) const;
  const std::vector<double>& reduced_coeffs() const { return coeffs_; }
  ReducedField reduced_field() const { return {pair_.mu, coeffs_}; }

  /// Largest admissible seed amplitude, 0.1 ||u_+||_inf / ||phi||_inf.
  double r_max() const;
  /// Manifold coordinate <phi, u - u_+> of a state.
  Complex coordinate(const StateField& u) const;
  /// The graph sum_{k=2..K} tau^k psi_k.
  StateField graph(Complex tau) const;

 private:
  Equilibrium eq_;
  EigenPair pair_;
  std::vector<StateField> psi_;
  std::vector<double> coeffs_;
};

/// Solves the homological equations order by order in mode space:
///   (k mu - A) psi_k = P_- g_k - sum_{j=2}^{k-1} j c_{k-j+1} psi_j,
///   c_k = <phi, g_k>,
/// with g_k the q^k coefficient of the dealiased square of q phi + Upsilon(q).
/// Throws ComputationError when k mu lies within 1e-6 of an eigenvalue of A.
ManifoldExpansion expand_graph(const Equilibrium& eq, const EigenPair& pair,
                               int order);

/// u_+ + tau phi + Upsilon(tau). Throws DomainError for |tau| > r_max.
StateField seed_initial(Complex tau, const ManifoldExpansion& expansion);

/// Complex time to move from q0 to q1 along the straight segment,
/// int dq / F(q), by adaptive Gauss-Kronrod quadrature.
Complex reduced_time_map(Complex q0, Complex q1, const ReducedField& field);
inline Complex reduced_time_map(Complex q0, Complex q1,
                                const ManifoldExpansion& e) {
  return reduced_time_map(q0, q1, e.reduced_field());
}

/// Contour integral of dq / F(q) once around the circle |q| = radius.
Complex winding_time(const ReducedField& field, double radius);
inline Complex winding_time(const ManifoldExpansion& e, double radius) {
  return winding_time(e.reduced_field(), radius);
}

}  // namespace spall
