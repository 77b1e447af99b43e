#pragma once

// Dirichlet discretisation of (-1, 1) on a uniform interior grid, diagonalised
// by the sine basis e_n(x) = sin(n pi (x + 1) / 2).

#include <Eigen/Core>
#include <complex>
#include <memory>

namespace spall {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Interior points x_j = -1 + 2j/(N+1), j = 1..N.
class SpatialGrid {
 public:
  explicit SpatialGrid(int n_interior);

  int size() const { return n_; }
  double spacing() const { return 2.0 / (n_ + 1); }
  /// Zero-based: point(0) = x_1.
  double point(int j) const { return -1.0 + (j + 1) * spacing(); }
  RealVector points() const;
  /// Highest mode kept by the 2/3 truncation of quadratic terms.
  int dealias_cutoff() const { return (2 * n_) / 3; }

  bool operator==(const SpatialGrid&) const = default;

 private:
  int n_;
};

/// Laplacian eigenvalue -(n pi / 2)^2 for the 1-based mode index n.
double dirichlet_eigenvalue(int n);

/// Grid values of a complex profile; boundary values are implicitly zero.
struct StateField {
  SpatialGrid grid;
  ComplexVector values;

  StateField(SpatialGrid g, ComplexVector v);
  static StateField zero(SpatialGrid g);
  static StateField from_real(SpatialGrid g, const RealVector& v);

  RealVector real() const { return values.real(); }
  RealVector imag() const { return values.imag(); }
  StateField conjugate() const;
};

/// Coefficients a_n of sum_n a_n e_n; coeffs(k) holds a_{k+1}.
struct ModeVector {
  ComplexVector coeffs;

  explicit ModeVector(ComplexVector c) : coeffs(std::move(c)) {}
  static ModeVector basis(int size, int n, Complex scale = 1.0);
  int size() const { return static_cast<int>(coeffs.size()); }
};

/// Discrete sine transform pair for one grid size. Plans are shared and
/// cached per size; execution is re-entrant.
class SineTransform {
 public:
  explicit SineTransform(int n);

  int size() const { return n_; }
  /// values -> coefficients. `out` is resized as needed.
  void forward(const ComplexVector& values, ComplexVector& out) const;
  /// coefficients -> values.
  void inverse(const ComplexVector& coeffs, ComplexVector& out) const;

  struct Plan;

 private:
  int n_;
  std::shared_ptr<const Plan> plan_;
};

ModeVector to_modes(const StateField& f);
StateField from_modes(const ModeVector& m, const SpatialGrid& grid);

ModeVector laplacian(const ModeVector& m);

/// Removes modes above dealias_cutoff().
StateField dealias(const StateField& f);

/// Pointwise square followed by removal of modes above dealias_cutoff().
StateField square_dealiased(const StateField& f);

struct Norms {
  double sup;
  double l2;
};
Norms norms(const StateField& f);

/// Bilinear L2 pairing dx * sum_j a_j b_j (no conjugation).
Complex pairing(const StateField& a, const StateField& b);

}  // namespace spall
