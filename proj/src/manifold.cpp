#include "spall/manifold.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "spall/errors.hpp"

namespace spall {

namespace {

constexpr double kPoleMargin = 1e-6;

// Gauss-Kronrod 7/15 on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

using Integrand = std::function<Complex(double)>;

struct Panel {
  Complex value;
  double error;
};

Panel kronrod(const Integrand& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const Complex fc = f(c);
  Complex k = kWgk[7] * fc, g = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const Complex s = f(c - h * kXgk[i]) + f(c + h * kXgk[i]);
    k += kWgk[i] * s;
    if (i % 2 == 1) g += kWg[i / 2] * s;
  }
  return {h * k, std::abs(h * (k - g))};
}

Complex integrate(const Integrand& f, double a, double b, double tol,
                  int depth = 0) {
  const Panel whole = kronrod(f, a, b);
  if (whole.error <= tol || depth > 40) return whole.value;
  const double m = 0.5 * (a + b);
  return integrate(f, a, m, 0.5 * tol, depth + 1) +
         integrate(f, m, b, 0.5 * tol, depth + 1);
}

Complex checked_inverse(const ReducedField& field, Complex q) {
  const Complex d = field(q);
  if (std::abs(d) < kPoleMargin)
    throw DomainError("reduced time integrand has a pole near q = " +
                      std::to_string(q.real()) + (q.imag() < 0 ? "" : "+") +
                      std::to_string(q.imag()) + "i");
  return 1.0 / d;
}

}  // namespace

Complex ReducedField::operator()(Complex q) const {
  // Horner on mu q + c_2 q^2 + ... + c_K q^K.
  Complex acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * q + *it;
  return q * (mu + q * acc);
}

ManifoldExpansion::ManifoldExpansion(Equilibrium eq, EigenPair pair,
                                     std::vector<StateField> psi,
                                     std::vector<double> reduced_coeffs)
    : eq_(std::move(eq)),
      pair_(std::move(pair)),
      psi_(std::move(psi)),
      coeffs_(std::move(reduced_coeffs)) {
  if (psi_.empty() || psi_.size() != coeffs_.size())
    throw DomainError("ManifoldExpansion: need K-1 graph and reduced terms");
}

const StateField& ManifoldExpansion::psi(int k) const {
  if (k < 2 || k > order()) throw DomainError("ManifoldExpansion::psi: bad k");
  return psi_[static_cast<std::size_t>(k - 2)];
}

double ManifoldExpansion::r_max() const {
  return 0.1 * norms(eq_.profile).sup / norms(pair_.phi).sup;
}

Complex ManifoldExpansion::coordinate(const StateField& u) const {
  return pairing(pair_.phi, StateField(grid(), u.values - eq_.profile.values));
}

StateField ManifoldExpansion::graph(Complex tau) const {
  ComplexVector acc = ComplexVector::Zero(grid().size());
  for (int k = order(); k >= 2; --k) acc = (acc + psi(k).values) * tau;
  return StateField(grid(), acc * tau);
}

ManifoldExpansion expand_graph(const Equilibrium& eq, const EigenPair& pair,
                               int order) {
  if (order < 2) throw DomainError("expand_graph: order must be at least 2");
  const SpatialGrid& grid = eq.grid();
  const int n = grid.size();
  const double mu = pair.mu;

  const RealMatrix a = linearization_matrix(eq);
  const Eigen::SelfAdjointEigenSolver<RealMatrix> spectrum(
      a, Eigen::EigenvaluesOnly);
  for (int k = 2; k <= order; ++k) {
    const double gap =
        (spectrum.eigenvalues().array() - k * mu).abs().minCoeff();
    if (gap < 1e-6)
      throw ComputationError("expand_graph: resonance at order k = " +
                             std::to_string(k));
  }

  // chi_1 = phi, chi_k = psi_k, all stored as real grid values.
  const ComplexVector phi = pair.phi.values;
  std::vector<ComplexVector> chi{ComplexVector(), phi};
  std::vector<double> c;
  std::vector<StateField> psi;
  auto project = [&](const ComplexVector& v) -> ComplexVector {
    return v - pairing(pair.phi, StateField(grid, v)) * phi;
  };

  for (int k = 2; k <= order; ++k) {
    ComplexVector gk = ComplexVector::Zero(n);
    for (int i = 1; i < k; ++i) gk += chi[i].cwiseProduct(chi[k - i]);
    gk = dealias(StateField(grid, gk)).values;
    const double ck = pairing(pair.phi, StateField(grid, gk)).real();

    ComplexVector rhs = project(gk);
    for (int j = 2; j < k; ++j) rhs -= j * c[k - j - 1] * chi[j];
    // c[k-j-1] holds c_{k-j+1}.

    RealMatrix op = -a;
    op.diagonal().array() += k * mu;
    const RealVector rhs_modes = to_modes(StateField(grid, rhs)).coeffs.real();
    const RealVector sol = op.ldlt().solve(rhs_modes);
    ComplexVector psik =
        from_modes(ModeVector(sol.cast<Complex>()), grid).values;
    psik = project(psik);
    psik.imag().setZero();

    c.push_back(ck);
    chi.push_back(psik);
    psi.emplace_back(grid, psik);
  }
  return ManifoldExpansion(eq, pair, std::move(psi), std::move(c));
}

StateField seed_initial(Complex tau, const ManifoldExpansion& e) {
  if (std::abs(tau) > e.r_max())
    throw DomainError("seed_initial: |tau| = " + std::to_string(std::abs(tau)) +
                      " exceeds r_max = " + std::to_string(e.r_max()));
  const StateField g = e.graph(tau);
  return StateField(e.grid(), e.equilibrium().profile.values +
                                  tau * e.pair().phi.values + g.values);
}

Complex reduced_time_map(Complex q0, Complex q1, const ReducedField& field) {
  if (q0 == q1) return 0.0;
  const Complex d = q1 - q0;
  // Distance from the pole at q = 0 to the segment.
  const double s = std::clamp(-(std::conj(d) * q0).real() / std::norm(d), 0.0, 1.0);
  if (std::abs(q0 + s * d) < kPoleMargin)
    throw DomainError("reduced_time_map: segment passes through q = 0");
  const Integrand f = [&](double t) { return d * checked_inverse(field, q0 + t * d); };
  const double scale = std::abs(d) / std::max(std::abs(field(q0)), kPoleMargin);
  return integrate(f, 0.0, 1.0, 1e-14 * std::max(scale, 1.0));
}

Complex winding_time(const ReducedField& field, double radius) {
  if (!(radius > 0.0)) throw DomainError("winding_time: radius must be positive");
  // Periodic analytic integrand: the trapezoid rule converges geometrically.
  Complex previous = 0.0;
  for (int m = 32; m <= (1 << 16); m *= 2) {
    Complex sum = 0.0;
    for (int j = 0; j < m; ++j) {
      const Complex q = std::polar(radius, 2.0 * std::numbers::pi * j / m);
      sum += Complex(0.0, 1.0) * q * checked_inverse(field, q);
    }
    const Complex value = sum * (2.0 * std::numbers::pi / m);
    if (m > 32 && std::abs(value - previous) <= 1e-15 * std::abs(value))
      return value;
    previous = value;
  }
  return previous;
}

}  // namespace spall
