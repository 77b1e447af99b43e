#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "spall/continuation.hpp"
#include "spall/errors.hpp"
#include "spall/manifold.hpp"
#include "support.hpp"

using namespace spall;
using std::numbers::pi;

namespace {

double sup_diff(const StateField& a, const StateField& b) {
  return (a.values - b.values).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("second-order coefficient against a dense physical-space solve") {
  const auto& up = testing::upstream(64);
  const SpatialGrid& g = up.eq.grid();
  const int n = g.size();
  const double dx = g.spacing();
  // E(j, k) = e_{k+1}(x_j); coefficients are dx E^T f.
  Eigen::MatrixXd e(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) e(j, k) = std::sin((k + 1) * pi * (g.point(j) + 1) / 2);
  Eigen::VectorXd lam(n), keep(n);
  for (int k = 0; k < n; ++k) {
    lam(k) = -std::pow((k + 1) * pi / 2, 2);
    keep(k) = k < g.dealias_cutoff() ? 1.0 : 0.0;
  }
  const Eigen::MatrixXd lap = dx * e * lam.asDiagonal() * e.transpose();
  const Eigen::MatrixXd filter = dx * e * keep.asDiagonal() * e.transpose();
  const Eigen::VectorXd u = up.eq.profile.real();
  const Eigen::VectorXd phi = up.pair.phi.real();
  const double mu = up.pair.mu;

  Eigen::MatrixXd a = lap;
  a.diagonal() += 2.0 * u;
  const Eigen::VectorXd g2 = filter * phi.cwiseProduct(phi).eval();
  const double c2 = dx * phi.dot(g2);
  const Eigen::VectorXd rhs = g2 - c2 * phi;
  Eigen::MatrixXd op = -a;
  op.diagonal().array() += 2.0 * mu;
  const Eigen::VectorXd psi2 = op.partialPivLu().solve(rhs);

  CHECK(up.expansion.reduced_coeffs()[0] == doctest::Approx(c2).epsilon(1e-10));
  CHECK((up.expansion.psi(2).real() - psi2).cwiseAbs().maxCoeff() <
        1e-10 * psi2.cwiseAbs().maxCoeff());
}

TEST_CASE("graph terms are real and orthogonal to phi") {
  const auto& e = testing::upstream(128).expansion;
  CHECK(e.order() == 8);
  for (int k = 2; k <= e.order(); ++k) {
    CHECK(std::abs(pairing(e.pair().phi, e.psi(k))) < 1e-10);
    CHECK(e.psi(k).imag().cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(e.psi(1), DomainError);
  CHECK_THROWS_AS(e.psi(9), DomainError);
}

TEST_CASE("graph vanishes to quadratic order") {
  const auto& e = testing::upstream(128).expansion;
  double prev = 1e300;
  for (double tau : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double ratio = norms(e.graph(tau)).l2 / tau;
    CHECK(ratio < 0.2 * prev);
    prev = ratio;
  }
  CHECK(norms(e.graph(0.0)).sup == 0.0);
}

TEST_CASE("resonance is reported with its order") {
  const SpatialGrid g(32);
  const Equilibrium zero = Equilibrium::trivial(g);
  const StateField e1 = from_modes(ModeVector::basis(32, 1), g);
  // 2 mu lands on the second Laplacian eigenvalue.
  const EigenPair fake{-pi * pi / 2, e1, 0.0};
  CHECK_THROWS_WITH_AS(expand_graph(zero, fake, 3), doctest::Contains("k = 2"), ComputationError);
  CHECK_THROWS_AS(expand_graph(zero, fake, 1), DomainError);
}

TEST_CASE("seed_initial") {
  const auto& e = testing::upstream(128).expansion;
  CHECK(sup_diff(seed_initial(0.0, e), e.equilibrium().profile) == 0.0);
  const Complex tau(0.03, 0.04);
  CHECK(sup_diff(seed_initial(std::conj(tau), e), seed_initial(tau, e).conjugate()) < 1e-15);
  CHECK(std::abs(e.coordinate(seed_initial(tau, e)) - tau) < 1e-12);
  CHECK_THROWS_AS(seed_initial(1.01 * e.r_max(), e), DomainError);
  CHECK(e.r_max() == doctest::Approx(0.1 * norms(e.equilibrium().profile).sup /
                                     norms(e.pair().phi).sup));

  // Imaginary seeds lie in the upper half-plane with positive boundary slopes.
  const StateField s = seed_initial(Complex(0, 0.05), e);
  const RealVector im = s.imag();
  const RealVector phi = e.pair().phi.real();
  CHECK(im.minCoeff() > 0.0);
  CHECK((im - 0.05 * phi).cwiseAbs().maxCoeff() < 0.05 * 0.05 * 10);
  const double h = e.grid().spacing();
  CHECK(im(0) / h > 0.0);
  CHECK(im(im.size() - 1) / h > 0.0);
}

TEST_CASE("reduced_time_map") {
  const auto& e = testing::upstream(128).expansion;
  CHECK(reduced_time_map(0.01, 0.01, e) == Complex(0.0));
  const ReducedField linear{e.mu(), {}};
  const Complex q0(0.01, 0.002), q1(0.03, -0.01);
  CHECK(std::abs(reduced_time_map(q0, q1, linear) - std::log(q1 / q0) / e.mu()) < 1e-13);
  for (double d : {1e-3, 1e-4}) {
    const Complex a(0.02, 0.0), b = a + Complex(d, d);
    CHECK(std::abs(reduced_time_map(a, b, e)) <= 2.0 * std::abs(b - a) / std::abs(e.reduced_field()(a)));
  }
  CHECK_THROWS_AS(reduced_time_map(-0.01, 0.01, e), DomainError);
}

TEST_CASE("winding time is the residue period") {
  const auto& e = testing::upstream(128).expansion;
  for (double r : {1e-3, 0.01, 0.05, 0.1}) {
    const Complex w = winding_time(e, r);
    CHECK(std::abs(w - Complex(0, 2 * pi / e.mu())) < 1e-8 * 2 * pi / e.mu());
  }
  CHECK_THROWS_AS(winding_time(e, 0.0), DomainError);
}

TEST_CASE("the PDE flow stays on the graph and follows the reduced flow") {
  const auto& e = testing::upstream(128).expansion;
  const StateField u0 = seed_initial(0.005, e);
  for (Complex t : {Complex(0.5), Complex(0.0, 0.4)}) {
    const Trajectory tr = evolve(u0, TimePath::segment(t));
    const Complex q = e.coordinate(tr.final_state());
    CHECK(sup_diff(tr.final_state(), seed_initial(q, e)) < 1e-8);
    CHECK(std::abs(reduced_time_map(0.005, q, e) - t) < 1e-7);
  }
}
