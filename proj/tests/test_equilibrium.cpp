#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "spall/equilibrium.hpp"
#include "spall/errors.hpp"
#include "support.hpp"

using namespace spall;
using std::numbers::pi;

TEST_CASE("shoot_profile") {
  CHECK_THROWS_AS(shoot_profile(0.0, 100), DomainError);
  CHECK_THROWS_AS(shoot_profile(-1.0, 100), DomainError);
  CHECK_THROWS_AS(shoot_profile(1.0, 0), DomainError);
  const ShootResult small = shoot_profile(1e-4, 1000);
  CHECK(small.end_value > 0.0);
  CHECK(small.end_value == doctest::Approx(1e-4).epsilon(1e-3));
  CHECK(small.field.size() == 1001);
  CHECK(shoot_profile(20.0, 4096).end_value < 0.0);
  // A sign change brackets the root, and halving the step leaves the end
  // values unchanged to RK4 accuracy.
  CHECK(shoot_profile(0.1, 4096).end_value > 0.0);
  CHECK(shoot_profile(50.0, 4096).end_value < 0.0);
  for (double c : {1.0, 2.9, 4.0})
    CHECK(shoot_profile(c, 4096).end_value ==
          doctest::Approx(shoot_profile(c, 16384).end_value).epsilon(1e-10));
}

TEST_CASE("positive symmetric equilibrium") {
  const auto& up = testing::upstream(128);
  const Equilibrium& eq = up.eq;
  const RealVector u = eq.profile.real();
  const int n = eq.grid().size();
  CHECK(eq.residual < 1e-8);
  CHECK(u.minCoeff() > 0.0);
  CHECK(eq.profile.imag().cwiseAbs().maxCoeff() == 0.0);
  double asym = 0.0;
  for (int j = 0; j < n; ++j) asym = std::max(asym, std::abs(u(j) - u(n - 1 - j)));
  CHECK(asym < 1e-10);
  // Recomputed residual: L u + F(u^2).
  const StateField lu = from_modes(laplacian(to_modes(eq.profile)), eq.grid());
  const StateField sq = square_dealiased(eq.profile);
  CHECK((lu.values + sq.values).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_AS(find_equilibrium(eq.grid(), 0.0), DomainError);
}

TEST_CASE("equilibrium and spectrum agree across resolutions") {
  const auto& a = testing::upstream(128);
  const auto& b = testing::upstream(256);
  const double sa = a.eq.peak(), sb = b.eq.peak();
  CHECK(sa >= norms(a.eq.profile).sup);
  CHECK(std::abs(sa - sb) <= 1e-6 * sa);
  CHECK(std::abs(a.pair.mu - b.pair.mu) <= 1e-6 * a.pair.mu);
}

TEST_CASE("leading eigenpair") {
  const auto& up = testing::upstream(128);
  const auto pairs = leading_eigenpairs(up.eq, 3);
  REQUIRE(pairs.size() == 3);
  const EigenPair& p = pairs[0];
  CHECK(p.mu > pi * pi / 4 + 0.01);
  CHECK(p.residual < 1e-8);
  CHECK(norms(p.phi).l2 == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p.phi.real().minCoeff() > 0.0);
  CHECK(pairs[1].mu < 0.0);
  CHECK(pairs[0].mu > pairs[1].mu);
  CHECK(pairs[1].mu > pairs[2].mu);
  // Recomputed residual in physical space.
  const RealMatrix a = linearization_matrix(up.eq);
  const RealVector c = to_modes(p.phi).coeffs.real();
  CHECK((a * c - p.mu * c).norm() < 1e-8);
  CHECK_THROWS_AS(leading_eigenpairs(up.eq, 0), DomainError);
  CHECK_THROWS_AS(leading_eigenpairs(up.eq, 33), DomainError);
}

TEST_CASE("eigenpairs of the bare Laplacian") {
  const SpatialGrid g(64);
  const auto pairs = leading_eigenpairs(Equilibrium::trivial(g), 2);
  CHECK(pairs[0].mu == doctest::Approx(-pi * pi / 4).epsilon(1e-10));
  CHECK(pairs[1].mu == doctest::Approx(-pi * pi).epsilon(1e-10));
}

TEST_CASE("linearization matrix is symmetric") {
  const auto& up = testing::upstream(128);
  const RealMatrix a = linearization_matrix(up.eq);
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(linearization_matrix(SpatialGrid(10), RealVector::Zero(9)), DomainError);
}

TEST_CASE("rayleigh quotient") {
  const auto& up = testing::upstream(128);
  const double mu = up.pair.mu;
  CHECK(rayleigh(up.pair.phi, up.eq) == doctest::Approx(mu).epsilon(1e-8));

  const StateField& u = up.eq.profile;
  const double ru = rayleigh(u, up.eq);
  const double l2 = norms(u).l2;
  CHECK(ru <= mu);
  CHECK(std::abs(ru - gradient_norm_squared(u) / (l2 * l2)) < 1e-8);

  const SpatialGrid g(64);
  const StateField e1 = from_modes(ModeVector::basis(64, 1), g);
  CHECK(rayleigh(e1, Equilibrium::trivial(g)) == doctest::Approx(-pi * pi / 4));
  CHECK(gradient_norm_squared(e1) == doctest::Approx(pi * pi / 4));
  CHECK_THROWS_AS(rayleigh(StateField::zero(up.eq.grid()), up.eq), DomainError);
  CHECK_THROWS_AS(rayleigh(e1, up.eq), DomainError);
}

TEST_CASE("rayleigh quotient never exceeds mu") {
  const auto& up = testing::upstream(128);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 1000; ++i) {
    // Mix smooth and rough fields.
    ComplexVector c(128);
    const double decay = i % 2 ? 1.0 : 2.0;
    for (int n = 0; n < 128; ++n) c(n) = nd(rng) / std::pow(n + 1.0, decay);
    const StateField q = from_modes(ModeVector(c), up.eq.grid());
    CHECK(rayleigh(q, up.eq) <= up.pair.mu + 1e-8);
  }
}
