#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "spall/errors.hpp"
#include "spall/quadode.hpp"

using namespace spall;
using std::numbers::pi;

namespace {

// Dormand-Prince integration of du/ds = t u^2, s in [0, 1], which reaches
// u(t) along the straight segment from 0 to t.
Complex rk_flow(Complex t, Complex u0) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  State y{u0.real(), u0.imag()};
  auto rhs = [t](const State& x, State& dx, double) {
    const Complex u(x[0], x[1]);
    const Complex d = t * u * u;
    dx = {d.real(), d.imag()};
  };
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-14, 1e-14),
                          rhs, y, 0.0, 1.0, 1e-3);
  return {y[0], y[1]};
}

}  // namespace

TEST_CASE("ode_flow closed form") {
  CHECK(ode_flow(0.0, Complex(1, 2)).value() == Complex(1, 2));
  CHECK(std::abs(ode_flow(0.5, 1.0).value() - 2.0) < 1e-15);
  CHECK(ode_flow(1.0, 1.0).is_infinite());
  CHECK_THROWS_AS(ode_flow(1.0, 1.0).value(), DomainError);
  CHECK(ode_flow(Complex(3, -2), 0.0).value() == Complex(0.0));
}

TEST_CASE("ode_flow agrees with adaptive Runge-Kutta") {
  CHECK(std::abs(rk_flow(0.5, 1.0) - 2.0) < 1e-10);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Complex u0(ud(rng), 0.2 + std::abs(ud(rng)));
    const Complex t(0.5 * std::abs(ud(rng)), 0.3 * ud(rng));
    const Complex exact = ode_flow(t, u0).value();
    CHECK(std::abs(rk_flow(t, u0) - exact) <= 1e-10 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("ode_flow conjugation and real blow-up") {
  const Complex u0(0.7, -0.4), t(1.3, 0.6);
  CHECK(std::abs(ode_flow(std::conj(t), std::conj(u0)).value() -
                 std::conj(ode_flow(t, u0).value())) < 1e-15);
  const double a = 2.5;
  for (double s = 0.0; s < 1.0 / a; s += 0.01) CHECK(ode_flow(s, a).is_finite());
  CHECK(ode_flow(1.0 / a, a).is_infinite());
}

TEST_CASE("conserved_quantity") {
  CHECK(conserved_quantity(1.0) == 0.0);
  CHECK(conserved_quantity(Complex(0, 1)) == doctest::Approx(-1.0));
  CHECK(conserved_quantity(ode_flow(0.3, Complex(1, 1)).value()) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK_THROWS_AS(conserved_quantity(0.0), DomainError);
}

TEST_CASE("conservation along real time on random data") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ud(-3.0, 3.0), frac(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const Complex u0(ud(rng), ud(rng));
    if (std::abs(u0) < 1e-3) continue;
    const Complex inv = 1.0 / u0;
    // Stay off the pole on the positive real axis when Im u0 = 0.
    const double t = frac(rng) * (inv.real() > 0 ? 0.99 * inv.real() + 2.0 : 5.0);
    const auto p = ode_flow(t, u0);
    REQUIRE(p.is_finite());
    CHECK(std::abs(conserved_quantity(p.value()) - conserved_quantity(u0)) <=
          1e-12 * std::max(1.0, std::abs(conserved_quantity(u0))));
  }
}

TEST_CASE("enclosing_disk") {
  CHECK(enclosing_disk(std::vector<Complex>{{1, 1}}).radius() == doctest::Approx(1.0));
  CHECK(enclosing_disk(std::vector<Complex>{{0, 0.6}}).radius() == doctest::Approx(0.3));
  const std::vector<Complex> two{{1, 1}, {2, 1}};
  const SolutionDisk d = enclosing_disk(two);
  CHECK(d.radius() == doctest::Approx(2.5));
  CHECK(d.center() == Complex(0, 2.5));
  for (Complex z : two) CHECK(d.contains(z, 1e-14));
  CHECK(d.contains(0.0, 1e-14));
  CHECK_THROWS_AS(enclosing_disk(std::vector<Complex>{{1, 0}}), DomainError);
  CHECK_THROWS_AS(enclosing_disk(std::vector<Complex>{}), DomainError);
  CHECK_THROWS_AS(SolutionDisk(0.0), DomainError);
}

TEST_CASE("solution disks are invariant under real-time flow") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ud(-2.0, 2.0), up(0.05, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Complex u0(ud(rng), up(rng));
    const SolutionDisk disk = enclosing_disk(std::vector<Complex>{u0});
    for (double t = 1e-3; t <= 10.0 * disk.radius(); t *= 1.5)
      CHECK(disk.contains(ode_flow(t, u0).value(), 1e-12 * disk.radius()));
  }
}

TEST_CASE("min_angle and half-lines") {
  CHECK(min_angle(std::vector<Complex>{{0, 1}}) == doctest::Approx(pi / 2));
  CHECK(min_angle(std::vector<Complex>{{1, 1}}) == doctest::Approx(pi / 4));
  CHECK(min_angle(std::vector<Complex>{{1, 1}, {-1, 1}}) == doctest::Approx(pi / 4));
  CHECK_THROWS_AS(min_angle(std::vector<Complex>{{1, -1}}), DomainError);
  const HalfLine h(pi / 4);
  CHECK(h.left_of(Complex(0, 1)));
  CHECK(h.left_of(Complex(-1, 0)));
  CHECK_FALSE(h.left_of(Complex(1, 0.5)));
  CHECK_THROWS_AS(HalfLine(0.0), DomainError);
  CHECK_THROWS_AS(HalfLine{pi}, DomainError);
}

TEST_CASE("supnorm_bound examples and switch point") {
  CHECK(supnorm_bound(0.0, 2.0, pi / 3) == doctest::Approx(2.0));
  CHECK(supnorm_bound(4.0, 1.0, pi / 4) == doctest::Approx(0.5));
  CHECK_THROWS_AS(supnorm_bound(1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(supnorm_bound(1.0, 1.0, pi), DomainError);
  CHECK_THROWS_AS(supnorm_bound(1.0, 0.0, 1.0), DomainError);
  // At cos(phi) t = 1 / s0 the outer branch exceeds the inner one by the
  // factor 1 / cos(phi); both tend to s0 / sin(phi) times that factor.
  for (double phi : {0.3, 0.7, 1.2, 1.5}) {
    const double s0 = 1.7, t = 1.0 / (std::cos(phi) * s0);
    const double inner = supnorm_bound(t * (1 - 1e-12), s0, phi);
    const double outer = supnorm_bound(t * (1 + 1e-12), s0, phi);
    CHECK(outer / inner == doctest::Approx(1.0 / std::cos(phi)).epsilon(1e-9));
    CHECK(outer >= inner);
  }
}

TEST_CASE("supnorm_bound dominates the ODE flow") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(1e-3, pi - 1e-3), mod(0.01, 10.0), tt(0.0, 50.0);
  for (int i = 0; i < 10000; ++i) {
    const double phi = ang(rng), s0 = mod(rng), t = tt(rng);
    const double v = std::abs(ode_flow(t, std::polar(s0, phi)).value());
    CHECK(v <= supnorm_bound(t, s0, phi) * (1 + 1e-12));
  }
  // Fixed phi: the bound decays to zero.
  CHECK(supnorm_bound(1e6, 1.0, 1.0) < 1e-5);
}

TEST_CASE("line_curvature") {
  CHECK(line_curvature(0.0, 1.0, pi / 2) == doctest::Approx(2.0));
  CHECK(line_curvature(1.0, 1.0, pi / 2) == doctest::Approx(0.25));
  CHECK_THROWS_AS(line_curvature(1.0, 0.0, 1.0), DomainError);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(1e-3, pi - 1e-3), ss(0.0, 20.0), tt(1e-3, 20.0);
  for (int i = 0; i < 10000; ++i)
    CHECK(line_curvature(ss(rng), tt(rng), ang(rng)) > 0.0);
}

TEST_CASE("line_curvature matches finite differences of the flowed half-line") {
  // The image of s e^{i phi} under the time-t flow is z(s) = w / (1 - t w);
  // the formula is the signed quantity Re(i z' conj(z'')).
  for (double phi : {0.4, 1.1, 2.3})
    for (double t : {0.5, 1.0, 3.0})
      for (double s : {0.1, 0.8, 2.0}) {
        auto z = [&](double x) { return ode_flow(t, std::polar(x, phi)).value(); };
        const double h = 1e-4;
        const Complex d1 = (z(s + h) - z(s - h)) / (2 * h);
        const Complex d2 = (z(s + h) - 2.0 * z(s) + z(s - h)) / (h * h);
        const double fd = (Complex(0, 1) * d1 * std::conj(d2)).real();
        const double k = line_curvature(s, t, phi);
        CHECK(fd == doctest::Approx(k).epsilon(1e-5));
      }
}
