#include "spall/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "spall/errors.hpp"
#include "spall/quadode.hpp"

namespace spall {

// ---------------------------------------------------------------- TimePath

TimePath::TimePath(std::vector<Complex> waypoints)
    : waypoints_(std::move(waypoints)) {
  if (waypoints_.size() < 2)
    throw DomainError("TimePath: need at least two waypoints");
  if (waypoints_.front() != Complex{})
    throw DomainError("TimePath: waypoint 0 must be the origin");
  for (std::size_t k = 1; k < waypoints_.size(); ++k) {
    const Complex d = waypoints_[k] - waypoints_[k - 1];
    if (d == Complex{})
      throw DomainError("TimePath: waypoint " + std::to_string(k) +
                        " repeats its predecessor");
    if (d.real() < 0.0)
      throw DomainError("TimePath: waypoint " + std::to_string(k) +
                        " steps backwards in real time");
  }
}

TimePath TimePath::segment(Complex t) { return TimePath({Complex{}, t}); }

double TimePath::length() const {
  double s = 0.0;
  for (std::size_t k = 1; k < waypoints_.size(); ++k)
    s += std::abs(waypoints_[k] - waypoints_[k - 1]);
  return s;
}

Complex TimePath::at(double s) const {
  for (std::size_t k = 1; k < waypoints_.size(); ++k) {
    const Complex d = waypoints_[k] - waypoints_[k - 1];
    const double len = std::abs(d);
    if (s <= len || k + 1 == waypoints_.size())
      return waypoints_[k - 1] + d * (s / len);
    s -= len;
  }
  return waypoints_.back();
}

TimePath TimePath::conjugate() const {
  std::vector<Complex> w(waypoints_.size());
  std::transform(waypoints_.begin(), waypoints_.end(), w.begin(),
                 [](Complex z) { return std::conj(z); });
  return TimePath(std::move(w));
}

TimePath TimePath::then(const TimePath& next) const {
  std::vector<Complex> w = waypoints_;
  for (std::size_t k = 1; k < next.waypoints_.size(); ++k)
    w.push_back(end() + next.waypoints_[k]);
  return TimePath(std::move(w));
}

void EvolveOptions::validate() const {
  if (!(rel_tol > 0.0)) throw DomainError("EvolveOptions: rel_tol must be > 0");
  if (!(dt_min > 0.0) || !(dt_min < dt_init))
    throw DomainError("EvolveOptions: need 0 < dt_min < dt_init");
  if (!(blowup_threshold > 0.0))
    throw DomainError("EvolveOptions: blowup_threshold must be > 0");
  if (snapshot_stride < 0)
    throw DomainError("EvolveOptions: snapshot_stride must be >= 0");
}

Trajectory Trajectory::conjugate() const {
  Trajectory out = *this;
  for (auto& t : out.times) t = std::conj(t);
  for (auto& s : out.snapshots) s = s.conjugate();
  if (out.blowup_time) out.blowup_time = std::conj(*out.blowup_time);
  return out;
}

// ------------------------------------------------------------------ ETDRK4

namespace {

struct PhiSet {
  ComplexVector e, e_half, half_phi1;  // exp(z), exp(z/2), (h/2) phi1(z/2)
  ComplexVector f1, f2, f3;            // h * (phi1 - 3phi2 + 4phi3), ...
};

// phi_1..phi_3 at z. Below |z| = 1 a 20-term Taylor series avoids the
// cancellation in the closed forms.
void phi_functions(Complex z, Complex& p1, Complex& p2, Complex& p3) {
  if (std::abs(z) < 1.0) {
    // phi_k(z) = sum_j z^j / (j + k)!
    Complex s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (int j = 20; j >= 0; --j) {
      s1 = s1 * z / static_cast<double>(j + 2) + 1.0;
      s2 = s2 * z / static_cast<double>(j + 3) + 1.0;
      s3 = s3 * z / static_cast<double>(j + 4) + 1.0;
    }
    p1 = s1;
    p2 = s2 / 2.0;
    p3 = s3 / 6.0;
    return;
  }
  const Complex ez = std::exp(z);
  p1 = (ez - 1.0) / z;
  p2 = (ez - 1.0 - z) / (z * z);
  p3 = (ez - 1.0 - z - 0.5 * z * z) / (z * z * z);
}

class EtdStepper {
 public:
  EtdStepper(const SpatialGrid& grid, bool nonlinear)
      : dst_(grid.size()),
        keep_(grid.dealias_cutoff()),
        nonlinear_(nonlinear),
        lambda_(grid.size()) {
    for (int k = 0; k < grid.size(); ++k) lambda_(k) = dirichlet_eigenvalue(k + 1);
  }

  PhiSet coefficients(Complex h) const {
    const int n = static_cast<int>(lambda_.size());
    PhiSet c{ComplexVector(n), ComplexVector(n), ComplexVector(n),
             ComplexVector(n), ComplexVector(n), ComplexVector(n)};
    for (int k = 0; k < n; ++k) {
      const Complex z = lambda_(k) * h;
      Complex p1, p2, p3, q1, q2, q3;
      phi_functions(z, p1, p2, p3);
      phi_functions(0.5 * z, q1, q2, q3);
      c.e(k) = std::exp(z);
      c.e_half(k) = std::exp(0.5 * z);
      c.half_phi1(k) = 0.5 * h * q1;
      c.f1(k) = h * (p1 - 3.0 * p2 + 4.0 * p3);
      c.f2(k) = h * (p2 - 2.0 * p3);
      c.f3(k) = h * (4.0 * p3 - p2);
    }
    return c;
  }

  void nonlinear_term(const ComplexVector& a, ComplexVector& out) const {
    if (!nonlinear_) {
      out.setZero(a.size());
      return;
    }
    dst_.inverse(a, values_);
    values_ = values_.array().square().matrix();
    dst_.forward(values_, out);
    out.tail(out.size() - keep_).setZero();
  }

  ComplexVector step(const ComplexVector& a, const PhiSet& c) const {
    ComplexVector nu, na, nb, nc;
    nonlinear_term(a, nu);
    const ComplexVector ea = c.e_half.cwiseProduct(a);
    const ComplexVector sa = ea + c.half_phi1.cwiseProduct(nu);
    nonlinear_term(sa, na);
    const ComplexVector sb = ea + c.half_phi1.cwiseProduct(na);
    nonlinear_term(sb, nb);
    const ComplexVector sc =
        c.e_half.cwiseProduct(sa) + c.half_phi1.cwiseProduct(2.0 * nb - nu);
    nonlinear_term(sc, nc);
    return c.e.cwiseProduct(a) + c.f1.cwiseProduct(nu) +
           2.0 * c.f2.cwiseProduct(na + nb) + c.f3.cwiseProduct(nc);
  }

  ComplexVector to_values(const ComplexVector& a) const {
    ComplexVector v;
    dst_.inverse(a, v);
    return v;
  }

 private:
  SineTransform dst_;
  int keep_;
  bool nonlinear_;
  RealVector lambda_;
  mutable ComplexVector values_;
};

double max_abs(const ComplexVector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

bool all_finite(const ComplexVector& v) {
  return v.allFinite();
}

// Zero of 1/supnorm, extrapolated from the last three accepted samples under
// the rate ||u|| ~ 1/(C (T - s)). Falls back to the last two samples.
double extrapolate_blowup(const std::vector<double>& s,
                          const std::vector<double>& sup) {
  const std::size_t m = s.size();
  if (m < 2) return s.back();
  const double s1 = s[m - 2], s2 = s[m - 1];
  const double y1 = 1.0 / sup[m - 2], y2 = 1.0 / sup[m - 1];
  double linear = s2;
  if (y1 > y2) linear = s2 + y2 * (s2 - s1) / (y1 - y2);
  if (m < 3) return linear;
  // Quadratic through the three points, Newton form around s2.
  const double s0 = s[m - 3], y0 = 1.0 / sup[m - 3];
  const double d01 = (y1 - y0) / (s1 - s0), d12 = (y2 - y1) / (s2 - s1);
  const double c2 = (d12 - d01) / (s2 - s0);
  const double b = d12 + c2 * (s2 - s1);  // slope at s2
  if (c2 == 0.0 || !(b < 0.0)) return linear;
  // Smallest positive root of y2 + b x + c2 x^2.
  const double disc = b * b - 4.0 * c2 * y2;
  if (disc < 0.0) return linear;
  const double q = -0.5 * (b - std::sqrt(disc));  // b < 0
  double root = std::numeric_limits<double>::infinity();
  for (const double r : {q / c2, y2 / q})
    if (r >= 0.0 && r < root) root = r;
  return std::isfinite(root) ? s2 + root : linear;
}

}  // namespace

Trajectory evolve(const StateField& u0, const TimePath& path,
                  const EvolveOptions& opts) {
  opts.validate();
  const SpatialGrid& grid = u0.grid;
  const EtdStepper stepper(grid, opts.nonlinear);

  Trajectory traj;
  ComplexVector a = to_modes(u0).coeffs;
  double s_total = 0.0;
  Complex t_now = 0.0;
  double sup = norms(u0).sup;
  const double sup0 = sup;

  auto record = [&](const ComplexVector& values, double supnorm) {
    if (!traj.arclength.empty() && traj.arclength.back() == s_total) return;
    traj.arclength.push_back(s_total);
    traj.times.push_back(t_now);
    traj.snapshots.emplace_back(grid, values);
    traj.supnorms.push_back(supnorm);
  };
  record(u0.values, sup);

  // History of accepted steps for blow-up extrapolation.
  std::vector<double> hist_s{0.0}, hist_sup{sup};
  double h_next = opts.dt_init;
  long since_snapshot = 0;

  const auto& w = path.waypoints();
  for (std::size_t k = 1; k < w.size(); ++k) {
    const Complex delta = w[k] - w[k - 1];
    const double seg_len = std::abs(delta);
    const Complex dir = delta / seg_len;
    double s_local = 0.0;
    while (s_local < seg_len) {
      const double remaining = seg_len - s_local;
      bool last = h_next >= remaining * (1.0 - 1e-12);
      const double h = last ? remaining : h_next;

      const Complex dt = dir * h;
      const ComplexVector coarse = stepper.step(a, stepper.coefficients(dt));
      const PhiSet half = stepper.coefficients(0.5 * dt);
      const ComplexVector fine = stepper.step(stepper.step(a, half), half);

      double err = 0.0;
      const double diff = max_abs(fine - coarse);
      const bool finite = all_finite(fine) && all_finite(coarse);
      if (!finite) {
        err = 1e10;
      } else if (diff > 0.0) {
        err = diff / (opts.rel_tol * std::max(max_abs(fine), 1e-300));
      }

      if (err <= 1.0) {
        a = fine;
        s_local = last ? seg_len : s_local + h;
        s_total += h;
        t_now = last ? w[k] : w[k - 1] + dir * s_local;
        ++traj.accepted_steps;
        const ComplexVector values = stepper.to_values(a);
        sup = max_abs(values);
        hist_s.push_back(s_total);
        hist_sup.push_back(sup);
        const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        // A step clipped at a waypoint does not shrink the proposal.
        h_next = last ? std::max(h_next, h * grow) : h * grow;

        if (sup > opts.blowup_threshold) {
          record(values, sup);
          traj.status = TrajectoryStatus::blowup;
          traj.blowup_time = path.at(extrapolate_blowup(hist_s, hist_sup));
          return traj;
        }
        ++since_snapshot;
        if (last || (opts.snapshot_stride > 0 &&
                     since_snapshot >= opts.snapshot_stride)) {
          record(values, sup);
          since_snapshot = 0;
        }
      } else {
        ++traj.rejected_steps;
        h_next = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5);
        if (h_next < opts.dt_min) {
          const std::size_t m = hist_sup.size();
          const bool rising = m >= 3 && hist_sup[m - 1] > hist_sup[m - 2] &&
                              hist_sup[m - 2] > hist_sup[m - 3];
          if (sup >= std::sqrt(opts.blowup_threshold) ||
              (rising && sup > 10.0 * std::max(sup0, 1.0))) {
            record(stepper.to_values(a), sup);
            traj.status = TrajectoryStatus::blowup;
            traj.blowup_time = path.at(extrapolate_blowup(hist_s, hist_sup));
            return traj;
          }
          throw ComputationError(
              "evolve: step size collapsed below dt_min at |t| = " +
              std::to_string(std::abs(t_now)) + " with bounded sup-norm " +
              std::to_string(sup));
        }
      }
    }
  }
  return traj;
}

Trajectory evolve_ode_mode(const StateField& u0, const TimePath& path) {
  const SpatialGrid& grid = u0.grid;
  Trajectory traj;

  // Earliest arc length at which some pole 1/u0_j lies on the path.
  double s_hit = std::numeric_limits<double>::infinity();
  double offset = 0.0;
  const auto& w = path.waypoints();
  for (std::size_t k = 1; k < w.size(); ++k) {
    const Complex d = w[k] - w[k - 1];
    const double len = std::abs(d);
    for (int j = 0; j < grid.size(); ++j) {
      const Complex u = u0.values(j);
      if (u == Complex{}) continue;
      const Complex pole = 1.0 / u;
      const double proj = ((pole - w[k - 1]) * std::conj(d)).real() / len;
      if (proj < 0.0 || proj > len) continue;
      const double dist = std::abs(w[k - 1] + d * (proj / len) - pole);
      if (dist <= 1e-14 * std::max(1.0, std::abs(pole)))
        s_hit = std::min(s_hit, offset + proj);
    }
    offset += len;
  }

  auto push = [&](double s, Complex t) {
    ComplexVector v(grid.size());
    for (int j = 0; j < grid.size(); ++j) {
      const OdePoint p = ode_flow(t, u0.values(j));
      v(j) = p.is_finite() ? p.value() : Complex(INFINITY, 0.0);
    }
    traj.arclength.push_back(s);
    traj.times.push_back(t);
    traj.supnorms.push_back(v.cwiseAbs().maxCoeff());
    traj.snapshots.emplace_back(grid, std::move(v));
  };

  push(0.0, 0.0);
  offset = 0.0;
  for (std::size_t k = 1; k < w.size(); ++k) {
    const double len = std::abs(w[k] - w[k - 1]);
    if (offset + len >= s_hit) {
      const Complex t_hit = path.at(s_hit);
      push(s_hit, t_hit);
      traj.status = TrajectoryStatus::blowup;
      traj.blowup_time = t_hit;
      return traj;
    }
    offset += len;
    push(offset, w[k]);
  }
  return traj;
}

double lower_existence_time(double nu0, double c_const) {
  if (!(nu0 > 0.0) || !(c_const > 0.0))
    throw DomainError("lower_existence_time: nu0 and C must be positive");
  return 1.0 / (c_const * c_const * nu0);
}

SemigroupCalibration calibrate_semigroup_constant(const SpatialGrid& grid,
                                                  int samples, double max_angle,
                                                  unsigned seed) {
  if (samples < 1) throw DomainError("calibrate: samples must be positive");
  if (!(max_angle >= 0.0 && max_angle < std::numbers::pi / 2))
    throw DomainError("calibrate: max_angle must lie in [0, pi/2)");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const int n = grid.size();
  const SineTransform dst(n);

  std::vector<Complex> times;
  for (int ir = 0; ir <= 16; ++ir) {
    const double r = std::pow(10.0, -3.0 + 4.0 * ir / 16.0);
    for (int ia = -4; ia <= 4; ++ia)
      times.push_back(std::polar(r, max_angle * ia / 4.0));
  }

  double c = 1.0;
  ComplexVector coeffs(n), evolved(n), values(n);
  for (int i = 0; i < samples; ++i) {
    for (int k = 0; k < n; ++k)
      coeffs(k) = Complex(normal(rng), normal(rng)) / static_cast<double>(k + 1);
    dst.inverse(coeffs, values);
    const double base = max_abs(values);
    for (const Complex t : times) {
      for (int k = 0; k < n; ++k)
        evolved(k) = coeffs(k) * std::exp(dirichlet_eigenvalue(k + 1) * t);
      dst.inverse(evolved, values);
      c = std::max(c, max_abs(values) / base);
    }
  }
  return {c, samples, max_angle, seed};
}

}  // namespace spall
