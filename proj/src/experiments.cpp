#include "spall/experiments.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "spall/errors.hpp"
#include "spall/io.hpp"
#include "spall/quadode.hpp"

namespace spall {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDecayLevel = 1e-6;
constexpr double kDiskTol = 1e-6;
constexpr double kEnvelopeSlack = 1e-3;
constexpr double kNonClosure = 1e-2;

const Complex I{0.0, 1.0};

double max_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

double rel_l2_diff(const StateField& a, const StateField& b) {
  const double den = norms(a).l2;
  StateField d(a.grid, a.values - b.values);
  return den > 0.0 ? norms(d).l2 / den : norms(d).l2;
}

std::vector<Complex> field_values(const StateField& f) {
  return {f.values.data(), f.values.data() + f.values.size()};
}

/// Evolution that reports a step collapse as non-survival instead of
/// propagating it; used where the caller only needs a yes/no answer.
std::optional<Trajectory> try_evolve(const StateField& u0, const TimePath& path,
                                     const EvolveOptions& opts) {
  try {
    return evolve(u0, path, opts);
  } catch (const ComputationError&) {
    return std::nullopt;
  }
}

class Output {
 public:
  Output(const LabContext& ctx, ExperimentReport& report)
      : report_(report) {
    if (!ctx.output_dir.empty()) {
      dir_ = ctx.output_dir / report.name;
      std::filesystem::create_directories(dir_);
    }
  }
  bool enabled() const { return !dir_.empty(); }

  void csv(const std::string& file, const std::string& header,
           const std::vector<std::vector<double>>& rows) {
    if (!enabled()) return;
    write_csv(dir_ / file, header, rows);
    report_.artifacts.push_back(file);
  }
  void trajectory(const std::string& file, const Trajectory& traj) {
    if (!enabled()) return;
    write_trajectory_csv(dir_ / file, traj);
    report_.artifacts.push_back(file);
  }
  void field(const std::string& file, const StateField& f) {
    if (!enabled()) return;
    write_field_csv(dir_ / file, f);
    report_.artifacts.push_back(file);
  }
  void finish() {
    if (!enabled()) return;
    report_.artifacts.push_back("report.json");
    write_report(dir_ / "report.json", report_);
  }

 private:
  ExperimentReport& report_;
  std::filesystem::path dir_;
};

EvolveOptions with_stride(EvolveOptions o, int stride) {
  o.snapshot_stride = stride;
  return o;
}

/// Root of g on [a, b] where g changes sign.
double bracketed_root(const std::function<double(double)>& g, double a,
                      double b) {
  std::uintmax_t iters = 100;
  auto tol = [](double lo, double hi) {
    return std::abs(hi - lo) <= 1e-12 * std::max(1.0, std::abs(lo));
  };
  const auto r = boost::math::tools::toms748_solve(g, a, b, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace

void ExperimentReport::check(bool ok, const std::string& what) {
  if (!ok) {
    verdict = Verdict::fail;
    failures.push_back(what);
  }
}

// --------------------------------------------------------------- shared

double real_blowup_time(LabContext& ctx, double tau) {
  if (auto it = ctx.blowup_times.find(tau); it != ctx.blowup_times.end())
    return it->second;
  const auto& e = ctx.expansion;
  const StateField u0 = seed_initial(tau, e);
  // Linear escape estimate; the evolution is given ten times that long.
  const double estimate = 1.0 + std::log(e.r_max() / tau) / e.mu();
  const Trajectory tr = evolve(u0, TimePath::segment(10.0 * estimate), ctx.options);
  const double T = (tr.status == TrajectoryStatus::blowup && tr.blowup_time)
                       ? tr.blowup_time->real()
                       : std::numeric_limits<double>::quiet_NaN();
  ctx.blowup_times[tau] = T;
  return T;
}

namespace {

struct SurvivalProbe {
  double delta;
  bool survived;
  double peak;
};

SurvivalProbe probe_strip(const LabContext& ctx, const StateField& u0,
                          double delta, double T) {
  const TimePath path({0.0, I * delta, I * delta + 5.0 * T});
  auto tr = try_evolve(u0, path, with_stride(ctx.options, 1));
  if (!tr) return {delta, false, std::numeric_limits<double>::infinity()};
  return {delta, tr->completed(), max_of(tr->supnorms)};
}

std::vector<SurvivalProbe> strip_bisection(LabContext& ctx, double& result) {
  const auto& e = ctx.expansion;
  const double T = real_blowup_time(ctx, ctx.tau);
  const double period = 2.0 * kPi / e.mu();
  std::vector<SurvivalProbe> probes;
  result = std::numeric_limits<double>::quiet_NaN();
  if (!std::isfinite(T)) return probes;
  const StateField u0 = seed_initial(ctx.tau, e);

  // 2 pi / mu itself is not probed: there the continued state is the real
  // seed again, and survival would be decided by rounding.
  double lo = 0.05 * period, hi = period;
  probes.push_back(probe_strip(ctx, u0, lo, T));
  if (!probes.back().survived) return probes;
  while (hi - lo > 1e-3 * lo) {
    const double mid = 0.5 * (lo + hi);
    probes.push_back(probe_strip(ctx, u0, mid, T));
    (probes.back().survived ? lo : hi) = mid;
  }
  result = lo;
  return probes;
}

}  // namespace

double critical_strip_height(LabContext& ctx) {
  if (!ctx.strip_height) {
    double d;
    strip_bisection(ctx, d);
    ctx.strip_height = d;
  }
  return *ctx.strip_height;
}

double resurrection_bound(const LabContext& ctx, double tau) {
  const auto& e = ctx.expansion;
  const RealVector v0 = seed_initial(tau, e).real();
  const RealVector w0 = e.pair().phi.real();
  double ratio = 0.0;
  for (int j = 0; j < v0.size(); ++j) ratio = std::max(ratio, v0(j) / w0(j));
  const double up = e.equilibrium().peak();
  return 2.0 * ctx.semigroup_constant * std::max(ratio, up);
}

double measured_half_winding(const LabContext& ctx) {
  const auto& e = ctx.expansion;
  const StateField u0 = seed_initial(ctx.tau, e);
  auto g = [&](double s) {
    const Trajectory tr = evolve(u0, TimePath::segment(I * s), ctx.options);
    return e.coordinate(tr.final_state()).imag();
  };
  const double guess = kPi / e.mu();
  return bracketed_root(g, 0.8 * guess, 1.2 * guess);
}

double measured_zero_half_winding(const LabContext& ctx) {
  const auto& grid = ctx.expansion.grid();
  const StateField u0 = from_modes(ModeVector::basis(grid.size(), 1, 1e-6), grid);
  const StateField e1 = from_modes(ModeVector::basis(grid.size(), 1), grid);
  auto g = [&](double s) {
    const Trajectory tr = evolve(u0, TimePath::segment(I * s), ctx.options);
    return pairing(e1, tr.final_state()).imag();
  };
  const double guess = 4.0 / kPi;
  return bracketed_root(g, 0.8 * guess, 1.2 * guess);
}

// ------------------------------------------------------------ foliation

ExperimentReport exp_foliation(LabContext& ctx) {
  ExperimentReport rep;
  rep.name = "foliation";
  Output out(ctx, rep);
  const auto& e = ctx.expansion;

  std::vector<Complex> seeds;
  for (double r : {0.01, 0.02})
    for (int k = 1; k <= 16; ++k) seeds.push_back(std::polar(r, 2.0 * kPi * k / 17.0));
  seeds.push_back(-0.02);
  seeds.push_back(-0.01);
  // Seeds whose trajectory is checked against its initial solution disk and
  // the half-line decay envelope.
  const std::vector<Complex> trapped{Complex(0.0, 0.02), std::polar(0.02, kPi / 4)};
  seeds.insert(seeds.end(), trapped.begin(), trapped.end());

  const double horizon = 40.0;
  std::vector<std::vector<double>> rows;
  double worst_final = 0.0, worst_peak = 0.0;
  int blowups = 0;
  for (Complex tau : seeds) {
    const StateField u0 = seed_initial(tau, e);
    const bool is_trapped = std::find(trapped.begin(), trapped.end(), tau) != trapped.end();
    const Trajectory tr =
        evolve(u0, TimePath::segment(horizon), with_stride(ctx.options, is_trapped ? 1 : 0));
    const double peak = max_of(tr.supnorms);
    const double final_sup = tr.supnorms.back();
    if (!tr.completed()) ++blowups;
    worst_final = std::max(worst_final, final_sup);
    worst_peak = std::max(worst_peak, peak);
    rows.push_back({tau.real(), tau.imag(), peak, final_sup, tr.completed() ? 0.0 : 1.0});

    if (is_trapped) {
      const auto v0 = field_values(u0);
      const SolutionDisk disk = enclosing_disk(v0);
      const double s0 = norms(u0).sup;
      const double phi = min_angle(v0);
      double margin = std::numeric_limits<double>::infinity();
      double envelope = 0.0;
      for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        for (int j = 0; j < tr.snapshots[i].values.size(); ++j)
          margin = std::min(margin, disk.margin(tr.snapshots[i].values(j)));
        envelope = std::max(envelope,
                            tr.supnorms[i] / supnorm_bound(tr.times[i].real(), s0, phi));
      }
      const std::string tag = tau.real() == 0.0 ? "imag" : "diag";
      rep.metrics["disk_margin_" + tag] = margin;
      rep.metrics["envelope_ratio_" + tag] = envelope;
      rep.check(margin >= -kDiskTol, "trajectory of seed " + tag + " leaves its solution disk");
      rep.check(envelope <= 1.0 + kEnvelopeSlack,
                "seed " + tag + " exceeds the half-line decay envelope");
      out.trajectory("trajectory_" + tag + ".csv", tr);
    }
  }
  rep.metrics["seeds"] = static_cast<double>(seeds.size());
  rep.metrics["horizon"] = horizon;
  rep.metrics["blowups"] = blowups;
  rep.metrics["max_final_supnorm"] = worst_final;
  rep.metrics["max_peak_supnorm"] = worst_peak;
  rep.check(blowups == 0, "a seed in the slit disk blew up");
  rep.check(worst_final < kDecayLevel, "a seed did not decay below 1e-6");
  out.csv("seeds.csv", "tau_re,tau_im,peak_supnorm,final_supnorm,blowup", rows);
  out.finish();
  return rep;
}

// --------------------------------------------------------------- blowup

ExperimentReport exp_blowup(LabContext& ctx) {
  ExperimentReport rep;
  rep.name = "blowup";
  Output out(ctx, rep);
  const auto& e = ctx.expansion;
  const std::vector<double> taus{0.005, 0.01, 0.02};
  std::vector<double> T;
  std::vector<std::vector<double>> rows;
  for (double tau : taus) {
    const double t = real_blowup_time(ctx, tau);
    const double nu0 = norms(seed_initial(tau, e)).sup;
    const double lower = lower_existence_time(nu0, ctx.semigroup_constant);
    T.push_back(t);
    char key_buf[16];
    std::snprintf(key_buf, sizeof key_buf, "%g", tau);
    const std::string key = key_buf;
    rep.metrics["T_" + key] = t;
    rep.metrics["lower_bound_" + key] = lower;
    rep.check(std::isfinite(t), "no blow-up for tau = " + key);
    rep.check(!(t < lower), "blow-up before the lower existence time for tau = " + key);
    rows.push_back({tau, t, lower});
  }
  rep.check(T[2] < T[1] && T[1] < T[0], "T(tau) is not strictly decreasing");

  // Seeds lie on one orbit, so the gap between blow-up times is the reduced
  // travel time between the seeds.
  const double gap = T[0] - T[1];
  const double reduced = reduced_time_map(0.005, 0.01, e).real();
  rep.metrics["gap_T_0.005_0.01"] = gap;
  rep.metrics["reduced_time_0.005_0.01"] = reduced;
  rep.metrics["gap_relative_error"] = std::abs(gap - reduced) / reduced;
  rep.check(std::abs(gap - reduced) <= 1e-4 * reduced,
            "blow-up time gap disagrees with the reduced flow");

  // Slope of T against log(1/tau); tends to 1/mu.
  const double slope = (T[0] - T[2]) / std::log(0.02 / 0.005);
  rep.metrics["escape_slope"] = slope;
  rep.metrics["inverse_mu"] = 1.0 / e.mu();
  rep.metrics["escape_constant"] = T[1] - std::log(1.0 / 0.01) / e.mu();
  out.csv("blowup_times.csv", "tau,T,lower_bound", rows);
  out.finish();
  return rep;
}

// ---------------------------------------------------------- spall strip

ExperimentReport exp_spall_strip(LabContext& ctx, std::optional<double> delta_in) {
  ExperimentReport rep;
  rep.name = "spall_strip";
  Output out(ctx, rep);
  const auto& e = ctx.expansion;
  const double T = real_blowup_time(ctx, ctx.tau);
  const double delta = delta_in ? *delta_in : 0.5 * critical_strip_height(ctx);
  const double bound = resurrection_bound(ctx, ctx.tau);
  const double T2 = std::max(1.1 * bound, 2.0 * T);
  rep.metrics["T"] = T;
  rep.metrics["delta"] = delta;
  rep.metrics["T1_bound"] = bound;
  rep.metrics["T2"] = T2;
  rep.metrics["semigroup_constant"] = ctx.semigroup_constant;
  if (!(std::isfinite(T) && delta > 0.0)) {
    rep.check(false, "no blow-up time or strip height available");
    out.finish();
    return rep;
  }

  const StateField u0 = seed_initial(ctx.tau, e);
  const TimePath path({0.0, I * delta, I * delta + T2, Complex(T2)});
  const Trajectory tr = evolve(u0, path, with_stride(ctx.options, 1));
  rep.metrics["accepted_steps"] = static_cast<double>(tr.accepted_steps);
  rep.metrics["max_supnorm"] = max_of(tr.supnorms);
  rep.check(tr.completed(), "blow-up on the spall-strip path");
  out.trajectory("trajectory.csv", tr);
  if (!tr.completed()) {
    out.finish();
    return rep;
  }

  // Horizontal leg: from the first snapshot at i delta to the one at
  // i delta + T2.
  std::size_t first = 0, last = 0;
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    if (tr.times[i] == I * delta) first = i;
    if (tr.times[i] == I * delta + T2) last = i;
  }
  const StateField& leg0 = tr.snapshots[first];
  const auto v0 = field_values(leg0);
  const bool upper = std::all_of(v0.begin(), v0.end(), [](Complex z) { return z.imag() > 0.0; });
  rep.check(upper, "leg start is not in the upper half-plane");
  out.field("leg_start.csv", leg0);
  if (upper) {
    const double s0 = norms(leg0).sup;
    const double phi = min_angle(v0);
    const double t_half = 0.5 * T2;
    double worst = 0.0, shape = 0.0;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = first; i <= last; ++i) {
      const double tt = tr.times[i].real();
      const double env = supnorm_bound(tt, s0, phi);
      rows.push_back({tt, tr.supnorms[i], env});
      if (tt >= t_half) {
        worst = std::max(worst, tr.supnorms[i] / env);
        shape = std::max(shape, tr.supnorms[i] * tt * delta);
      }
    }
    rep.metrics["leg_start_supnorm"] = s0;
    rep.metrics["leg_start_min_angle"] = phi;
    rep.metrics["envelope_ratio_tail"] = worst;
    rep.metrics["tail_supnorm_t_delta"] = shape;
    rep.check(worst <= 1.0 + kEnvelopeSlack,
              "horizontal-leg supnorm exceeds the decay envelope");
    out.csv("horizontal_leg.csv", "t,supnorm,envelope", rows);
  }

  // The lower strip gives the conjugate continuation.
  const Trajectory lower = evolve(u0, path.conjugate(), ctx.options);
  const double conj_err =
      lower.completed() ? rel_l2_diff(tr.final_state().conjugate(), lower.final_state())
                        : std::numeric_limits<double>::infinity();
  rep.metrics["conjugate_path_difference"] = conj_err;
  rep.check(conj_err <= 10.0 * ctx.options.rel_tol,
            "lower path is not the conjugate continuation");

  // Back on the real axis the state is trapped near zero and decays.
  const Trajectory after =
      evolve(tr.final_state(), TimePath::segment(10.0), with_stride(ctx.options, 0));
  rep.metrics["return_supnorm"] = tr.supnorms.back();
  rep.metrics["post_return_supnorm"] = after.supnorms.back();
  rep.check(after.completed() && after.supnorms.back() < kDecayLevel,
            "post-return real evolution does not decay");
  out.finish();
  return rep;
}

// ------------------------------------------------------------ monodromy

ExperimentReport exp_monodromy(LabContext& ctx) {
  ExperimentReport rep;
  rep.name = "monodromy";
  Output out(ctx, rep);
  const auto& e = ctx.expansion;
  const double mu = e.mu();
  const double T = real_blowup_time(ctx, ctx.tau);
  const double delta = kPi / mu;
  const double T2 = std::max(1.1 * resurrection_bound(ctx, ctx.tau), 2.0 * T);
  rep.metrics["T"] = T;
  rep.metrics["delta"] = delta;
  rep.metrics["T2"] = T2;
  rep.metrics["non_closure_threshold"] = kNonClosure;

  const StateField u0 = seed_initial(ctx.tau, e);
  const TimePath up({0.0, I * delta, I * delta + T2, Complex(T2)});
  const TimePath down = up.conjugate();
  const Trajectory plus = evolve(u0, up, ctx.options);
  const Trajectory minus = evolve(u0, down, ctx.options);
  rep.check(plus.completed() && minus.completed(), "a continuation blew up");
  if (plus.completed() && minus.completed()) {
    const double diff = rel_l2_diff(plus.final_state(), minus.final_state());
    rep.metrics["endpoint_relative_difference"] = diff;
    rep.metrics["predicted_difference"] =
        2.0 * std::abs(std::sin(dirichlet_eigenvalue(1) * delta));
    rep.check(diff > kNonClosure, "continuations around the blow-up segment coincide");
    out.field("endpoint_plus.csv", plus.final_state());
    out.field("endpoint_minus.csv", minus.final_state());

    // Flow property: restart each path at its second waypoint.
    double worst = 0.0;
    for (const auto* p : {&up, &down}) {
      const auto& w = p->waypoints();
      const Trajectory head = evolve(u0, TimePath({w[0], w[1]}), ctx.options);
      std::vector<Complex> rest{0.0};
      for (std::size_t k = 2; k < w.size(); ++k) rest.push_back(w[k] - w[1]);
      const Trajectory tail = evolve(head.final_state(), TimePath(rest), ctx.options);
      const Trajectory& whole = p == &up ? plus : minus;
      worst = std::max(worst, rel_l2_diff(whole.final_state(), tail.final_state()));
    }
    rep.metrics["flow_property_error"] = worst;
    rep.check(worst <= 10.0 * ctx.options.rel_tol, "flow property violated");
  }

  const double half = measured_half_winding(ctx);
  const double half_zero = measured_zero_half_winding(ctx);
  rep.metrics["half_winding_measured"] = half;
  rep.metrics["half_winding_expected"] = kPi / mu;
  rep.metrics["zero_half_winding_measured"] = half_zero;
  rep.metrics["zero_half_winding_expected"] = 4.0 / kPi;
  rep.check(std::abs(half - kPi / mu) <= 1e-3 * kPi / mu, "half-winding time differs from pi/mu");
  rep.check(std::abs(half_zero - 4.0 / kPi) <= 1e-3 * 4.0 / kPi,
            "zero-state half-winding differs from 4/pi");
  const double winding = std::abs(winding_time(e, std::abs(ctx.tau)));
  rep.metrics["winding_time"] = winding;
  rep.check(std::abs(winding - 2.0 * kPi / mu) <= 1e-8 * winding, "residue winding time mismatch");
  rep.metrics["mu"] = mu;
  rep.metrics["spectral_gap"] = mu + dirichlet_eigenvalue(1);
  rep.check(mu + dirichlet_eigenvalue(1) > 0.01, "mu does not exceed pi^2/4 by 0.01");
  out.finish();
  return rep;
}

// ----------------------------------------------------------- blowup rate

ExperimentReport exp_blowup_rate(LabContext& ctx) {
  ExperimentReport rep;
  rep.name = "blowup_rate";
  Output out(ctx, rep);
  const auto& e = ctx.expansion;
  const double T = real_blowup_time(ctx, ctx.tau);
  const double dstar = critical_strip_height(ctx);
  rep.metrics["T"] = T;
  rep.metrics["delta_star"] = dstar;
  if (!(std::isfinite(T) && std::isfinite(dstar))) {
    rep.check(false, "no blow-up time or strip height available");
    out.finish();
    return rep;
  }
  const std::vector<double> fractions{0.2, 0.1, 0.05, 0.025, 0.0125};
  std::vector<Complex> w{0.0};
  for (double f : fractions) {
    if (w.size() == 1) w.push_back(I * (f * dstar));
    w.push_back(T + I * (f * dstar));
  }
  const Trajectory tr = evolve(seed_initial(ctx.tau, e), TimePath(w), ctx.options);
  rep.check(tr.completed(), "blow-up on the vertical approach");
  out.trajectory("trajectory.csv", tr);
  if (!tr.completed()) {
    out.finish();
    return rep;
  }
  std::vector<std::vector<double>> rows;
  std::vector<double> products;
  bool upper = true;
  for (std::size_t k = 2; k < w.size(); ++k) {
    const auto it = std::find(tr.times.begin(), tr.times.end(), w[k]);
    const auto& snap = tr.snapshots[it - tr.times.begin()];
    const double sigma = w[k].imag();
    const double s = norms(snap).sup;
    for (int j = 0; j < snap.values.size(); ++j)
      upper = upper && snap.values(j).imag() >= -1e-10 * s;
    products.push_back(s * sigma);
    rows.push_back({sigma, s, s * sigma});
  }
  const double hi = max_of(products);
  const double lo = *std::min_element(products.begin(), products.end());
  rep.metrics["fitted_M"] = hi;
  rep.metrics["band_ratio"] = hi / lo;
  for (std::size_t k = 0; k < products.size(); ++k)
    rep.metrics["s_sigma_" + std::to_string(k)] = products[k];
  rep.check(hi / lo <= 2.0, "s(sigma) sigma leaves the factor-2 band");
  rep.check(upper, "values left the upper half-plane");
  out.csv("rate.csv", "sigma,supnorm,supnorm_sigma", rows);
  out.finish();
  return rep;
}

// ----------------------------------------------------------- strip width

ExperimentReport exp_strip_width(LabContext& ctx) {
  ExperimentReport rep;
  rep.name = "strip_width";
  Output out(ctx, rep);
  const auto& e = ctx.expansion;
  double dstar;
  const auto probes = strip_bisection(ctx, dstar);
  ctx.strip_height = dstar;
  const double period = 2.0 * kPi / e.mu();
  rep.metrics["delta_star"] = dstar;
  rep.metrics["residue_period"] = period;
  rep.metrics["half_period"] = kPi / e.mu();
  rep.metrics["strip_constant_4pi_mu"] = 1.0 / (4.0 * kPi * e.mu());
  rep.metrics["winding_time"] = std::abs(winding_time(e, std::abs(ctx.tau)));
  rep.metrics["probes"] = static_cast<double>(probes.size());
  rep.check(dstar > 0.0, "no surviving p-path below 2 pi / mu");
  rep.check(dstar <= period * (1.0 + 1e-12), "strip height exceeds 2 pi / mu");
  std::vector<std::vector<double>> rows;
  for (const auto& p : probes) rows.push_back({p.delta, p.survived ? 1.0 : 0.0, p.peak});
  out.csv("bisection.csv", "delta,survived,peak_supnorm", rows);
  out.finish();
  return rep;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"foliation",   "blowup",    "strip_width",
                                              "spall_strip", "monodromy", "blowup_rate"};
  return names;
}

ExperimentReport run_experiment(LabContext& ctx, const std::string& name) {
  if (name == "foliation") return exp_foliation(ctx);
  if (name == "blowup") return exp_blowup(ctx);
  if (name == "strip_width") return exp_strip_width(ctx);
  if (name == "spall_strip") return exp_spall_strip(ctx);
  if (name == "monodromy") return exp_monodromy(ctx);
  if (name == "blowup_rate") return exp_blowup_rate(ctx);
  throw DomainError("unknown experiment: " + name);
}

}  // namespace spall
