#pragma once

// End-to-end scenarios on the unstable manifold of u_+. Each returns a
// report with a pass/fail verdict and named metrics, and writes plot-ready
// CSV files into its own directory.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spall/continuation.hpp"
#include "spall/manifold.hpp"

namespace spall {

enum class Verdict { pass, fail };

struct ExperimentReport {
  std::string name;
  Verdict verdict = Verdict::pass;
  std::map<std::string, double> metrics;
  std::vector<std::string> artifacts;  // file names relative to the report
  std::vector<std::string> failures;   // assertions that did not hold

  bool passed() const { return verdict == Verdict::pass; }
  /// Records a named assertion; any false check flips the verdict to fail.
  void check(bool ok, const std::string& what);
};

/// Shared inputs plus memoised intermediate results.
struct LabContext {
  LabContext(ManifoldExpansion e, EvolveOptions o, double c0, double seed_tau = 0.02,
             std::filesystem::path out = {})
      : expansion(std::move(e)), options(o), semigroup_constant(c0), tau(seed_tau),
        output_dir(std::move(out)) {}

  ManifoldExpansion expansion;
  EvolveOptions options;
  double semigroup_constant = 1.0;
  /// Real seed amplitude for the blow-up orbit.
  double tau = 0.02;
  /// Root for experiment output; empty disables file output.
  std::filesystem::path output_dir;

  std::map<double, double> blowup_times;  // tau -> T
  std::optional<double> strip_height;
};

/// Real blow-up time of seed_initial(tau), memoised in the context.
double real_blowup_time(LabContext& ctx, double tau);

/// Largest imaginary offset below 2 pi / mu for which the time p-path
/// 0 -> i delta -> i delta + 5 T survives, bisected to relative width 1e-3.
double critical_strip_height(LabContext& ctx);

/// 2 C0 max{ max_x v0 / phi, ||u_+||_inf } for the real seed of amplitude tau.
double resurrection_bound(const LabContext& ctx, double tau);

/// Imaginary time needed for the seed to reach the negative real axis of the
/// manifold coordinate, found by a secant search on Im q.
double measured_half_winding(const LabContext& ctx);

/// Same for a small multiple of e_1 near the zero state.
double measured_zero_half_winding(const LabContext& ctx);

ExperimentReport exp_foliation(LabContext& ctx);
ExperimentReport exp_blowup(LabContext& ctx);
ExperimentReport exp_spall_strip(LabContext& ctx, std::optional<double> delta = {});
ExperimentReport exp_monodromy(LabContext& ctx);
ExperimentReport exp_blowup_rate(LabContext& ctx);
ExperimentReport exp_strip_width(LabContext& ctx);

/// Names accepted by run_experiment, in pipeline order.
const std::vector<std::string>& experiment_names();
ExperimentReport run_experiment(LabContext& ctx, const std::string& name);

}  // namespace spall
