#include "spall/run.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <sstream>

#include "spall/equilibrium.hpp"
#include "spall/experiments.hpp"
#include "spall/io.hpp"
#include "spall/manifold.hpp"

namespace spall {

using Json = nlohmann::ordered_json;

namespace {

constexpr int kSpectrumPairs = 3;
constexpr int kFormat = 1;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || trim(text.substr(used)) != "")
    throw UsageError(key + ": not a number: '" + text + "'");
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_real(key, text);
  if (v != static_cast<int>(v)) throw UsageError(key + ": not an integer: '" + text + "'");
  return static_cast<int>(v);
}

std::string timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::vector<double> to_std(const RealVector& v) { return {v.data(), v.data() + v.size()}; }

Json to_pair(Complex z) { return Json::array({z.real(), z.imag()}); }

RealVector to_eigen(const Json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const RealVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void write_json(const std::filesystem::path& file, const Json& j) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw UsageError("cannot write " + file.string());
  out << j.dump(2) << '\n';
}

std::optional<Json> read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) return std::nullopt;
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

Json options_json(const EvolveOptions& o) {
  return {{"rel_tol", o.rel_tol},
          {"dt_init", o.dt_init},
          {"dt_min", o.dt_min},
          {"blowup_threshold", o.blowup_threshold},
          {"snapshot_stride", o.snapshot_stride}};
}

Json config_json(const RunConfig& c) {
  return {{"n", c.grid_n},
          {"order", c.expansion_order},
          {"tau", {c.tau.real(), c.tau.imag()}},
          {"options", options_json(c.options)},
          {"out", c.output_dir.string()},
          {"experiments", c.experiment_list}};
}

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(what), stage(std::move(stage)) {}
  std::string stage;
};

template <class F>
auto stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& err) {
    throw StageError(name, err.what());
  }
}

/// Memoised upstream computations for one output directory.
class Pipeline {
 public:
  explicit Pipeline(const RunConfig& c) : cfg_(c), grid_(c.grid_n) {}

  const Equilibrium& equilibrium() {
    if (eq_) return *eq_;
    const auto file = cfg_.output_dir / "equilibrium.json";
    if (auto j = read_json(file); j && matches(*j)) {
      eq_ = Equilibrium{StateField::from_real(grid_, to_eigen((*j)["profile"])),
                        (*j)["residual"].get<double>()};
      return *eq_;
    }
    eq_ = stage("equilibrium", [&] { return find_equilibrium(grid_); });
    write_json(file, {{"format", kFormat},
                      {"n", cfg_.grid_n},
                      {"sup", eq_->peak()},
                      {"residual", eq_->residual},
                      {"profile", to_std(eq_->profile.real())}});
    write_field_csv(cfg_.output_dir / "equilibrium.csv", eq_->profile);
    return *eq_;
  }

  const std::vector<EigenPair>& spectrum() {
    if (!pairs_.empty()) return pairs_;
    const Equilibrium& eq = equilibrium();
    const auto file = cfg_.output_dir / "spectrum.json";
    if (auto j = read_json(file); j && matches(*j)) {
      for (const auto& p : (*j)["pairs"])
        pairs_.push_back({p["mu"].get<double>(), StateField::from_real(grid_, to_eigen(p["phi"])),
                          p["residual"].get<double>()});
      return pairs_;
    }
    pairs_ = stage("spectrum", [&] { return leading_eigenpairs(eq, kSpectrumPairs); });
    Json list = Json::array();
    for (const auto& p : pairs_)
      list.push_back({{"mu", p.mu}, {"residual", p.residual}, {"phi", to_std(p.phi.real())}});
    write_json(file, {{"format", kFormat}, {"n", cfg_.grid_n}, {"u_plus_sup", eq.peak()}, {"pairs", list}});
    write_field_csv(cfg_.output_dir / "phi.csv", pairs_.front().phi);
    return pairs_;
  }

  const ManifoldExpansion& manifold() {
    if (exp_) return *exp_;
    const EigenPair pair = spectrum().front();
    const auto file = cfg_.output_dir / "manifold.json";
    if (auto j = read_json(file);
        j && matches(*j) && (*j)["order"].get<int>() == cfg_.expansion_order) {
      std::vector<StateField> psi;
      for (const auto& p : (*j)["psi"]) psi.push_back(StateField::from_real(grid_, to_eigen(p)));
      exp_.emplace(*eq_, pair, std::move(psi), (*j)["coeffs"].get<std::vector<double>>());
      return *exp_;
    }
    exp_.emplace(stage("manifold", [&] { return expand_graph(*eq_, pair, cfg_.expansion_order); }));
    Json psi = Json::array();
    for (int k = 2; k <= exp_->order(); ++k) psi.push_back(to_std(exp_->psi(k).real()));
    write_json(file, {{"format", kFormat},
                      {"n", cfg_.grid_n},
                      {"order", cfg_.expansion_order},
                      {"mu", exp_->mu()},
                      {"r_max", exp_->r_max()},
                      {"coeffs", exp_->reduced_coeffs()},
                      {"winding_radius", std::abs(cfg_.tau)},
                      {"winding_time", to_pair(winding_time(*exp_, std::abs(cfg_.tau)))},
                      {"half_winding_modulus", std::numbers::pi / exp_->mu()},
                      {"psi", psi}});
    for (int k = 2; k <= exp_->order(); ++k) {
      char name[32];
      std::snprintf(name, sizeof name, "psi_%d.csv", k);
      write_field_csv(cfg_.output_dir / name, exp_->psi(k));
    }
    return *exp_;
  }

  const SemigroupCalibration& calibration() {
    if (cal_) return *cal_;
    const auto file = cfg_.output_dir / "calibration.json";
    if (auto j = read_json(file); j && matches(*j)) {
      cal_ = SemigroupCalibration{(*j)["constant"].get<double>(), (*j)["samples"].get<int>(),
                                  (*j)["max_angle"].get<double>(), (*j)["seed"].get<unsigned>()};
      return *cal_;
    }
    cal_ = stage("calibration", [&] { return calibrate_semigroup_constant(grid_); });
    write_json(file, {{"format", kFormat},
                      {"n", cfg_.grid_n},
                      {"constant", cal_->constant},
                      {"samples", cal_->samples},
                      {"max_angle", cal_->max_angle},
                      {"seed", cal_->seed}});
    return *cal_;
  }

 private:
  bool matches(const Json& j) const {
    return j.value("format", 0) == kFormat && j.value("n", 0) == cfg_.grid_n;
  }

  const RunConfig& cfg_;
  SpatialGrid grid_;
  std::optional<Equilibrium> eq_;
  std::vector<EigenPair> pairs_;
  std::optional<ManifoldExpansion> exp_;
  std::optional<SemigroupCalibration> cal_;
};

}  // namespace

void RunConfig::validate() const {
  if (grid_n < 32) throw UsageError("n: grid size must be at least 32");
  if (expansion_order < 2) throw UsageError("order: expansion order must be at least 2");
  if (!(std::abs(tau) > 0.0)) throw UsageError("tau: seed amplitude must be nonzero");
  if (output_dir.empty()) throw UsageError("out: output directory is empty");
  if (last_stage != "equilibrium" && last_stage != "spectrum" && last_stage != "manifold")
    throw UsageError("unknown stage: " + last_stage);
  try {
    options.validate();
  } catch (const std::exception& err) {
    throw UsageError(err.what());
  }
  const auto& names = experiment_names();
  for (const auto& e : experiment_list)
    if (std::find(names.begin(), names.end(), e) == names.end())
      throw UsageError("experiments: unknown experiment '" + e + "'");
  if (!experiment_list.empty() && (tau.imag() != 0.0 || !(tau.real() > 0.0)))
    throw UsageError("tau: experiments need a real positive seed amplitude");
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) return parse_real("tau", text);
  return {parse_real("tau", text.substr(0, comma)), parse_real("tau", text.substr(comma + 1))};
}

RunConfig load_config_file(const std::filesystem::path& file, RunConfig c) {
  std::ifstream in(file);
  if (!in) throw UsageError(file.string() + ": cannot open config file");
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    const std::string where = file.string() + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw UsageError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    try {
      if (key == "n") c.grid_n = parse_int(key, val);
      else if (key == "order") c.expansion_order = parse_int(key, val);
      else if (key == "tau") c.tau = parse_complex(val);
      else if (key == "rel_tol") c.options.rel_tol = parse_real(key, val);
      else if (key == "dt_init") c.options.dt_init = parse_real(key, val);
      else if (key == "dt_min") c.options.dt_min = parse_real(key, val);
      else if (key == "blowup_threshold") c.options.blowup_threshold = parse_real(key, val);
      else if (key == "snapshot_stride") c.options.snapshot_stride = parse_int(key, val);
      else if (key == "out") c.output_dir = val;
      else if (key == "experiments") {
        c.experiment_list.clear();
        std::stringstream ss(val);
        for (std::string item; std::getline(ss, item, ',');)
          if (!trim(item).empty()) c.experiment_list.push_back(trim(item));
      } else {
        throw UsageError("unknown key '" + key + "'");
      }
    } catch (const UsageError& err) {
      throw UsageError(where + err.what());
    }
  }
  return c;
}

int run(const RunConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.output_dir);
  Pipeline pipe(cfg);
  Json record;
  record["config"] = config_json(cfg);
  Json verdicts = Json::object();
  int status = 0;
  try {
    const Equilibrium& eq = pipe.equilibrium();
    record["equilibrium"] = {{"sup", eq.peak()}, {"residual", eq.residual}};
    const bool need_manifold = !cfg.experiment_list.empty() || cfg.last_stage == "manifold";
    if (cfg.last_stage != "equilibrium" || need_manifold) {
      const auto& pairs = pipe.spectrum();
      Json mus = Json::array();
      for (const auto& p : pairs) mus.push_back(p.mu);
      record["spectrum"] = {{"mu", mus}, {"residual", pairs.front().residual}};
    }
    if (need_manifold) {
      const auto& m = pipe.manifold();
      record["manifold"] = {{"order", m.order()}, {"r_max", m.r_max()}, {"coeffs", m.reduced_coeffs()}};
    }
    if (!cfg.experiment_list.empty()) {
      const auto& cal = pipe.calibration();
      record["calibration"] = {{"constant", cal.constant},
                               {"samples", cal.samples},
                               {"max_angle", cal.max_angle},
                               {"seed", cal.seed}};
      LabContext ctx{pipe.manifold(), cfg.options, cal.constant, cfg.tau.real(), cfg.output_dir};
      for (const auto& name : cfg.experiment_list) {
        const ExperimentReport rep = stage(name, [&] { return run_experiment(ctx, name); });
        verdicts[name] = rep.passed() ? "pass" : "fail";
        std::cout << name << ": " << (rep.passed() ? "pass" : "fail") << '\n';
        for (const auto& f : rep.failures) std::cout << "  " << f << '\n';
        if (!rep.passed()) status = 1;
      }
    }
  } catch (const StageError& err) {
    std::cerr << "stage " << err.stage << " failed: " << err.what() << '\n';
    record["failed_stage"] = err.stage;
    status = 2;
  }
  record["verdicts"] = verdicts;
  record["status"] = status;
  record["generated_at"] = timestamp();
  write_json(cfg.output_dir / "run.json", record);
  return status;
}

int run_evolve(const RunConfig& cfg, const std::filesystem::path& path_file) {
  cfg.validate();
  const TimePath path = read_path_file(path_file);
  const auto dir = cfg.output_dir / "evolve";
  std::filesystem::create_directories(dir);
  Pipeline pipe(cfg);
  try {
    const ManifoldExpansion& m = pipe.manifold();
    const StateField u0 = stage("seed", [&] { return seed_initial(cfg.tau, m); });
    const Trajectory tr = stage("evolve", [&] { return evolve(u0, path, cfg.options); });
    write_trajectory_csv(dir / "trajectory.csv", tr);
    Json files = Json::array();
    for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "snapshot_%05zu.csv", i);
      write_field_csv(dir / name, tr.snapshots[i]);
      files.push_back(name);
    }
    Json waypoints = Json::array();
    for (Complex w : path.waypoints()) waypoints.push_back({w.real(), w.imag()});
    Json record{{"config", config_json(cfg)},
                {"path", waypoints},
                {"options", options_json(cfg.options)},
                {"status", tr.completed() ? "completed" : "blowup"},
                {"accepted_steps", tr.accepted_steps},
                {"rejected_steps", tr.rejected_steps},
                {"final_supnorm", tr.supnorms.back()},
                {"blowup_extrapolation", "quadratic fit of 1/supnorm over the last three accepted steps"},
                {"snapshots", files}};
    if (tr.blowup_time)
      record["blowup_time"] = {tr.blowup_time->real(), tr.blowup_time->imag()};
    record["generated_at"] = timestamp();
    write_json(dir / "run.json", record);
    std::cout << "evolve: " << (tr.completed() ? "completed" : "blowup") << '\n';
    return 0;
  } catch (const StageError& err) {
    std::cerr << "stage " << err.stage << " failed: " << err.what() << '\n';
    return 2;
  }
}

}  // namespace spall
