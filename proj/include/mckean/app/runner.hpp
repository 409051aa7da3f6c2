#pragma once

// Manifest → pipeline → report. Every file a run produces lives under the
// manifest's output directory; report.json is written even when the pipeline
// throws, carrying the error classification.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mckean/app/criteria.hpp"
#include "mckean/app/manifest.hpp"
#include "mckean/besov/estimates.hpp"
#include "mckean/fp/stability.hpp"
#include "mckean/particles/kde.hpp"
#include "mckean/particles/simulate.hpp"
#include "mckean/spectral/io.hpp"

namespace mckean::app {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

enum class ExitCode : int { Pass = 0, CriterionFailure = 1, ValidationError = 2, InternalError = 3 };

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Report {
  std::string run_id;
  std::string kind;
  std::string manifest;             // echo of the parsed manifest
  fs::path output;
  std::vector<Check> checks;
  std::vector<std::string> messages;
  std::vector<std::string> artifacts;  // relative to output
  json recorded = json::object();      // seeds, fitted constants, headline numbers
  std::string error_class;             // empty when the pipeline completed
  std::string error;

  void check(std::string name, bool pass, std::string detail) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }

  bool passed() const {
    if (!error_class.empty()) return false;
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  ExitCode exit_code() const {
    if (error_class == "validation") return ExitCode::ValidationError;
    if (error_class == "internal") return ExitCode::InternalError;
    return passed() ? ExitCode::Pass : ExitCode::CriterionFailure;
  }

  std::string status() const {
    if (!error_class.empty()) return "error";
    return passed() ? "pass" : "fail";
  }

  json to_json() const {
    json j;
    j["run_id"] = run_id;
    j["kind"] = kind;
    j["status"] = status();
    if (!error_class.empty()) j["error"] = {{"class", error_class}, {"message", error}};
    j["messages"] = messages;
    j["checks"] = json::array();
    for (const auto& c : checks) j["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["recorded"] = recorded;
    j["artifacts"] = artifacts;
    j["manifest"] = manifest;
    return j;
  }

  /// report.json and checks.csv under the output directory.
  void write() const {
    fs::create_directories(output);
    std::ofstream(output / "report.json") << std::setw(2) << to_json() << '\n';
    std::ofstream csv(output / "checks.csv");
    csv << "check,pass,detail\n";
    for (const auto& c : checks) csv << c.name << ',' << (c.pass ? 1 : 0) << ",\"" << c.detail << "\"\n";
  }
};

namespace detail {

inline std::string echo(const ptree& pt) {
  std::ostringstream os;
  boost::property_tree::write_ini(os, pt);
  return os.str();
}

class Pipeline {
public:
  Pipeline(const RunManifest& m, Report& rep) : m_(m), rep_(rep), grid_(m.grid()) {}

  void run() {
    switch (m_.kind) {
    case RunKind::Solve: solve(); break;
    case RunKind::Particles: particles(false); break;
    case RunKind::EstimateSuite: estimates(); break;
    case RunKind::Ladder: ladder(); break;
    case RunKind::FullMcKean: particles(true); break;
    }
  }

private:
  std::ofstream artifact(const std::string& rel) {
    const fs::path p = m_.output / rel;
    fs::create_directories(p.parent_path());
    rep_.artifacts.push_back(rel);
    return std::ofstream(p);
  }

  void field_artifact(const std::string& rel, const SpectralField& f, double t) {
    fs::create_directories((m_.output / rel).parent_path());
    spectral::save_snapshot(m_.output / rel, f, t);
    rep_.artifacts.push_back(rel);
  }

  fp::SolverParams solver_params() {
    auto p = m_.solver;
    if (m_.auto_c) {
      double fitted = 0.0;
      p.c = fp::fitted_working_constant(p.alpha, p.beta, m_.seed, &fitted);
      rep_.recorded["fitted_schauder_constant"] = fitted;
    }
    rep_.recorded["working_constant_c"] = p.c;
    return p;
  }

  fp::SolverResult solve_with(const drift::Drift& b, const SpectralField& v0, const std::string& tag) {
    const auto F = fp::Nonlinearity::parse(m_.F);
    const auto p = solver_params();
    auto r = fp::solve_picard(v0, b, F, p);
    const auto cp = fp::pick_contraction_params(r.b_norm, p.alpha, p.beta, r.v0_norm, p.c);
    rep_.messages.push_back(tag + "converged in " + std::to_string(r.iterations) +
                            (r.iterations == 1 ? " iteration" : " iterations"));
    auto& rec = rep_.recorded[tag.empty() ? "solver" : tag.substr(0, tag.size() - 2)];
    rec = {{"iterations", r.iterations},
           {"b_norm", r.b_norm},
           {"v0_norm", r.v0_norm},
           {"sup_norm", r.sup_norm},
           {"apriori_K", r.apriori_K},
           {"log2_rho0", cp.log2_rho0},
           {"M_star", cp.M_star},
           {"theta", cp.theta},
           {"contraction_hat", r.contraction_hat},
           {"fixed_point_residual", r.fixed_point_residual}};

    double mass = 0.0;
    for (const auto& f : r.v.v) mass = std::max(mass, std::abs(f.mean() - v0.mean()));
    rep_.check(tag + "mass", mass <= 1e-12, "max |mean(v(t_k)) − mean(v0)| = " + fmt(mass));
    rep_.check(tag + "apriori", r.sup_norm <= r.apriori_K,
               "sup ‖v(t)‖_α = " + fmt(r.sup_norm) + ", K = " + fmt(r.apriori_K));
    rep_.check(tag + "fixed_point", r.fixed_point_residual <= 2 * p.picard_tol,
               "‖J(w) − w‖ = " + fmt(r.fixed_point_residual));
    return r;
  }

  void write_solution(const fp::SolverResult& r, const std::string& prefix) {
    auto traj = artifact(prefix + "trajectory.csv");
    traj << "time,mass,sup,besov_alpha\n" << std::setprecision(12);
    for (std::size_t k = 0; k < r.v.size(); ++k)
      traj << r.v.time.at(k) << ',' << spectral::integral(r.v[k]) << ',' << r.v[k].sup_norm() << ','
           << besov::besov(r.v[k], r.params.alpha) << '\n';
    auto pic = artifact(prefix + "picard.csv");
    pic << "iteration,d_rho\n" << std::setprecision(12);
    for (std::size_t i = 0; i < r.iterates.size(); ++i) pic << i + 1 << ',' << r.iterates[i] << '\n';
    field_artifact("fields/" + prefix + "v_initial.mckf", r.v[0], 0.0);
    field_artifact("fields/" + prefix + "v_final.mckf", r.v.v.back(), r.v.time.horizon());
  }

  void record_drift() {
    rep_.recorded["drift"] = {{"type", m_.tree.get<std::string>("drift.type", "rough")},
                              {"seed", m_.drift.seed},
                              {"s", m_.drift.s},
                              {"mollify", m_.drift.mollify}};
  }

  void solve() {
    record_drift();
    const auto r = solve_with(build_drift(m_), initial_density(m_), "");
    write_solution(r, "");
  }

  void particles(bool full) {
    record_drift();
    const auto v0 = initial_density(m_);
    const auto b = build_drift(m_);
    const auto F = fp::Nonlinearity::parse(m_.F);
    const auto r = solve_with(b, v0, "");
    write_solution(r, "");
    const auto& P = m_.particles;
    const double h = r.v.time.step(), T = r.v.time.horizon();
    const double dt = P.dt.value_or(h);
    const std::uint64_t seed = P.seed.value_or(m_.seed);
    rep_.recorded["particles"] = {{"N", P.n}, {"dt", dt}, {"seed", seed}};

    const auto frozen = particles::simulate_frozen(r, b, F, P.n, dt, seed, P.snapshots);
    const double bw = P.bandwidth.value_or(particles::default_bandwidth(frozen.snapshots.front(), grid_));
    rep_.recorded["particles"]["bandwidth"] = bw;
    const auto law = particles::law_vs_pde(frozen, r, bw);
    {
      auto os = artifact("law_vs_pde.csv");
      particles::write_law_csv(os, law);
    }
    {
      auto os = artifact("positions_final.csv");
      particles::write_positions_csv(os, frozen.snapshots.back());
    }
    const auto kde = particles::kde_density(frozen.snapshots.back(), grid_, bw);
    field_artifact("fields/kde_final.mckf", kde.field, frozen.snapshots.back().t);
    const double mass = spectral::integral(kde.field);
    rep_.check("kde_mass", std::abs(mass - 1.0) <= 1e-10, "∫ KDE = " + fmt(mass));
    rep_.recorded["particles"]["l1_final"] = law.back().l1;
    rep_.messages.push_back("L¹(frozen KDE, smoothed PDE) at t = " + fmt(law.back().t) + ": " + fmt(law.back().l1));

    double threshold = 0.0;
    if (full) {
      // b ≡ 0 calibration at the same (N, bandwidth, seed).
      const auto zero = drift::zero_drift(grid_);
      const auto rc = solve_with(zero, v0, "calibration: ");
      const auto cal = particles::simulate_frozen(rc, zero, F, P.n, dt, seed, P.snapshots);
      const double cal_l1 = particles::law_vs_pde(cal, rc, bw).back().l1;
      threshold = 2.0 * cal_l1;
      rep_.recorded["particles"]["calibration_l1"] = cal_l1;
      rep_.check("mckean_consistency", law.back().l1 <= threshold,
                 "L¹ " + fmt(law.back().l1) + ", threshold 2 × b ≡ 0 calibration = " + fmt(threshold));
    }

    if (P.interacting_n > 0) {
      const auto inter = particles::simulate_interacting(v0, b, F, P.interacting_n, P.epsilon, dt, T, seed, P.method,
                                                         P.snapshots);
      const auto frozen_n = particles::simulate_frozen(r, b, F, P.interacting_n, dt, seed + 1, P.snapshots);
      const double bwi = particles::default_bandwidth(frozen_n.snapshots.front(), grid_);
      auto os = artifact("interacting_vs_frozen.csv");
      os << "time,l1,N,epsilon,bandwidth,seed\n" << std::setprecision(12);
      double last = 0.0;
      for (std::size_t i = 0; i < inter.snapshots.size(); ++i) {
        last = particles::l1_distance(particles::kde_density(inter.snapshots[i], grid_, bwi).field,
                                      particles::kde_density(frozen_n.snapshots[i], grid_, bwi).field);
        os << inter.snapshots[i].t << ',' << last << ',' << P.interacting_n << ',' << P.epsilon << ',' << bwi << ','
           << seed << '\n';
      }
      rep_.recorded["interacting"] = {{"N", P.interacting_n}, {"epsilon", P.epsilon}, {"bandwidth", bwi}, {"l1_final", last}};
      rep_.messages.push_back("L¹(interacting KDE, frozen KDE) at T: " + fmt(last));
      if (full)
        rep_.check("interacting_vs_frozen", last <= 2.0 * threshold,
                   "L¹ " + fmt(last) + ", threshold " + fmt(2.0 * threshold));
    }
  }

  void estimates() {
    for (auto kind : m_.estimate_kinds) {
      const auto er = besov::run_estimate(kind, m_.estimates);
      auto os = artifact("estimates_" + besov::to_string(kind) + ".csv");
      er.write_csv(os);
      rep_.check("estimate_" + besov::to_string(kind), er.pass,
                 "fitted constant " + fmt(er.fitted_constant) + ", variation " + fmt(er.variation));
      rep_.recorded["estimates"][besov::to_string(kind)] = {{"fitted_constant", er.fitted_constant},
                                                             {"variation", er.variation}};
    }
    rep_.messages.push_back(std::to_string(m_.estimate_kinds.size()) + " estimate reports");
  }

  void ladder() {
    record_drift();
    const Grid g = grid_;
    drift::Drift raw = drift::zero_drift(g);
    if (m_.drift.type == DriftType::Rough) {
      drift::SynthesisOptions opt;
      opt.amplitude = m_.drift.amplitude;
      raw = drift::synthesize(g, m_.drift.s, m_.drift.seed, m_.drift.time, opt);
    } else {
      raw = build_drift(m_);
    }
    const auto p = solver_params();
    const auto lad = fp::stability_ladder(initial_density(m_), raw, fp::Nonlinearity::parse(m_.F), p, m_.ladder.ns,
                                          m_.ladder.reference, m_.ladder.ratio_factor);
    auto os = artifact("ladder.csv");
    os << "n,distance,drift_distance,ratio,reference_n\n" << std::setprecision(12);
    for (const auto& r : lad.rungs)
      os << r.n << ',' << r.distance << ',' << r.drift_distance << ',' << r.ratio << ',' << lad.reference_n << '\n';
    rep_.check("ladder", lad.pass,
               std::string(lad.decreasing ? "decreasing" : "not decreasing") + ", ratio spread " + fmt(lad.ratio_bound));
  }

  static std::string fmt(double v) { return app::detail::fmt(v); }

  const RunManifest& m_;
  Report& rep_;
  Grid grid_;
};

} // namespace detail

/// Executes a validated manifest. Module errors are caught and classified;
/// the report is always written.
inline Report run(const RunManifest& m) {
  Report rep;
  rep.run_id = m.name;
  rep.kind = to_string(m.kind);
  rep.manifest = detail::echo(m.tree);
  rep.output = m.output;
  rep.recorded["seed"] = m.seed;
  try {
    fs::create_directories(m.output);
    detail::Pipeline(m, rep).run();
  } catch (const std::exception& e) {
    rep.error_class = classify(e);
    rep.error = e.what();
  }
  rep.write();
  return rep;
}

/// Report for a manifest that failed validation; written to `output` when
/// one can be determined.
inline Report validation_failure(const std::string& run_id, const fs::path& output, const std::string& what) {
  Report rep;
  rep.run_id = run_id;
  rep.output = output;
  rep.error_class = "validation";
  rep.error = what;
  return rep;
}

/// Converts the field containers of a finished run into `format` ("csv" or
/// "container") under <run>/export/. Returns the written paths.
inline std::vector<fs::path> export_run(const fs::path& run_dir, const std::string& format) {
  if (format != "csv" && format != "container") throw ValidationError("export format must be csv or container");
  if (!fs::exists(run_dir / "report.json")) throw UsageError("no report.json in " + run_dir.string());
  const fs::path out = run_dir / "export";
  fs::create_directories(out);
  std::vector<fs::path> written;
  std::vector<fs::path> fields;
  if (fs::exists(run_dir / "fields"))
    for (const auto& e : fs::directory_iterator(run_dir / "fields"))
      if (e.path().extension() == ".mckf") fields.push_back(e.path());
  std::sort(fields.begin(), fields.end());
  for (const auto& f : fields) {
    const auto snap = spectral::load_snapshot(f);
    if (format == "csv") {
      const fs::path p = out / (f.stem().string() + ".csv");
      std::ofstream os(p);
      os << "# time " << std::setprecision(17) << snap.time << '\n';
      spectral::write_csv(os, snap.field);
      written.push_back(p);
    } else {
      const fs::path p = out / f.filename();
      spectral::save_snapshot(p, snap.field, snap.time);
      written.push_back(p);
    }
  }
  fs::copy_file(run_dir / "checks.csv", out / "checks.csv", fs::copy_options::overwrite_existing);
  written.push_back(out / "checks.csv");
  return written;
}

} // namespace mckean::app
