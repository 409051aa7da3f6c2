#pragma once

// Run manifests: INI text with a few top-level keys and one section per
// module. Keys are order-insensitive; unknown keys are rejected so that a typo
// cannot silently fall back to a default.
//
//   kind = solve | particles | estimate-suite | ladder | full-mckean
//   name = <run id>              (default: file stem)
//   seed = <master seed>
//   output = <directory>         (default: $MCKEAN_OUTPUT_ROOT/<run id>)
//
//   [grid]       d, N, L
//   [initial]    center, var                 wrapped Gaussian density
//   [drift]      type = zero | constant | rough, value (comma list), s, seed,
//                amplitude, mollify (0 = none), time_mode, frequency
//   [solver]     F, alpha, beta, rho, T, M, picard_tol, picard_max_iters,
//                density_mode, c (number or "auto")
//   [particles]  N, dt, seed, bandwidth (number or "auto"), snapshots,
//                interacting_N (0 = off), epsilon, method = spectral | direct
//   [estimates]  kinds, gamma, theta, points, times, resolutions, trials,
//                tolerance
//   [ladder]     ns, reference (0 = 4·max ns), ratio_factor

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "mckean/besov/estimates.hpp"
#include "mckean/drift/mollify.hpp"
#include "mckean/fp/picard.hpp"
#include "mckean/particles/simulate.hpp"

namespace mckean::app {

using boost::property_tree::ptree;
using spectral::Grid;
using spectral::SpectralField;

enum class RunKind { Solve, Particles, EstimateSuite, Ladder, FullMcKean };

inline std::string to_string(RunKind k) {
  switch (k) {
  case RunKind::Solve: return "solve";
  case RunKind::Particles: return "particles";
  case RunKind::EstimateSuite: return "estimate-suite";
  case RunKind::Ladder: return "ladder";
  case RunKind::FullMcKean: return "full-mckean";
  }
  return "?";
}

inline RunKind parse_run_kind(const std::string& s) {
  for (auto k : {RunKind::Solve, RunKind::Particles, RunKind::EstimateSuite, RunKind::Ladder, RunKind::FullMcKean})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown experiment kind '" + s + "'");
}

inline std::filesystem::path default_output_root() {
  if (const char* env = std::getenv("MCKEAN_OUTPUT_ROOT"); env && *env) return env;
  return "mckean-runs";
}

enum class DriftType { Zero, Constant, Rough };

struct DriftSection {
  DriftType type = DriftType::Rough;
  std::vector<double> value;
  double s = -0.2;
  std::uint64_t seed = 1;
  double amplitude = 1.0;
  int mollify = 64;
  drift::TimeModulation time{};
};

struct ParticleSection {
  std::size_t n = 100000;
  std::optional<double> dt;          // default: the PDE step
  std::optional<std::uint64_t> seed; // default: master seed
  std::optional<double> bandwidth;   // default: rule of thumb at t = 0
  std::vector<double> snapshots;     // default: {0, T}
  std::size_t interacting_n = 0;
  double epsilon = 0.05;
  particles::InteractionMethod method = particles::InteractionMethod::Spectral;
};

struct LadderSection {
  std::vector<int> ns = {16, 64, 256};
  int reference = 0;
  double ratio_factor = 2.0;
};

struct RunManifest {
  RunKind kind = RunKind::Solve;
  std::string name;
  std::uint64_t seed = 1;
  std::filesystem::path output;
  ptree tree;  // echo of the parsed text

  int dim = 1;
  int points = 256;
  double length = 2.0 * std::numbers::pi;
  double center = std::numbers::pi;
  double var = 0.3;
  DriftSection drift;
  std::string F = "arctan";
  fp::SolverParams solver;
  bool auto_c = true;
  ParticleSection particles;
  std::vector<besov::EstimateKind> estimate_kinds{std::begin(besov::kAllEstimateKinds),
                                                  std::end(besov::kAllEstimateKinds)};
  besov::EstimateParams estimates;
  LadderSection ladder;

  Grid grid() const { return Grid(dim, points, length); }
};

namespace detail {

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(item);
    T v;
    if (!(is >> v)) throw ValidationError("cannot parse list " + key + " = '" + text + "'");
    std::string rest;
    if (is >> rest) throw ValidationError("cannot parse list " + key + " = '" + text + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty list " + key);
  return out;
}

/// Value at `path`, or `fallback` when absent. Present but unparsable values
/// are errors (ptree's defaulted get would silently return the fallback).
template <class T>
T get(const ptree& pt, const std::string& path, T fallback) {
  const auto text = pt.get_optional<std::string>(path);
  if (!text) return fallback;
  if constexpr (std::is_same_v<T, std::string>) {
    return *text;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (*text == "true" || *text == "1") return true;
    if (*text == "false" || *text == "0") return false;
    throw ValidationError("cannot parse '" + *text + "' for " + path + " as a boolean");
  } else {
    std::istringstream is(*text);
    T v{};
    std::string rest;
    if (!(is >> v) || (is >> rest)) throw ValidationError("cannot parse '" + *text + "' for " + path);
    if constexpr (std::is_unsigned_v<T>)
      if (text->find('-') != std::string::npos) throw ValidationError("negative value '" + *text + "' for " + path);
    return v;
  }
}

inline void require_known_keys(const ptree& pt) {
  static const std::map<std::string, std::set<std::string>> allowed = {
      {"", {"kind", "name", "seed", "output"}},
      {"grid", {"d", "N", "L"}},
      {"initial", {"center", "var"}},
      {"drift", {"type", "value", "s", "seed", "amplitude", "mollify", "time_mode", "frequency"}},
      {"solver",
       {"F", "alpha", "beta", "rho", "T", "M", "picard_tol", "picard_max_iters", "density_mode", "c"}},
      {"particles", {"N", "dt", "seed", "bandwidth", "snapshots", "interacting_N", "epsilon", "method"}},
      {"estimates", {"kinds", "gamma", "theta", "points", "times", "resolutions", "trials", "tolerance"}},
      {"ladder", {"ns", "reference", "ratio_factor"}},
  };
  for (const auto& [key, child] : pt) {
    if (child.empty()) {
      if (!allowed.at("").contains(key)) throw ValidationError("unknown top-level key '" + key + "'");
      continue;
    }
    auto it = allowed.find(key);
    if (it == allowed.end() || key.empty()) throw ValidationError("unknown section [" + key + "]");
    for (const auto& [sub, leaf] : child)
      if (!it->second.contains(sub)) throw ValidationError("unknown key '" + sub + "' in [" + key + "]");
  }
}

/// Runs `check`, rethrowing any module precondition failure as a validation
/// error prefixed with the section it came from.
template <class Check>
void in_section(const std::string& section, Check&& check) {
  try {
    check();
  } catch (const ValidationError& e) {
    throw ValidationError("[" + section + "] " + e.what());
  } catch (const boost::property_tree::ptree_error& e) {
    throw ValidationError("[" + section + "] " + e.what());
  } catch (const std::logic_error& e) {  // DomainError, UsageError
    throw ValidationError("[" + section + "] " + e.what());
  } catch (const ResolutionError& e) {
    throw ValidationError("[" + section + "] " + e.what());
  }
}

} // namespace detail

/// Parses and fully validates a manifest; nothing is computed afterwards
/// that these checks could have rejected.
inline RunManifest parse_manifest(std::istream& is, const std::string& fallback_name = "run") {
  RunManifest m;
  try {
    boost::property_tree::read_ini(is, m.tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  const ptree& pt = m.tree;
  detail::require_known_keys(pt);

  detail::in_section("top level", [&] {
    const auto kind = pt.get_optional<std::string>("kind");
    if (!kind) throw ValidationError("missing key 'kind'");
    m.kind = parse_run_kind(*kind);
    m.name = detail::get<std::string>(pt, "name", fallback_name);
    if (m.name.empty() || m.name.find('/') != std::string::npos || m.name == "." || m.name == "..")
      throw ValidationError("run name must be a plain directory name");
    m.seed = detail::get<std::uint64_t>(pt, "seed", m.seed);
    const auto out = detail::get<std::string>(pt, "output", "");
    m.output = out.empty() ? default_output_root() / m.name : std::filesystem::path(out);
  });

  detail::in_section("grid", [&] {
    m.dim = detail::get<int>(pt, "grid.d", m.dim);
    m.points = detail::get<int>(pt, "grid.N", m.points);
    m.length = detail::get<double>(pt, "grid.L", m.length);
    (void)m.grid();
  });

  detail::in_section("initial", [&] {
    m.center = detail::get<double>(pt, "initial.center", m.center);
    m.var = detail::get<double>(pt, "initial.var", m.var);
    if (!(m.var > 0.0)) throw ValidationError("var must be > 0");
  });

  detail::in_section("drift", [&] {
    const auto type = detail::get<std::string>(pt, "drift.type", "rough");
    if (type == "zero") m.drift.type = DriftType::Zero;
    else if (type == "constant") m.drift.type = DriftType::Constant;
    else if (type == "rough") m.drift.type = DriftType::Rough;
    else throw ValidationError("type must be zero, constant or rough, got '" + type + "'");
    if (auto v = pt.get_optional<std::string>("drift.value")) m.drift.value = detail::parse_list<double>(*v, "value");
    if (m.drift.type == DriftType::Constant && static_cast<int>(m.drift.value.size()) != m.dim)
      throw ValidationError("constant drift needs one value per axis");
    m.drift.s = detail::get<double>(pt, "drift.s", m.drift.s);
    m.drift.seed = detail::get<std::uint64_t>(pt, "drift.seed", m.seed);
    m.drift.amplitude = detail::get<double>(pt, "drift.amplitude", m.drift.amplitude);
    m.drift.mollify = detail::get<int>(pt, "drift.mollify", m.drift.mollify);
    if (m.drift.mollify < 0) throw ValidationError("mollify must be >= 0");
    const auto mode = detail::get<std::string>(pt, "drift.time_mode", "static");
    if (mode == "modulated") m.drift.time = drift::TimeModulation::modulated(detail::get<double>(pt, "drift.frequency", 1.0));
    else if (mode != "static") throw ValidationError("time_mode must be static or modulated");
    if (m.drift.type == DriftType::Rough && !(m.drift.s > -0.5 && m.drift.s < 0.0))
      throw ValidationError("drift regularity s must lie in (-1/2, 0)");
  });

  detail::in_section("solver", [&] {
    m.F = detail::get<std::string>(pt, "solver.F", m.F);
    (void)fp::Nonlinearity::parse(m.F);
    auto& s = m.solver;
    s.alpha = detail::get<double>(pt, "solver.alpha", s.alpha);
    s.beta = detail::get<double>(pt, "solver.beta", s.beta);
    s.rho = detail::get<double>(pt, "solver.rho", s.rho);
    const double T = detail::get<double>(pt, "solver.T", 0.25);
    const int M = detail::get<int>(pt, "solver.M", 200);
    if (!(T > 0.0) || M < 1) throw ValidationError("need T > 0 and M >= 1");
    s.time_grid = spectral::TimeGrid(T, M);
    s.picard_tol = detail::get<double>(pt, "solver.picard_tol", s.picard_tol);
    s.picard_max_iters = detail::get<int>(pt, "solver.picard_max_iters", s.picard_max_iters);
    s.density_mode = detail::get<bool>(pt, "solver.density_mode", true);
    const auto c = detail::get<std::string>(pt, "solver.c", "auto");
    m.auto_c = c == "auto";
    if (!m.auto_c) s.c = detail::parse_list<double>(c, "c").at(0);
    s.validate();
  });

  detail::in_section("particles", [&] {
    auto& p = m.particles;
    p.n = detail::get<std::size_t>(pt, "particles.N", p.n);
    if (p.n < 1) throw ValidationError("N must be >= 1");
    if (pt.get_optional<std::string>("particles.dt")) p.dt = detail::get<double>(pt, "particles.dt", 0.0);
    if (pt.get_optional<std::string>("particles.seed")) p.seed = detail::get<std::uint64_t>(pt, "particles.seed", 0);
    const auto bw = detail::get<std::string>(pt, "particles.bandwidth", "auto");
    if (bw != "auto") p.bandwidth = detail::parse_list<double>(bw, "bandwidth").at(0);
    if (auto v = pt.get_optional<std::string>("particles.snapshots"))
      p.snapshots = detail::parse_list<double>(*v, "snapshots");
    p.interacting_n = detail::get<std::size_t>(pt, "particles.interacting_N", p.interacting_n);
    p.epsilon = detail::get<double>(pt, "particles.epsilon", p.epsilon);
    const auto method = detail::get<std::string>(pt, "particles.method", "spectral");
    if (method == "direct") p.method = particles::InteractionMethod::Direct;
    else if (method != "spectral") throw ValidationError("method must be spectral or direct");

    const Grid g = m.grid();
    const double h = m.solver.time_grid.step(), T = m.solver.time_grid.horizon();
    if (p.dt) {
      const double r = h / *p.dt;
      if (!(*p.dt > 0.0) || std::abs(r - std::round(r)) > 1e-9 * std::max(1.0, r) || std::round(r) < 1.0)
        throw ValidationError("dt must divide the PDE step " + std::to_string(h));
    }
    if (p.bandwidth && !(*p.bandwidth >= 2.0 * g.spacing() * (1 - 1e-12)))
      throw ValidationError("bandwidth below two grid spacings");
    for (double t : p.snapshots) {
      const double k = t / h;
      if (t < 0.0 || t > T * (1 + 1e-12) || std::abs(k - std::round(k)) > 1e-9 * std::max(1.0, k))
        throw ValidationError("snapshot times must be PDE nodes in [0, T]");
    }
    if (p.interacting_n > 0) {
      if (!(p.epsilon > 0.0)) throw ValidationError("interaction width ε must be > 0");
      if (particles::gaussian_cutoff(p.epsilon, g.length()) > g.points() / 2 - 1)
        throw ValidationError("interaction kernel p_ε is not resolved on the grid");
    }
  });

  detail::in_section("estimates", [&] {
    auto& e = m.estimates;
    if (auto v = pt.get_optional<std::string>("estimates.kinds")) {
      m.estimate_kinds.clear();
      for (const auto& k : detail::parse_list<std::string>(*v, "kinds")) m.estimate_kinds.push_back(besov::parse_estimate_kind(k));
    }
    e.gamma = detail::get<double>(pt, "estimates.gamma", e.gamma);
    e.theta = detail::get<double>(pt, "estimates.theta", e.theta);
    e.alpha = m.solver.alpha;
    e.beta = m.solver.beta;
    e.dim = m.dim;
    e.length = m.length;
    e.points = detail::get<int>(pt, "estimates.points", e.points);
    if (auto v = pt.get_optional<std::string>("estimates.times")) e.times = detail::parse_list<double>(*v, "times");
    if (auto v = pt.get_optional<std::string>("estimates.resolutions"))
      e.resolutions = detail::parse_list<int>(*v, "resolutions");
    e.trials = detail::get<int>(pt, "estimates.trials", e.trials);
    e.tolerance = detail::get<double>(pt, "estimates.tolerance", e.tolerance);
    e.seed = m.seed;
    if (m.kind == RunKind::EstimateSuite)
      for (auto k : m.estimate_kinds) besov::detail::validate(k, e);
  });

  detail::in_section("ladder", [&] {
    auto& l = m.ladder;
    if (auto v = pt.get_optional<std::string>("ladder.ns")) l.ns = detail::parse_list<int>(*v, "ns");
    l.reference = detail::get<int>(pt, "ladder.reference", l.reference);
    l.ratio_factor = detail::get<double>(pt, "ladder.ratio_factor", l.ratio_factor);
    if (l.ns.size() < 2) throw ValidationError("ns needs at least two rungs");
    for (int n : l.ns)
      if (n < 1) throw ValidationError("ladder indices must be >= 1");
    if (!(l.ratio_factor >= 1.0)) throw ValidationError("ratio_factor must be >= 1");
  });
  return m;
}

inline RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open manifest " + path.string());
  return parse_manifest(is, path.stem().string());
}

/// Wrapped Gaussian density of variance var centred at `center` on every axis.
inline SpectralField gaussian_density(const Grid& g, double center, double var) {
  return SpectralField::sample(g, 1, [&](std::span<const double> x, int) {
    double v = 1.0;
    for (double xa : x) v *= particles::wrapped_gaussian_1d(xa - center, var, g.length());
    return v;
  });
}

inline SpectralField initial_density(const RunManifest& m) { return gaussian_density(m.grid(), m.center, m.var); }

/// The drift the manifest describes, mollified when requested.
inline drift::Drift build_drift(const RunManifest& m) {
  const Grid g = m.grid();
  drift::Drift b = drift::zero_drift(g);
  switch (m.drift.type) {
  case DriftType::Zero: break;
  case DriftType::Constant: b = drift::constant_drift(g, m.drift.value); break;
  case DriftType::Rough: {
    drift::SynthesisOptions opt;
    opt.amplitude = m.drift.amplitude;
    b = drift::synthesize(g, m.drift.s, m.drift.seed, m.drift.time, opt);
    break;
  }
  }
  if (m.drift.mollify > 0 && m.drift.type == DriftType::Rough) return drift::mollify(b, m.drift.mollify).smoothed;
  return b;
}

} // namespace mckean::app
