// mckean_cli: run manifests, verify the acceptance criteria, export run
// artifacts. Exit codes: 0 pass, 1 criterion failure, 2 validation error,
// 3 internal error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mckean/app/criteria.hpp"
#include "mckean/app/manifest.hpp"
#include "mckean/app/runner.hpp"
#include "mckean/besov/littlewood_paley.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mckean::app;

int code(ExitCode c) { return static_cast<int>(c); }

void print(const Report& rep) {
  for (const auto& m : rep.messages) std::cout << m << '\n';
  for (const auto& c : rep.checks) std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
  if (!rep.error_class.empty()) std::cerr << rep.error_class << " error: " << rep.error << '\n';
  std::cout << "status " << rep.status() << " (report: " << (rep.output / "report.json").string() << ")\n";
}

int run_command(const fs::path& manifest) {
  RunManifest m;
  try {
    m = load_manifest(manifest);
  } catch (const mckean::ValidationError& e) {
    auto rep = validation_failure(manifest.stem().string(), default_output_root() / manifest.stem(), e.what());
    rep.write();
    print(rep);
    return code(ExitCode::ValidationError);
  }
  const auto rep = run(m);
  print(rep);
  return code(rep.exit_code());
}

int verify_command(const std::string& level_name, const std::string& golden, const std::string& write_golden,
                   const std::string& fault) {
  const Level level = parse_level(level_name);
  if (!fault.empty()) {
    if (fault != "partition") throw mckean::ValidationError("unknown fault '" + fault + "' (known: partition)");
    mckean::besov::partition_fault() = true;
  }
  bool all = true;
  const auto results = run_criteria(level, [&](const CriterionResult& r) {
    std::cout << r.line() << std::endl;
    all = all && r.pass;
  });

  Report rep;
  rep.run_id = "verify-" + to_string(level);
  rep.kind = "verify";
  rep.output = default_output_root() / rep.run_id;
  if (!fault.empty()) rep.recorded["injected_fault"] = fault;
  for (const auto& r : results) {
    rep.check("criterion " + std::to_string(r.id) + " " + r.title, r.pass,
              r.note + (r.error_class.empty() ? "" : " [" + r.error_class + "]"));
    for (const auto& mt : r.metrics) rep.recorded["criterion_" + std::to_string(r.id)][mt.name] = mt.value;
  }
  if (!golden.empty()) {
    std::ifstream is(golden);
    if (!is) throw mckean::ValidationError("cannot open golden summary " + golden);
    const auto mismatches = compare_golden(results, is);
    std::string detail = std::to_string(mismatches.size()) + " mismatches against " + golden;
    for (const auto& mm : mismatches)
      detail += "; " + std::to_string(mm.criterion) + "/" + mm.metric + " expected " + std::to_string(mm.expected) +
                " got " + std::to_string(mm.actual);
    rep.check("golden summary", mismatches.empty(), detail);
    std::cout << (mismatches.empty() ? "PASS" : "FAIL") << " golden summary: " << detail << '\n';
  }
  rep.write();
  {
    std::ofstream os(rep.output / "summary.csv");
    write_summary_csv(os, results);
  }
  if (!write_golden.empty()) {
    std::ofstream os(write_golden);
    write_summary_csv(os, results);
  }
  std::cout << "status " << rep.status() << " (report: " << (rep.output / "report.json").string() << ")\n";
  return code(rep.exit_code());
}

int export_command(const std::string& run_id, const std::string& format, const std::string& root) {
  const fs::path dir = (root.empty() ? default_output_root() : fs::path(root)) / run_id;
  for (const auto& p : export_run(dir, format)) std::cout << p.string() << '\n';
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"McKean-Vlasov Fokker-Planck solver, particle simulator and verification suite"};
  app.require_subcommand(1);

  fs::path manifest;
  auto* run_cmd = app.add_subcommand("run", "Execute a run manifest");
  run_cmd->add_option("manifest", manifest, "Manifest file (INI)")->required()->check(CLI::ExistingFile);

  std::string level = "fast", golden, write_golden, fault;
  auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance criteria");
  verify_cmd->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  verify_cmd->add_option("--golden", golden, "Compare against a committed summary CSV");
  verify_cmd->add_option("--write-golden", write_golden, "Write the summary CSV to this path");
  verify_cmd->add_option("--inject-fault", fault, "Test hook: corrupt a component (partition)");

  std::string run_id, format = "csv", root;
  auto* export_cmd = app.add_subcommand("export", "Convert a finished run's fields");
  export_cmd->add_option("run-id", run_id, "Run directory name under the output root")->required();
  export_cmd->add_option("--format", format, "csv or container")->check(CLI::IsMember({"csv", "container"}));
  export_cmd->add_option("--root", root, "Output root (default $MCKEAN_OUTPUT_ROOT or ./mckean-runs)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : code(ExitCode::ValidationError);
  }

  try {
    if (*run_cmd) return run_command(manifest);
    if (*verify_cmd) return verify_command(level, golden, write_golden, fault);
    if (*export_cmd) return export_command(run_id, format, root);
  } catch (const mckean::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return code(ExitCode::ValidationError);
  } catch (const mckean::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return code(ExitCode::ValidationError);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return code(ExitCode::InternalError);
  }
  return code(ExitCode::InternalError);
}
