#include <CLI11.hpp>
#include <iostream>

#include "pmelab/error.hpp"
#include "pmelab/run.hpp"

using namespace pmelab;

namespace {

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for gradient estimates of the weighted porous medium equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string file, out, manifest, format = "json", report_dir;
  std::uint64_t seed = 0;
  int jobs = 1;
  bool force = false;

  auto* validate = app.add_subcommand("validate", "Parse and range-check a scenario without computing");
  validate->add_option("file", file, "Scenario file")->required();

  auto* run = app.add_subcommand("run", "Run a scenario and write report.json and manifest.json");
  run->add_option("file", file, "Scenario file")->required();
  run->add_option("--out", out, "Output directory");
  auto* seed_opt = run->add_option("--seed", seed, "Seed override");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Export a finished run");
  report->add_option("manifest", manifest, "manifest.json of a run")->required();
  report->add_option("--format", format, "json, csv or plotdata")->check(CLI::IsMember({"json", "csv", "plotdata"}));
  report->add_option("--out", report_dir, "Output directory (default: next to the manifest)");

  auto* catalog = app.add_subcommand("list-catalog", "Print the known tags");

  auto* golden = app.add_subcommand("golden-update", "Record calibrated C* values in the scenario's golden file");
  golden->add_option("file", file, "Scenario file")->required();
  golden->add_flag("--force", force, "Overwrite an existing golden file");
  golden->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (*validate)
    return guarded([&] {
      const Scenario sc = load_scenario(file);
      std::cout << sc.name << ": ok (" << sc.check_count() << " checks)\n";
      return 0;
    });
  if (*run)
    return guarded([&] {
      const Scenario sc = load_scenario(file);
      RunOptions opts;
      opts.out = out;
      opts.jobs = jobs;
      if (*seed_opt) opts.seed = seed;
      const RunResult r = run_scenario(sc, opts);
      for (const auto& c : r.report.at("checks"))
        std::cout << (c.at("pass").get<bool>() ? "pass  " : "FAIL  ") << c.at("name").get<std::string>() << "\n";
      const Json& s = r.report.at("summary");
      std::cout << s.at("passed") << "/" << s.at("checks") << " checks passed; output in " << r.out_dir << "\n";
      return r.all_pass ? 0 : 1;
    });
  if (*report)
    return guarded([&] {
      for (const auto& f : write_report(manifest, format, report_dir)) std::cout << f << "\n";
      return 0;
    });
  if (*catalog)
    return guarded([&] {
      std::cout << canonical_dump(catalog_listing());
      return 0;
    });
  if (*golden)
    return guarded([&] {
      const Scenario sc = load_scenario(file);
      const std::string path = update_golden(sc, force, jobs);
      std::cout << "wrote " << path << "\n";
      return 0;
    });
  return 2;
}
