#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adlab/config.hpp"
#include "adlab/runner.hpp"

#include "../tests/acceptance.hpp"

namespace {

using adlab::RunConfig;

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  bool quiet = false;
};

void add_common(CLI::App* sub, CommonArgs& args, bool config_required) {
  auto* cfg = sub->add_option("--config", args.config_path, "JSON run configuration");
  if (config_required) cfg->required();
  sub->add_option("--out", args.out_dir, "output directory (overrides config)");
  sub->add_flag("--quiet", args.quiet, "suppress progress output on stdout");
}

int run_command(const CommonArgs& args,
                void (*body)(const RunConfig&, const std::filesystem::path&, bool)) {
  return adlab::guarded([&] {
    const RunConfig cfg = adlab::load_run_config(args.config_path);
    const std::string dir = !args.out_dir.empty() ? args.out_dir : cfg.output;
    body(cfg, adlab::rundetail::prepare_out_dir(dir), args.quiet);
  });
}

int run_repro(const CommonArgs& args) {
  return adlab::guarded([&] {
    const std::filesystem::path out = adlab::rundetail::prepare_out_dir(args.out_dir);
    const std::filesystem::path scratch = out / "scratch";
    std::filesystem::create_directories(scratch);

    std::string report;
    adlab::json criteria = adlab::json::array();
    int failed = 0;
    for (const auto& r : adlab::acceptance::run_all(scratch)) {
      char line[160];
      std::snprintf(line, sizeof(line), "[%s] %2d %-32s %s\n",
                    r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
      report += line;
      adlab::json jr;
      jr["id"] = r.id;
      jr["name"] = r.name;
      jr["pass"] = r.pass;
      jr["detail"] = r.detail;
      criteria.push_back(jr);
      if (!r.pass) ++failed;
    }
    report += failed == 0 ? "all 12 criteria passed\n"
                          : std::to_string(failed) + " criteria failed\n";
    adlab::write_text_file(out / "repro_report.txt", report);

    adlab::json j;
    j["command"] = "repro";
    j["criteria"] = criteria;
    j["all_pass"] = failed == 0;
    adlab::rundetail::write_json(out / "repro_report.json", j);
    adlab::rundetail::write_meta(out, "repro");

    if (!args.quiet) std::cout << report;
    adlab::require_num(failed == 0,
                       std::to_string(failed) + " acceptance criteria failed");
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for adiabatic evolution and geometric phases"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("adiabatic-lab ") + adlab::tool_version);

  struct Entry {
    const char* name;
    const char* help;
    void (*body)(const RunConfig&, const std::filesystem::path&, bool);
  };
  const Entry entries[] = {
      {"berry", "closed-loop geometric phase of one level", adlab::cmd_berry},
      {"evolve", "integrate one trajectory and dump it", adlab::cmd_evolve},
      {"sweep", "transition probabilities across a T ladder", adlab::cmd_sweep},
      {"ms-check", "overlap identity versus its naive expectation", adlab::cmd_ms_check},
      {"probe", "state and derivative gaps against the adiabatic limit",
       adlab::cmd_probe},
      {"ab", "line-integral phase factors along loops", adlab::cmd_ab},
      {"monopole", "two-patch flux and charge quantization", adlab::cmd_monopole},
  };

  CommonArgs args[8];
  int exit_code = 0;
  std::size_t i = 0;
  for (const Entry& e : entries) {
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    CommonArgs& a = args[i++];
    add_common(sub, a, true);
    sub->callback([&a, &e, &exit_code] { exit_code = run_command(a, e.body); });
  }

  CLI::App* repro = app.add_subcommand(
      "repro", "run the full acceptance suite and write a report");
  CommonArgs& ra = args[7];
  add_common(repro, ra, false);
  repro->callback([&ra, &exit_code] { exit_code = run_repro(ra); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return exit_code;
}
