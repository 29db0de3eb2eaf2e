#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "boxgap/report.hpp"

namespace {

int run_command(const std::string& config_path, const std::vector<std::string>& sets,
                const std::string& out_override) {
  boxgap::RunConfig cfg;
  try {
    std::string text;
    const std::string* text_ptr = nullptr;
    if (!config_path.empty()) {
      std::ifstream is(config_path, std::ios::binary);
      if (!is) {
        std::cerr << "error: cannot open config file '" << config_path << "'\n";
        return 2;
      }
      std::ostringstream buf;
      buf << is.rdbuf();
      text = buf.str();
      text_ptr = &text;
    }
    cfg = boxgap::load_config(text_ptr, sets);
    if (!out_override.empty()) {
      cfg.out_dir = out_override;
      boxgap::validate_config(cfg);
    }
  } catch (const boxgap::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const boxgap::VerificationReport rep = boxgap::run_suites(cfg);
  boxgap::write_report_files(rep);

  for (const boxgap::CheckRecord& r : rep.records) {
    std::printf("[%-4s] %-14s | %-46s", r.verdict.c_str(), r.suite.c_str(), r.name.c_str());
    if (r.verdict != "info")
      std::printf(" | value %.6g vs %.6g (tol %.3g)", r.value, r.reference, r.tolerance);
    else
      std::printf(" | value %.6g (scale %.6g)", r.value, r.reference);
    if (!r.note.empty()) std::printf(" | %s", r.note.c_str());
    std::printf("\n");
  }
  std::printf("%d passed, %d failed, %d informational; report written to %s\n", rep.passed,
              rep.failed, rep.infos, cfg.out_dir.c_str());
  return rep.failed > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical certification suite for box-localized spectral inequalities"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string out_override;

  CLI::App* run = app.add_subcommand("run", "execute the configured check suites");
  run->add_option("--config", config_path, "JSON configuration file");
  run->add_option("--set", sets, "override one config key, as key=value; repeatable");
  run->add_option("--out", out_override, "output directory (overrides config out_dir)");

  CLI::App* describe =
      app.add_subcommand("describe", "list every registered check with its source anchor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // CLI11 returns 0 for --help; anything else is a usage error
    return code == 0 ? 0 : 2;
  }

  if (describe->parsed()) {
    std::fputs(boxgap::describe_checks().c_str(), stdout);
    return 0;
  }
  return run_command(config_path, sets, out_override);
}
