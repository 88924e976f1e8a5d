#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "metaeval/cli.hpp"
#include "metaeval/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Effect-size meta-analysis across evaluation tasks"};
  app.set_version_flag("--version",
                       "metaeval " + std::string(metaeval::kVersion));

  metaeval::cli::Options opts;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Pool per-task effects into a forest plot and report");
  analyze->add_option("--config", opts.config_path, "Manifest JSON file")
      ->required();
  analyze->add_option("--effect-type", opts.effect_type,
                      "Override the manifest effect family (MD, SMD, CORR)");
  analyze->add_option("--alpha", opts.alpha,
                      "Override the manifest significance level");
  analyze->add_option("--out-svg", opts.out_svg, "Forest plot output path")
      ->required();
  analyze->add_option("--out-md", opts.out_md, "Markdown report output path")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version leave through here with exit code 0; real parse
    // problems are collapsed onto the usage exit code.
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (analyze->parsed()) {
    return metaeval::cli::run(opts, std::cout, std::cerr);
  }
  std::cerr << app.help();
  return 1;
}
