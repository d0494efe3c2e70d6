// Command line driver: pbigraph <experiment> --config <path.toml> [--out DIR] [--seeds 1,2,3] [--threads N]
//
// Exit codes: 0 all checks passed, 1 a check failed, 2 invalid config or usage.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11/CLI11.hpp>

#include "pbigraph_c.h"

int main(int argc, char** argv) {
  CLI::App app{"p-biharmonic graph experiments"};
  std::string experiment, config, out;
  std::vector<std::uint64_t> seeds;
  unsigned threads = 0;

  app.add_option("experiment", experiment, "identities | consistency | graph-consistency | convergence | denoise | poincare")
      ->required()
      ->check(CLI::IsMember({"identities", "consistency", "graph-consistency", "convergence", "denoise", "poincare"}));
  app.add_option("--config", config, "TOML experiment config")->required();
  app.add_option("--out", out, "output directory (overrides output_dir)");
  app.add_option("--seeds", seeds, "comma separated seeds (overrides seeds)")->delimiter(',');
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  int exit_code = 1;
  const pbg_status st = pbg_experiment_run(experiment.c_str(), config.c_str(), out.empty() ? nullptr : out.c_str(),
                                           seeds.empty() ? nullptr : seeds.data(), seeds.size(), threads, &exit_code);
  if (st == PBG_ERR_CONFIG) {
    std::fprintf(stderr, "pbigraph: invalid config: %s\n", pbg_last_error());
    return 2;
  }
  if (st != PBG_OK) {
    std::fprintf(stderr, "pbigraph: %s: %s\n", pbg_status_string(st), pbg_last_error());
    return 1;
  }
  std::fputs(pbg_experiment_summary(), stdout);
  return exit_code;
}
