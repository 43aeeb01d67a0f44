// Command-line front end: simulate | estimate | idset.
// Exit codes: 0 ok, 2 config error, 3 data error, 4 numeric failure.

#include <CLI11.hpp>
#include <cstdio>

#include "ntunet/common.hpp"
#include "ntunet/io.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "override the config seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--threads", args.threads, "worker threads (0 = all cores)");
}

int run(const std::string& name, const CommonArgs& args) {
  using namespace ntunet;
  try {
    const json cfg = load_config_file(args.config_path);
    CommandOverrides ov;
    if (args.seed_set) ov.seed = args.seed;
    ov.threads = args.threads;
    if (name == "simulate")
      cmd_simulate(cfg, args.out_dir, ov);
    else if (name == "estimate")
      cmd_estimate(cfg, args.out_dir, ov);
    else
      cmd_idset(cfg, args.out_dir, ov);
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 4;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dyadic network formation estimation under nontransferable utilities"};
  app.set_version_flag("--version", std::string("ntunet ") + ntunet::version());
  app.require_subcommand(1);

  CommonArgs sim_args, est_args, id_args;
  CLI::App* sim = app.add_subcommand("simulate", "run seeded Monte Carlo replications");
  add_common(sim, sim_args);
  CLI::App* est = app.add_subcommand("estimate", "two-step estimation on node/dyad tables");
  add_common(est, est_args);
  CLI::App* ids = app.add_subcommand("idset", "population identified-set grids");
  add_common(ids, id_args);

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return run("simulate", sim_args);
  if (est->parsed()) return run("estimate", est_args);
  return run("idset", id_args);
}
