#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "takens/commands.hpp"
#include "takens/config.hpp"
#include "takens/errors.hpp"

namespace {

int threads_from_env() {
  const char* env = std::getenv("TAKENS_LAB_THREADS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || n < 1) return 1;
  return static_cast<int>(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-embedding toolkit: conditioning bounds, sweeps, and dimension estimates "
               "for marginally stable linear systems"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  std::uint64_t seed_override = 0;
  int threads = threads_from_env();

  const struct {
    const char* name;
    const char* desc;
  } subs[] = {
      {"check", "evaluate conditioning constants and embedding hypotheses"},
      {"sweep", "Monte Carlo distance-ratio sweep over delay counts (CSV)"},
      {"dimension", "correlation-dimension profiles from a noisy series (CSV)"},
      {"demo", "single-mode conditioning collapse example (CSV)"},
  };
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.desc);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_override, "output path (overrides config; default stdout)");
    sub->add_option("--seed", seed_override, "master seed (overrides config)");
    sub->add_option("--threads", threads,
                    "worker threads (default $TAKENS_LAB_THREADS or 1; never affects output "
                    "bytes)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  takens::RunConfig cfg;
  try {
    cfg = takens::load_config_file(config_path);
  } catch (const takens::io_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const takens::config_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed") > 0) cfg.seed = seed_override;
  if (sub->count("--out") > 0) cfg.out = out_override;

  return takens::run_command(sub->get_name(), cfg, threads, std::cout, std::cerr);
}
