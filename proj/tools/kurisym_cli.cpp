#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kurisym/app.hpp"

using namespace kurisym;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--curve", cfg.curve, "a1,a2,a3,a4,a6 or @file:line")->required();
  sub->add_option("--p", cfg.p, "odd prime")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kurihara modular-symbol quantities and Heegner-side predictions for elliptic curves over Q"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kToolVersion));

  RunConfig cfg;
  std::string cache_dir;
  bool no_cache = false;
  app.add_option("--threads", cfg.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--budget", cfg.work_budget, "refuse sweeps needing more symbol evaluations than this");
  app.add_option("--cache-dir", cache_dir, "eigensymbol cache (default $KURISYM_CACHE_DIR or ~/.cache/kurisym)");
  app.add_flag("--no-cache", no_cache, "do not read or write the cache");
  app.add_flag("--timings,!--no-timings", cfg.timings, "include or omit the timings block");

  auto* analyze = app.add_subcommand("analyze", "curve arithmetic, eigensymbol and the delta_1 cross-check");
  add_common(analyze, cfg);

  auto* sweep = app.add_subcommand("sweep", "delta_n search and verdict");
  add_common(sweep, cfg);
  sweep->add_option("--lmax", cfg.lmax, "largest Kolyvagin prime")->required();
  sweep->add_option("--rmax", cfg.rmax, "largest number of prime factors")->required();
  sweep->add_option("--m", cfg.m, "keep primes with e_l >= m");
  sweep->add_flag("--diagnostic-parity", cfg.diagnostic_parity, "also evaluate the wrong-parity n");

  auto* heeg = app.add_subcommand("heegner", "Heegner hypotheses, primes, unit root and predictions");
  add_common(heeg, cfg);
  heeg->add_option("--disc", cfg.disc, "D_K, with K = Q(sqrt(-D_K))")->required();
  heeg->add_option("--lmax", cfg.lmax, "largest Heegner prime listed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 4;
  }

  if (app.got_subcommand(sweep)) cfg.command = Command::Sweep;
  else if (app.got_subcommand(heeg)) cfg.command = Command::Heegner;
  else cfg.command = Command::Analyze;
  if (!no_cache) cfg.cache_dir = cache_dir.empty() ? default_cache_dir() : std::filesystem::path(cache_dir);

  try {
    std::cout << run(cfg);
    return 0;
  } catch (const Error& e) {
    nlohmann::json err = {{"error", e.what()}, {"code", static_cast<int>(e.code())}};
    std::cerr << err.dump() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}, {"code", 7}}.dump() << "\n";
    return 1;
  }
}
