#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "kurisym/curves.hpp"
#include "kurisym/modsym.hpp"

namespace kurisym {

inline constexpr const char* kToolVersion = "0.3.0";

/// "a1,a2,a3,a4,a6" or "@file:line" (1-based line of a table in the same grammar;
/// text after '#' on a line is ignored).
WeierstrassModel parse_curve_spec(std::string_view text);

enum class Command { Analyze, Sweep, Heegner };

struct RunConfig {
  Command command = Command::Analyze;
  std::string curve;
  i64 p = 0;
  i64 lmax = 1000;
  int rmax = 2;
  int m = 1;
  i64 disc = 0;  // D_K for heegner
  unsigned threads = 1;
  double work_budget = 2e10;
  bool diagnostic_parity = false;
  std::optional<std::filesystem::path> cache_dir;  // none disables the cache
  bool timings = true;
};

/// --cache-dir if given, else $KURISYM_CACHE_DIR, else $XDG_CACHE_HOME/kurisym or ~/.cache/kurisym.
std::filesystem::path default_cache_dir();

/// p-normalized eigensymbol together with the space dimensions reported alongside it.
struct CachedSymbol {
  EigenSymbol sym;
  int dimension;
  int cuspidal_dimension;
};

std::string cache_key(const WeierstrassModel& minimal, i64 N, i64 p);
std::string serialize_symbol(const CachedSymbol& s, const WeierstrassModel& minimal, i64 p);
/// Returns none when the text belongs to another key or version.
std::optional<CachedSymbol> deserialize_symbol(const std::string& text, const WeierstrassModel& minimal, i64 p);

/// Builds the symbol, or loads it from dir; a freshly built one is written atomically.
CachedSymbol load_or_build_symbol(const CurveArithmetic& curve, i64 p, const std::optional<std::filesystem::path>& dir,
                                  bool* hit = nullptr);

/// Runs one command and returns the JSON report (sorted keys, two-space indent).
std::string run(const RunConfig& cfg);

/// Process exit status for a library error.
int exit_code(ErrorCode code);

}  // namespace kurisym
