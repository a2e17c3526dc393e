#include "kurisym/app.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "kurisym/heegner.hpp"
#include "kurisym/kurihara.hpp"
#include "kurisym/numeric.hpp"

namespace kurisym {

using json = nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

json prime_json(const KolyvaginPrime& k) { return {{"l", k.l}, {"a_l", k.a_l}, {"e", k.e}, {"eta", k.eta}}; }

json delta_json(const DeltaResult& d) {
  json f = json::array();
  for (const auto& k : d.factors) f.push_back(k.l);
  json j = {{"n", d.n}, {"factors", f}, {"residue", d.residue.get_str()}};
  j["e_n"] = d.e_n ? json(*d.e_n) : json(nullptr);
  j["M"] = d.M ? json(*d.M) : json(nullptr);
  if (d.n == 1) j["exact"] = d.exact.get_str();
  return j;
}

json opt_json(const std::optional<int>& x) { return x ? json(*x) : json(nullptr); }

json curve_json(const CurveArithmetic& c) {
  json local = json::array();
  for (const auto& ld : c.local)
    local.push_back({{"l", ld.prime},
                     {"f", ld.conductor_exponent},
                     {"kodaira", ld.kodaira_symbol()},
                     {"c", ld.tamagawa},
                     {"reduction", to_string(ld.reduction)},
                     {"disc_valuation", ld.disc_valuation}});
  json j = {{"model", c.minimal.to_string()},
            {"N", c.conductor},
            {"tam_E", c.tamagawa_product},
            {"local", local},
            {"reduction_at_p", to_string(c.reduction_at_p)},
            {"flags",
             {{"sur", to_string(c.flags.sur)},
              {"manin_ok", to_string(c.flags.manin_ok)},
              {"cm_suspect", c.flags.cm_suspect}}}};
  if (c.local_torsion) {
    j["t"] = c.local_torsion->t;
    j["t_lower_bound_only"] = c.local_torsion->lower_bound_only;
  } else {
    j["t"] = nullptr;
  }
  return j;
}

json symbol_json(const CachedSymbol& s, int epsilon) {
  json probes = json::object();
  for (auto [q, a] : s.sym.probe_eigenvalues()) probes[std::to_string(q)] = a;
  return {{"dim", s.dimension},
          {"cuspidal_dim", s.cuspidal_dimension},
          {"probes", probes},
          {"epsilon", epsilon},
          {"scale", s.sym.scale().get_str()},
          {"delta_1", s.sym.evaluate(0, 1).get_str()}};
}

json numeric_json(const EigenSymbol& sym, const CurveArithmetic& curve) {
  const AnalyticData d = analytic_data(curve);
  const DeltaOneCheck c = delta_one_crosscheck(sym, curve);
  json dj = {{"exact", c.exact.get_str()},
             {"numeric", c.numeric},
             {"ok", c.ok},
             {"skipped", c.skipped},
             {"rel_error", c.rel_error},
             {"note", c.note}};
  dj["ratio"] = c.ratio ? json(c.ratio->get_str()) : json(nullptr);
  return {{"omega_plus", d.omega_plus.value},
          {"omega_error", d.omega_plus.error},
          {"l_value", d.l_value.value},
          {"l_error", d.l_value.error},
          {"l_terms", d.l_value.terms},
          {"epsilon_fit", d.l_value.epsilon},
          {"delta_one", dj}};
}

json sweep_json(const SearchReport& r) {
  json primes = json::array(), deltas = json::array(), wrong = json::array(), table = json::object();
  for (const auto& k : r.primes) primes.push_back(prime_json(k));
  for (const auto& d : r.deltas) deltas.push_back(delta_json(d));
  for (const auto& d : r.wrong_parity) wrong.push_back(delta_json(d));
  for (const auto& [rr, M] : r.M_r) table[std::to_string(rr)] = opt_json(M);
  json j = {{"primes", primes},
            {"deltas", deltas},
            {"M_table", table},
            {"M_inf_upper", opt_json(r.M_inf_upper)},
            {"rho", opt_json(r.rho)},
            {"verdict", to_string(r.verdict)},
            {"sha_prediction", opt_json(sha_prediction(r))},
            {"ord_p_tam", r.ord_p_tam},
            {"work", r.work},
            {"caveats", r.caveats}};
  if (r.bounds.diagnostic_parity) {
    j["wrong_parity"] = wrong;
    j["wrong_parity_nonvanishing"] = r.wrong_parity_nonvanishing();
  }
  return j;
}

json heegner_json(const HeegnerReport& h) {
  json primes = json::array();
  for (const auto& k : h.primes) primes.push_back({{"l", k.l}, {"a_l", k.a_l}, {"e", k.e}});
  const auto& f = h.setup.flags;
  return {{"D_K", h.setup.D_K},
          {"flags",
           {{"heeg_ok", f.heeg_ok},
            {"disc_ok", f.disc_ok},
            {"p_unramified", f.p_unramified},
            {"good_ordinary", f.good_ordinary},
            {"p_split_in_K", f.p_split_in_K}}},
          {"primes", primes},
          {"alpha_p", h.alpha.alpha.get_str()},
          {"beta_p", h.alpha.beta.get_str()},
          {"precision", h.alpha.k},
          {"predictions", {{"heeg", h.prediction.M_inf_heeg}, {"lambda", h.prediction.M_inf_lambda}}},
          {"caveats", h.prediction.caveats}};
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Analyze: return "analyze";
    case Command::Sweep: return "sweep";
    case Command::Heegner: return "heegner";
  }
  return "?";
}

}  // namespace

WeierstrassModel parse_curve_spec(std::string_view text) {
  const std::string t = trim(text);
  if (t.empty() || t[0] != '@') return parse_weierstrass(t);
  const auto colon = t.rfind(':');
  if (colon == std::string::npos || colon < 2)
    throw Error(ErrorCode::kMalformedInput, "curve table reference must be @file:line");
  const std::string path = t.substr(1, colon - 1), num = t.substr(colon + 1);
  std::size_t line_no = 0;
  try {
    std::size_t used = 0;
    line_no = std::stoul(num, &used);
    if (used != num.size() || line_no == 0) throw std::invalid_argument(num);
  } catch (const std::exception&) {
    throw Error(ErrorCode::kMalformedInput, "bad line number in curve reference: " + num);
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kFileIo, "cannot open curve table " + path);
  std::string line;
  for (std::size_t i = 0; i < line_no; ++i)
    if (!std::getline(in, line)) throw Error(ErrorCode::kFileIo, path + " has fewer than " + num + " lines");
  const auto hash = line.find('#');
  return parse_weierstrass(trim(std::string_view(line).substr(0, hash)));
}

std::filesystem::path default_cache_dir() {
  if (const char* e = std::getenv("KURISYM_CACHE_DIR"); e && *e) return e;
  if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return std::filesystem::path(x) / "kurisym";
  if (const char* h = std::getenv("HOME"); h && *h) return std::filesystem::path(h) / ".cache" / "kurisym";
  return std::filesystem::temp_directory_path() / "kurisym";
}

std::string cache_key(const WeierstrassModel& minimal, i64 N, i64 p) {
  std::string k = std::string("v") + kToolVersion + "_N" + std::to_string(N) + "_p" + std::to_string(p);
  for (const auto& a : minimal.coefficients()) k += "_" + a.get_str();
  return k;
}

std::string serialize_symbol(const CachedSymbol& s, const WeierstrassModel& minimal, i64 p) {
  json values = json::array();
  for (const auto& v : s.sym.values()) values.push_back(v.get_str());
  json probes = json::array();
  for (auto [q, a] : s.sym.probe_eigenvalues()) probes.push_back({q, a});
  const json j = {{"key", cache_key(minimal, s.sym.level(), p)},
                  {"tool_version", kToolVersion},
                  {"N", s.sym.level()},
                  {"values", values},
                  {"probes", probes},
                  {"scale", s.sym.scale().get_str()},
                  {"dimension", s.dimension},
                  {"cuspidal_dimension", s.cuspidal_dimension}};
  return j.dump();
}

std::optional<CachedSymbol> deserialize_symbol(const std::string& text, const WeierstrassModel& minimal, i64 p) {
  const json j = json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  try {
    const i64 N = j.at("N").get<i64>();
    if (j.at("key").get<std::string>() != cache_key(minimal, N, p)) return std::nullopt;
    auto p1 = std::make_shared<const P1List>(N);
    std::vector<mpq_class> values;
    for (const auto& v : j.at("values")) values.emplace_back(v.get<std::string>());
    for (auto& v : values) v.canonicalize();
    if (values.size() != p1->size()) return std::nullopt;
    std::map<i64, i64> probes;
    for (const auto& pr : j.at("probes")) probes[pr.at(0).get<i64>()] = pr.at(1).get<i64>();
    mpq_class scale(j.at("scale").get<std::string>());
    scale.canonicalize();
    return CachedSymbol{EigenSymbol(p1, std::move(values), std::move(probes), scale), j.at("dimension").get<int>(),
                        j.at("cuspidal_dimension").get<int>()};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

CachedSymbol load_or_build_symbol(const CurveArithmetic& curve, i64 p, const std::optional<std::filesystem::path>& dir,
                                  bool* hit) {
  if (hit) *hit = false;
  std::filesystem::path file;
  if (dir) {
    file = *dir / (cache_key(curve.minimal, curve.conductor, p) + ".json");
    std::ifstream in(file);
    if (in) {
      std::stringstream ss;
      ss << in.rdbuf();
      if (auto c = deserialize_symbol(ss.str(), curve.minimal, p)) {
        if (hit) *hit = true;
        return std::move(*c);
      }
    }
  }
  if (curve.conductor > kMaxLevel)
    throw Error(ErrorCode::kUnsupported, "conductor " + std::to_string(curve.conductor) + " exceeds the level cap " +
                                             std::to_string(kMaxLevel));
  const ManinSymbolSpace space(curve.conductor);
  CachedSymbol out{normalize_p_integral(rational_eigensymbol(space, curve.minimal), p), space.dimension(),
                   space.cuspidal_dimension()};
  if (dir) {
    std::error_code ec;
    std::filesystem::create_directories(*dir, ec);
    const auto tmp = file.string() + ".tmp" + std::to_string(::getpid());
    {
      std::ofstream os(tmp, std::ios::trunc);
      os << serialize_symbol(out, curve.minimal, p);
      if (!os) ec = std::make_error_code(std::errc::io_error);
    }
    if (!ec) std::filesystem::rename(tmp, file, ec);
    if (ec) std::filesystem::remove(tmp, ec);  // a failed cache write never fails the run
  }
  return out;
}

std::string run(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.p < 3 || !is_prime(static_cast<u64>(cfg.p))) throw Error(ErrorCode::kMalformedInput, "p must be an odd prime");
  const WeierstrassModel input = parse_curve_spec(cfg.curve);
  CurveArithmetic curve = analyze_curve(input, cfg.p);
  const double t_curve = seconds_since(t0);

  json report;
  report["tool_version"] = kToolVersion;
  json config = {{"command", command_name(cfg.command)}, {"curve", input.to_string()}, {"p", cfg.p}};
  if (cfg.command == Command::Sweep) {
    config["lmax"] = cfg.lmax;
    config["rmax"] = cfg.rmax;
    config["m"] = cfg.m;
    config["work_budget"] = cfg.work_budget;
    config["diagnostic_parity"] = cfg.diagnostic_parity;
  }
  if (cfg.command == Command::Heegner) {
    config["disc"] = cfg.disc;
    config["lmax"] = cfg.lmax;
  }
  report["config"] = config;

  json timings;
  timings["curve_s"] = t_curve;

  const auto t1 = std::chrono::steady_clock::now();
  bool hit = false;
  const CachedSymbol cs = load_or_build_symbol(curve, cfg.p, cfg.cache_dir, &hit);
  curve.epsilon = atkin_lehner_sign(cs.sym);
  timings["symbol_s"] = seconds_since(t1);
  timings["cache"] = cfg.cache_dir ? (hit ? "hit" : "miss") : "off";

  report["curve"] = curve_json(curve);
  report["symbol"] = symbol_json(cs, *curve.epsilon);
  report["caveats"] = hypothesis_caveats(curve, cfg.p);

  const auto t2 = std::chrono::steady_clock::now();
  switch (cfg.command) {
    case Command::Analyze:
      report["numeric"] = numeric_json(cs.sym, curve);
      break;
    case Command::Sweep: {
      SweepBounds b;
      b.lmax = cfg.lmax;
      b.rmax = cfg.rmax;
      b.m = cfg.m;
      b.diagnostic_parity = cfg.diagnostic_parity;
      b.threads = std::max(1u, cfg.threads);
      b.work_budget = cfg.work_budget;
      report["sweep"] = sweep_json(sweep(cs.sym, curve, cfg.p, b));
      break;
    }
    case Command::Heegner:
      report["heegner"] = heegner_json(heegner_report(curve, cfg.disc, cfg.p, cfg.lmax));
      break;
  }
  timings["command_s"] = seconds_since(t2);
  timings["total_s"] = seconds_since(t0);
  if (cfg.timings) report["timings"] = timings;
  return report.dump(2) + "\n";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSingularCurve:
    case ErrorCode::kUnsupported:
    case ErrorCode::kEigenspace:
      return 2;
    case ErrorCode::kBudgetExceeded: return 3;
    case ErrorCode::kMalformedInput: return 4;
    case ErrorCode::kFileIo: return 5;
    case ErrorCode::kInternal: return 1;
  }
  return 1;
}

}  // namespace kurisym
