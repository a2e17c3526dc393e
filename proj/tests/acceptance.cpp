// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <unistd.h>

#include "json.hpp"
#include "kurisym/heegner.hpp"
#include "kurisym/kurihara.hpp"
#include "kurisym/numeric.hpp"
#include "kurisym/pointcount.hpp"
#include "oracles.hpp"

using namespace kurisym;

namespace {

// pinned limits
constexpr double kCurveLayerSeconds = 10.0;
constexpr double kSymbolBuildSeconds = 5.0;
constexpr double kDeltaOneRelTol = 1e-6;
constexpr double kRankOneLValue = 1e-8;
constexpr double kSweepSeconds = 300.0;
constexpr unsigned kWorkers = 8;
constexpr int kHenselPrecision = 20;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && out_.pass) {
      out_.pass = false;
      out_.detail = what;
    }
    ++count_;
  }
  Outcome done(const std::string& summary) {
    if (out_.pass) out_.detail = summary + " (" + std::to_string(count_) + " checks)";
    return out_;
  }

 private:
  Outcome out_;
  long count_ = 0;
};

WeierstrassModel model_of(const std::vector<i64>& a) { return WeierstrassModel::from_ints(a[0], a[1], a[2], a[3], a[4]); }

struct Loaded {
  CurveArithmetic curve;
  std::unique_ptr<ManinSymbolSpace> space;
  std::unique_ptr<EigenSymbol> sym;
};

Loaded load(const oracle::Fixture& f, i64 p) {
  Loaded s{analyze_curve(model_of(f.a), p), nullptr, nullptr};
  s.space = std::make_unique<ManinSymbolSpace>(s.curve.conductor);
  s.sym = std::make_unique<EigenSymbol>(normalize_p_integral(rational_eigensymbol(*s.space, s.curve.minimal), p));
  s.curve.epsilon = atkin_lehner_sign(*s.sym);
  return s;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

mpz_class pow_z(i64 p, int k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

oracle::SymbolOracle symbol_oracle(const EigenSymbol& sym) {
  std::vector<std::pair<i64, i64>> reps;
  for (std::size_t i = 0; i < sym.p1().size(); ++i) reps.push_back(sym.p1().rep(i));
  return oracle::SymbolOracle(sym.level(), reps, sym.values());
}

std::vector<oracle::Fixture> ten_fixtures() {
  std::vector<oracle::Fixture> out;
  for (const auto& f : oracle::fixtures())
    if (out.size() < 10) out.push_back(f);
  return out;
}

Outcome curve_layer() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& f : ten_fixtures()) {
    const CurveArithmetic E = analyze_curve(model_of(f.a), 3);
    c.require(E.conductor == f.conductor, f.label + ": conductor");
    c.require(E.tamagawa_product == f.tamagawa, f.label + ": Tamagawa product");
    for (i64 l : primes_up_to(200)) {
      if (f.conductor % l == 0) continue;
      c.require(frobenius_trace(E.minimal, l) == l + 1 - oracle::brute_count(f.a, l), f.label + ": a_" + std::to_string(l));
    }
  }
  const double secs = since(t0);
  c.require(secs < kCurveLayerSeconds, "runtime " + std::to_string(secs) + " s");
  return c.done("10 curves, a_l for l <= 200, " + std::to_string(secs) + " s");
}

Outcome modular_symbols() {
  Check c;
  std::mt19937_64 rng(2024);
  double worst = 0;
  for (const auto& f : oracle::fixtures()) {
    const auto t0 = std::chrono::steady_clock::now();
    const ManinSymbolSpace S(f.conductor);
    const EigenSymbol sym = rational_eigensymbol(S, model_of(f.a));
    const double secs = since(t0);
    worst = std::max(worst, secs);
    c.require(secs < kSymbolBuildSeconds, f.label + ": build took " + std::to_string(secs) + " s");
    const i64 last = sym.probe_eigenvalues().rbegin()->first;
    for (i64 q : good_primes(f.conductor, 5, last))
      c.require(satisfies_hecke(S, sym, q, q + 1 - oracle::brute_count(f.a, q)), f.label + ": T_" + std::to_string(q));
    std::uniform_int_distribution<i64> dn(1, 10000);
    for (int it = 0; it < 1000; ++it) {
      const i64 n = dn(rng);
      const i64 a = std::uniform_int_distribution<i64>(-3 * n, 3 * n)(rng);
      const mpq_class v = sym.evaluate(a, n);
      c.require(v == sym.evaluate(a + n, n), f.label + ": periodicity");
      c.require(v == sym.evaluate(-a, n), f.label + ": plus symmetry");
    }
  }
  return c.done("5 held-out Hecke primes and 1000 random (a, n) per fixture, slowest build " + std::to_string(worst) + " s");
}

Outcome delta_one() {
  Check c;
  int ok = 0;
  for (const auto& f : oracle::fixtures()) {
    if (f.rank != 0) continue;
    const Loaded s = load(f, 7);
    const DeltaOneCheck d = delta_one_crosscheck(*s.sym, s.curve, kDeltaOneRelTol);
    c.require(!d.skipped && d.ok, f.label + ": cross-check not ok (" + d.note + ")");
    c.require(d.rel_error < kDeltaOneRelTol, f.label + ": relative error " + std::to_string(d.rel_error));
    ok += d.ok && d.rel_error < kDeltaOneRelTol;
  }
  c.require(ok >= 5, "fewer than 5 rank-zero fixtures ok");
  const Loaded s = load(oracle::fixture("37a1"), 5);
  c.require(s.sym->evaluate(0, 1) == 0, "37a1: delta_1 not exactly zero");
  const double L = analytic_data(s.curve).l_value.value;
  c.require(std::fabs(L) < kRankOneLValue, "37a1: |L(E,1)| = " + std::to_string(L));
  return c.done(std::to_string(ok) + " rank-zero fixtures ok, 37a1 |L(E,1)| < 1e-8");
}

i64 parity_prime(i64 N) {
  for (i64 p : {3, 5, 7, 11})
    if (N % p != 0) return p;
  return 13;
}

Outcome parity_vanishing() {
  Check c;
  long searched = 0;
  for (const auto& f : oracle::fixtures()) {
    const i64 p = parity_prime(f.conductor);
    const Loaded s = load(f, p);
    SweepBounds b;
    b.lmax = 1000;
    b.rmax = 2;
    b.diagnostic_parity = true;
    b.threads = kWorkers;
    const SearchReport r = sweep(*s.sym, s.curve, p, b);
    searched += static_cast<long>(r.wrong_parity.size());
    c.require(r.wrong_parity_nonvanishing() == 0,
              f.label + " p=" + std::to_string(p) + ": " + std::to_string(r.wrong_parity_nonvanishing()) + " nonzero");
  }
  c.require(searched > 0, "no wrong-parity n searched");
  return c.done(std::to_string(searched) + " wrong-parity delta_n, all zero");
}

bool is_primitive_root(i64 g, i64 l) {
  for (auto [q, e] : factor(l - 1)) {
    (void)e;
    if (powmod(g, static_cast<u64>((l - 1) / q), l) == 1) return false;
  }
  return true;
}

Outcome well_definedness() {
  Check c;
  std::mt19937_64 rng(5);
  int sampled = 0;
  const std::vector<std::pair<std::string, i64>> cases{{"37a1", 3}, {"11a1", 7}, {"17a1", 5}, {"19a1", 5}, {"67a1", 5}, {"37b1", 7}};
  for (const auto& [label, p] : cases) {
    const Loaded s = load(oracle::fixture(label), p);
    const auto L = enumerate_kolyvagin_primes(s.curve, p, 1, 600);
    std::vector<std::vector<KolyvaginPrime>> sets;
    for (std::size_t i = 0; i < L.size(); ++i) {
      sets.push_back({L[i]});
      for (std::size_t j = i + 1; j < L.size(); ++j) sets.push_back({L[i], L[j]});
    }
    std::shuffle(sets.begin(), sets.end(), rng);
    for (std::size_t k = 0; k < std::min<std::size_t>(6, sets.size()); ++k) {
      const auto& fs = sets[k];
      const DeltaResult base = delta(*s.sym, fs, p);
      std::vector<KolyvaginPrime> alt = fs;
      for (auto& q : alt) {
        i64 g = q.eta + 1;
        while (!is_primitive_root(g, q.l)) ++g;
        q.eta = g;
      }
      const DeltaResult other = delta(*s.sym, alt, p);
      const DeltaResult shifted = delta(*s.sym, alt, p, LiftPolicy::Shifted);
      const std::string tag = label + " n=" + std::to_string(base.n);
      c.require(other.M == base.M && shifted.M == base.M, tag + ": M(n) differs");
      mpz_class u = 1;
      for (std::size_t i = 0; i < fs.size(); ++i) u *= discrete_log_p_part(fs[i].l, alt[i].eta, fs[i].eta, p, *base.e_n);
      const mpz_class pe = pow_z(p, *base.e_n);
      c.require(mpz_class((base.residue * u - other.residue) % pe) == 0, tag + ": residues not unit-equivalent");
      c.require(shifted.residue == other.residue, tag + ": shifted lift changes the residue");
      ++sampled;
    }
  }
  c.require(sampled >= 20, "only " + std::to_string(sampled) + " samples");
  return c.done(std::to_string(sampled) + " sampled (n, curve, p)");
}

Outcome oracle_equivalence() {
  Check c;
  long compared = 0;
  const std::vector<std::pair<std::string, i64>> cases{{"37a1", 3}, {"11a1", 7}, {"37b1", 5}, {"43a1", 3}, {"17a1", 5}};
  for (const auto& [label, p] : cases) {
    const Loaded s = load(oracle::fixture(label), p);
    const auto orc = symbol_oracle(*s.sym);
    SweepBounds b;
    b.lmax = 1000;
    b.rmax = 2;
    b.diagnostic_parity = true;
    b.threads = kWorkers;
    const SearchReport r = sweep(*s.sym, s.curve, p, b);
    std::vector<const DeltaResult*> all;
    for (const auto& d : r.deltas) all.push_back(&d);
    for (const auto& d : r.wrong_parity) all.push_back(&d);
    for (const DeltaResult* d : all) {
      if (d->n > 10000 || d->n == 1) continue;
      std::vector<i64> ls, etas;
      for (const auto& k : d->factors) {
        ls.push_back(k.l);
        etas.push_back(k.eta);
      }
      c.require(d->residue == oracle::delta_oracle(orc, ls, etas, p, *d->e_n), label + ": n=" + std::to_string(d->n));
      ++compared;
    }
    c.require(r.deltas.front().n != 1 || r.deltas.front().exact == orc.value(0, 1), label + ": delta_1");
  }
  c.require(compared > 0, "nothing compared");
  return c.done(std::to_string(compared) + " delta_n with n <= 10^4 equal to the double loop");
}

Outcome witness_smoke() {
  Check c;
  const std::vector<std::pair<std::string, i64>> cases{{"11a1", 7}, {"11a3", 7}, {"14a1", 13}, {"15a1", 11},
                                                       {"17a1", 5}, {"19a1", 5}, {"37b1", 7}, {"67a1", 5}};
  double worst = 0;
  for (const auto& [label, p] : cases) {
    const Loaded s = load(oracle::fixture(label), p);
    const std::string tag = label + " p=" + std::to_string(p);
    // fixture preconditions
    c.require(s.curve.reduction_at_p == ReductionAtP::GoodOrdinary, tag + ": not good ordinary");
    c.require(s.curve.tamagawa_product % p != 0, tag + ": p divides Tam");
    const mpq_class d1 = s.sym->evaluate(0, 1);
    c.require(d1 != 0 && valuation(d1.get_num(), p) == 0, tag + ": v_p(delta_1) != 0");
    SweepBounds b;
    b.lmax = 2000;
    b.rmax = 2;
    b.threads = kWorkers;
    const auto t0 = std::chrono::steady_clock::now();
    const SearchReport r = sweep(*s.sym, s.curve, p, b);
    const double secs = since(t0);
    worst = std::max(worst, secs);
    c.require(r.verdict == Verdict::ConsistentWitness, tag + ": verdict " + to_string(r.verdict));
    c.require(r.M_inf_upper && *r.M_inf_upper == 0, tag + ": M_inf_upper != 0");
    c.require(secs < kSweepSeconds, tag + ": sweep took " + std::to_string(secs) + " s");
  }
  return c.done(std::to_string(cases.size()) + " sweeps at lmax 2000, rmax 2, slowest " + std::to_string(worst) + " s");
}

Outcome heegner_identities() {
  Check c;
  int pairs = 0;
  for (const auto& f : oracle::fixtures()) {
    for (i64 p : {3, 5, 7, 11, 13}) {
      if (f.conductor % p == 0) continue;
      const i64 a = p + 1 - oracle::brute_count(f.a, p);
      if (a % p == 0) continue;
      const std::string tag = f.label + " p=" + std::to_string(p);
      const UnitRoot u = unit_root(a, p, kHenselPrecision);
      const mpz_class M = pow_z(p, kHenselPrecision);
      const mpz_class lhs = (u.alpha - 1) * (u.beta - 1) - (1 - a + p);
      c.require(mpz_divisible_p(lhs.get_mpz_t(), M.get_mpz_t()) != 0, tag + ": (alpha-1)(beta-1)");
      c.require((p + 1) * (p + 1) - a * a == oracle::brute_count_quadratic(f.a, p), tag + ": #E(F_p^2)");
      const CurveArithmetic E = analyze_curve(model_of(f.a), p);
      c.require(count_points_quadratic(E.minimal, p) == oracle::brute_count_quadratic(f.a, p), tag + ": library F_p^2 count");
      const Stabilization st = stabilization_detail(E, p, false);
      c.require(st.from_unit_root == st.from_point_count, tag + ": inert routes disagree");
      for (int k = 1; k < kHenselPrecision; ++k) {
        const mpz_class Mk = pow_z(p, k);
        c.require(mpz_class(u.alpha % Mk) == unit_root(a, p, k).alpha, tag + ": Hensel digits change at k=" + std::to_string(k));
      }
      ++pairs;
    }
  }
  c.require(pairs >= 20, "only " + std::to_string(pairs) + " ordinary pairs");
  return c.done(std::to_string(pairs) + " ordinary (E, p) pairs, precision p^20");
}

struct ShaRow {
  std::string label;
  std::vector<i64> a;
  int rank;
  i64 tamagawa;
  i64 sha;
};

std::vector<ShaRow> read_sha_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<ShaRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 9) throw std::runtime_error("bad row: " + line);
    ShaRow r{cells[0], {}, std::stoi(cells[6]), std::stoll(cells[7]), std::stoll(cells[8])};
    for (int i = 1; i <= 5; ++i) r.a.push_back(std::stoll(cells[static_cast<std::size_t>(i)]));
    rows.push_back(r);
  }
  return rows;
}

Outcome structure_formula() {
  Check c;
  int used = 0;
  for (const ShaRow& row : read_sha_table(KURISYM_SHA_TABLE)) {
    for (i64 p : {3, 5, 7}) {
      if (row.sha % p == 0 || row.tamagawa % p == 0) continue;
      const CurveArithmetic probe = analyze_curve(model_of(row.a), p);
      if (probe.conductor % p == 0) continue;
      oracle::Fixture f{row.label, row.a, probe.conductor, row.tamagawa, row.rank, 0};
      const Loaded s = load(f, p);
      c.require(s.curve.tamagawa_product == row.tamagawa, row.label + ": Tamagawa product differs from table");
      SweepBounds b;
      b.lmax = row.rank == 0 ? 1000 : 400;
      b.rmax = row.rank == 0 ? 2 : 3;
      b.threads = kWorkers;
      const SearchReport r = sweep(*s.sym, s.curve, p, b);
      const auto pred = sha_prediction(r);
      c.require(pred.has_value() && *pred == 0,
                row.label + " p=" + std::to_string(p) + ": sha_prediction " + (pred ? std::to_string(*pred) : "undefined"));
      ++used;
    }
  }
  c.require(used > 0, "no usable table rows");
  return c.done(std::to_string(used) + " (curve, p) with trivial Sha[p] and p not dividing Tam");
}

std::string run_cli(const std::string& args) {
  std::string out;
  FILE* pipe = ::popen((std::string(KURISYM_CLI) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = ::pclose(pipe);
  if (status != 0) throw std::runtime_error("cli exited with status " + std::to_string(status) + " for: " + args);
  return out;
}

std::string without_timings(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  j.erase("timings");
  return j.dump(2);
}

Outcome determinism() {
  Check c;
  const auto dir = std::filesystem::temp_directory_path() / ("kurisym_accept_" + std::to_string(::getpid()));
  const std::vector<std::string> invocations{
      "analyze --curve 0,-1,1,-10,-20 --p 7",
      "sweep --curve 0,0,1,-1,0 --p 3 --lmax 600 --rmax 2 --diagnostic-parity --threads 4",
      "sweep --curve 0,1,1,-23,-50 --p 5 --lmax 800 --rmax 2 --threads 8",
      "heegner --curve 0,-1,1,-10,-20 --p 5 --disc 7 --lmax 500",
  };
  for (const auto& inv : invocations) {
    std::filesystem::remove_all(dir);
    const std::string cache = " --cache-dir " + dir.string();
    const std::string cold = run_cli(inv + cache), warm = run_cli(inv + cache), warm2 = run_cli(inv + cache);
    const std::string bare = run_cli(inv + " --no-cache --no-timings");
    c.require(without_timings(cold) == without_timings(warm), inv + ": cold and warm differ");
    c.require(without_timings(warm) == without_timings(warm2), inv + ": warm reruns differ");
    c.require(without_timings(cold) == without_timings(bare), inv + ": cache changes the report");
    c.require(run_cli(inv + " --no-cache --no-timings") == bare, inv + ": reruns differ byte-wise");
  }
  std::filesystem::remove_all(dir);
  return c.done(std::to_string(invocations.size()) + " invocations, cold/warm/no-cache byte-identical");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 curve layer", curve_layer},
      {"2 modular symbols", modular_symbols},
      {"3 delta_1 cross-check", delta_one},
      {"4 parity vanishing", parity_vanishing},
      {"5 well-definedness", well_definedness},
      {"6 oracle equivalence", oracle_equivalence},
      {"7 consistent-witness smoke test", witness_smoke},
      {"8 Heegner identities", heegner_identities},
      {"9 structure formula", structure_formula},
      {"10 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.1fs", since(t0));
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << "  [" << secs << "]  " << o.detail << std::endl;
    failed += !o.pass;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed")) << std::endl;
  return failed ? 1 : 0;
}
