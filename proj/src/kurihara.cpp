#include "kurisym/kurihara.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <set>
#include <thread>
#include <unordered_map>

namespace kurisym {

namespace {

// Pohlig-Hellman restricted to the p-Sylow subgroup of F_l^*.
class SylowLog {
 public:
  SylowLog(i64 l, i64 eta, i64 p) : l_(l), p_(p), v_(valuation(l - 1, p)) {
    pv_ = ipow(p, static_cast<unsigned>(v_));
    cof_ = (l - 1) / pv_;
    const i64 gamma = powmod(mod(eta, l), static_cast<u64>(cof_), l);
    gamma_inv_ = invmod(gamma, l);
    if (v_ > 0) {
      const i64 top = powmod(gamma, static_cast<u64>(pv_ / p), l);
      i64 g = 1;
      for (i64 d = 0; d < p; ++d) {
        digits_.emplace(g, d);
        g = mulmod(g, top, l);
      }
      if (digits_.size() != static_cast<std::size_t>(p))
        throw Error(ErrorCode::kMalformedInput, "eta is not a generator of the p-part of F_l^*");
    }
  }

  int v() const { return v_; }

  i64 log(i64 a) const {
    a = mod(a, l_);
    if (a == 0) throw Error(ErrorCode::kMalformedInput, "discrete log of 0");
    if (v_ == 0) return 0;
    const i64 h = powmod(a, static_cast<u64>(cof_), l_);
    i64 x = 0, pi = 1;
    i64 pexp = pv_ / p_;  // p^{v-1-i}
    for (int i = 0; i < v_; ++i) {
      const i64 t = powmod(mulmod(h, powmod(gamma_inv_, static_cast<u64>(x), l_), l_), static_cast<u64>(pexp), l_);
      auto it = digits_.find(t);
      if (it == digits_.end()) throw Error(ErrorCode::kMalformedInput, "eta is not a generator of the p-part of F_l^*");
      x += it->second * pi;
      pi *= p_;
      pexp /= p_;
    }
    return x;
  }

 private:
  i64 l_, p_;
  int v_;
  i64 pv_ = 1, cof_ = 1, gamma_inv_ = 1;
  std::unordered_map<i64, i64> digits_;
};

i64 p_power(i64 p, int e) { return ipow(p, static_cast<unsigned>(e)); }

// Sum of D * [a/n] * L(a) with L the product of lifted logs, as an exact integer
// kept bounded by reductions modulo p^{e_n} (which do not change the final residue).
mpz_class weighted_sum(const EigenSymbol& sym, i64 n, const std::vector<KolyvaginPrime>& factors,
                       const std::vector<const LogTable*>& tables, i64 pe, LiftPolicy lift) {
  const std::size_t r = factors.size();
  std::vector<i64> x(r, 0);
  const bool small = n <= static_cast<i64>(UINT32_MAX);
  auto value = [&](i64 a) {
    return small ? sym.evaluate_reduced(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(n)) : sym.evaluate_numerator(a, n);
  };

  if (lift == LiftPolicy::Canonical) {
    // a and n - a carry the same symbol and the same logs (log(-1) is divisible by p^v),
    // so sum over a < n/2 and double. Terms are bucketed by L mod p^{e_n}.
    std::vector<std::vector<std::uint32_t>> red(r);
    for (std::size_t i = 0; i < r; ++i) {
      red[i].resize(static_cast<std::size_t>(factors[i].l));
      for (i64 k = 1; k < factors[i].l; ++k) red[i][static_cast<std::size_t>(k)] = static_cast<std::uint32_t>((*tables[i])[k] % pe);
    }
    std::vector<i128> bucket(static_cast<std::size_t>(pe), 0);
    for (i64 a = 1; 2 * a < n; ++a) {
      bool coprime = true;
      u64 L = 1;
      for (std::size_t i = 0; i < r; ++i) {
        if (++x[i] == factors[i].l) x[i] = 0;
        if (x[i] == 0) coprime = false;
        L = L * red[i][static_cast<std::size_t>(x[i])] % static_cast<u64>(pe);
      }
      if (!coprime || L == 0) continue;
      bucket[L] += value(a);
    }
    mpz_class total = 0;
    for (i64 L = 1; L < pe; ++L) {
      if (bucket[static_cast<std::size_t>(L)] == 0) continue;
      i128 b = bucket[static_cast<std::size_t>(L)] % pe;
      total += mpz_class(static_cast<long>(b)) * static_cast<long>(L);
    }
    return 2 * total;
  }

  i128 acc = 0;
  const i128 guard = static_cast<i128>(1) << 100;
  for (i64 a = 1; a < n; ++a) {
    i128 L = 1;
    bool coprime = true;
    for (std::size_t i = 0; i < r; ++i) {
      if (++x[i] == factors[i].l) x[i] = 0;
      if (x[i] == 0) {
        coprime = false;
        continue;
      }
      const i64 k = (a + static_cast<i64>(i)) % 3;
      L *= (*tables[i])[x[i]] + k * (factors[i].l - 1);
    }
    if (!coprime) continue;
    acc += L * value(a);
    if (acc > guard || acc < -guard) acc %= pe;
  }
  acc %= pe;
  return mpz_class(static_cast<long>(acc));
}

void require_normalized(const EigenSymbol& sym, i64 p) {
  const mpz_class pz = static_cast<long>(p);
  if (mpz_divisible_p(sym.denominator().get_mpz_t(), pz.get_mpz_t()))
    throw Error(ErrorCode::kMalformedInput, "symbol is not p-integral; normalize it first");
  for (const auto& v : sym.values())
    if (v != 0 && !mpz_divisible_p(v.get_num_mpz_t(), pz.get_mpz_t())) return;
  throw Error(ErrorCode::kMalformedInput, "symbol has no p-unit value; normalize it first");
}

}  // namespace

std::vector<KolyvaginPrime> enumerate_kolyvagin_primes(const CurveArithmetic& curve, i64 p, int m, i64 lmax) {
  std::vector<KolyvaginPrime> out;
  for (i64 l = p + 1; l <= lmax; l += p) {
    if (!is_prime(static_cast<u64>(l)) || curve.conductor % l == 0) continue;
    const i64 a = frobenius_trace(curve.minimal, l);
    if (mod(a - l - 1, p) != 0) continue;
    const int e = std::min(valuation(l - 1, p), valuation(a - l - 1, p));
    if (e < m) continue;
    out.push_back({l, a, e, primitive_root(l)});
  }
  return out;
}

i64 discrete_log_p_part(i64 l, i64 eta, i64 a, i64 p, int e) {
  if (mod(a, l) == 0) throw Error(ErrorCode::kMalformedInput, "discrete log of a non-unit");
  const SylowLog s(l, eta, p);
  if (e < 0 || e > s.v()) throw Error(ErrorCode::kMalformedInput, "target exponent exceeds v_p(l - 1)");
  return s.log(a) % p_power(p, e);
}

LogTable::LogTable(const KolyvaginPrime& kp, i64 p) : l_(kp.l) {
  const SylowLog s(kp.l, kp.eta, p);
  v_ = s.v();
  table_.assign(static_cast<std::size_t>(kp.l), 0);
  for (i64 x = 1; x < kp.l; ++x) table_[static_cast<std::size_t>(x)] = static_cast<std::uint32_t>(s.log(x));
}

DeltaResult delta(const EigenSymbol& sym, const std::vector<KolyvaginPrime>& factors, i64 p, LiftPolicy lift) {
  std::vector<LogTable> owned;
  owned.reserve(factors.size());
  for (const auto& f : factors) owned.emplace_back(f, p);
  std::vector<const LogTable*> tables;
  for (const auto& t : owned) tables.push_back(&t);
  return delta(sym, factors, tables, p, lift);
}

DeltaResult delta(const EigenSymbol& sym, const std::vector<KolyvaginPrime>& factors,
                  const std::vector<const LogTable*>& tables, i64 p, LiftPolicy lift) {
  require_normalized(sym, p);
  std::set<i64> seen;
  DeltaResult out;
  out.factors = factors;
  for (const auto& f : factors) {
    if (!seen.insert(f.l).second) throw Error(ErrorCode::kMalformedInput, "repeated Kolyvagin prime " + std::to_string(f.l));
    if (f.e < 1) throw Error(ErrorCode::kMalformedInput, "prime " + std::to_string(f.l) + " is not a Kolyvagin prime");
    if (sym.level() % f.l == 0) throw Error(ErrorCode::kMalformedInput, "Kolyvagin prime divides the level");
    if (out.n > INT64_MAX / f.l) throw Error(ErrorCode::kUnsupported, "n too large");
    out.n *= f.l;
  }

  if (factors.empty()) {
    out.exact = sym.evaluate(0, 1);
    out.residue = out.exact.get_num();
    if (out.exact != 0) out.M = valuation(out.exact.get_num(), p) - valuation(out.exact.get_den(), p);
    return out;
  }

  int e = factors.front().e;
  for (const auto& f : factors) e = std::min(e, f.e);
  out.e_n = e;
  const i64 pe = p_power(p, e);

  const mpz_class raw = weighted_sum(sym, out.n, factors, tables, pe, lift);
  // divide by the p-unit common denominator of the symbol
  mpz_class pez = static_cast<long>(pe), dinv;
  mpz_invert(dinv.get_mpz_t(), sym.denominator().get_mpz_t(), pez.get_mpz_t());
  mpz_class res = raw * dinv;
  mpz_fdiv_r(res.get_mpz_t(), res.get_mpz_t(), pez.get_mpz_t());
  out.residue = res;
  if (res != 0) out.M = valuation(res, p);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::ConsistentWitness: return "CONSISTENT_WITNESS";
    case Verdict::CounterexampleSignal: return "COUNTEREXAMPLE_SIGNAL";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

int SearchReport::wrong_parity_nonvanishing() const {
  int k = 0;
  for (const auto& d : wrong_parity) k += d.M.has_value();
  return k;
}

namespace {

bool parity_ok(int r, int epsilon) { return (r % 2 == 0) == (epsilon == 1); }

// Index tuples of size r in lexicographic order.
void combinations(std::size_t n, int r, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(r));
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == idx.size()) {
      f(idx);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      idx[pos] = i;
      rec(pos + 1, i + 1);
    }
  };
  rec(0, 0);
}

}  // namespace

double sweep_work(const std::vector<KolyvaginPrime>& primes, const SweepBounds& bounds, int epsilon) {
  double work = 0;
  for (int r = 0; r <= bounds.rmax; ++r) {
    if (!parity_ok(r, epsilon) && !bounds.diagnostic_parity) continue;
    combinations(primes.size(), r, [&](const std::vector<std::size_t>& idx) {
      double phi = 1;
      for (auto i : idx) phi *= static_cast<double>(primes[i].l - 1);
      work += phi;
    });
  }
  return work;
}

std::vector<std::string> hypothesis_caveats(const CurveArithmetic& curve, i64 p) {
  std::vector<std::string> c;
  if (curve.flags.sur != Surjectivity::Surjective)
    c.push_back("mod-p Galois representation not certified surjective (" + to_string(curve.flags.sur) + ")");
  if (curve.flags.manin_ok != ManinFlag::Yes) c.push_back("p^2 divides N: p-integrality of the Manin constant not certified");
  if (curve.flags.cm_suspect) c.push_back("curve looks CM (a_l vanishes for an unusually large share of l)");
  if (curve.reduction_at_p != ReductionAtP::GoodOrdinary) c.push_back("p is not a good ordinary prime (" + to_string(curve.reduction_at_p) + ")");
  if (p == 3) c.push_back("refined conjecture is formulated for p > 3; p = 3 verdicts are indicative only");
  return c;
}

SearchReport sweep(const EigenSymbol& sym, const CurveArithmetic& curve, i64 p, const SweepBounds& bounds) {
  if (p < 3 || !is_prime(static_cast<u64>(p))) throw Error(ErrorCode::kMalformedInput, "p must be an odd prime");
  if (bounds.rmax < 0 || bounds.m < 1) throw Error(ErrorCode::kMalformedInput, "invalid sweep bounds");
  require_normalized(sym, p);

  SearchReport rep;
  rep.bounds = bounds;
  rep.p = p;
  rep.epsilon = curve.epsilon ? *curve.epsilon : atkin_lehner_sign(sym);
  rep.ord_p_tam = valuation(curve.tamagawa_product, p);
  rep.primes = enumerate_kolyvagin_primes(curve, p, bounds.m, bounds.lmax);
  rep.caveats = hypothesis_caveats(curve, p);
  rep.work = sweep_work(rep.primes, bounds, rep.epsilon);
  if (rep.work > bounds.work_budget)
    throw Error(ErrorCode::kBudgetExceeded, "sweep needs about " + std::to_string(static_cast<long long>(rep.work)) +
                                                " symbol evaluations, budget is " +
                                                std::to_string(static_cast<long long>(bounds.work_budget)));

  std::vector<LogTable> tables;
  tables.reserve(rep.primes.size());
  for (const auto& kp : rep.primes) tables.emplace_back(kp, p);

  struct Task {
    std::vector<std::size_t> idx;
    bool right_parity;
  };
  std::vector<Task> tasks;
  for (int r = 0; r <= bounds.rmax; ++r) {
    const bool ok = parity_ok(r, rep.epsilon);
    if (!ok && !bounds.diagnostic_parity) continue;
    combinations(rep.primes.size(), r, [&](const std::vector<std::size_t>& idx) { tasks.push_back({idx, ok}); });
  }

  // Largest tasks first so the pool drains evenly; results land in their own slots.
  std::vector<std::size_t> order(tasks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto cost = [&](std::size_t t) {
    double c = 1;
    for (auto i : tasks[t].idx) c *= static_cast<double>(rep.primes[i].l);
    return c;
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cost(a) > cost(b); });

  std::vector<DeltaResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(std::max(1u, bounds.threads));
  auto worker = [&](unsigned id) {
    try {
    for (std::size_t k; (k = next.fetch_add(1)) < order.size();) {
      const Task& t = tasks[order[k]];
      std::vector<KolyvaginPrime> f;
      std::vector<const LogTable*> tb;
      for (auto i : t.idx) {
        f.push_back(rep.primes[i]);
        tb.push_back(&tables[i]);
      }
      results[order[k]] = delta(sym, f, tb, p);
    }
    } catch (...) {
      errors[id] = std::current_exception();
      next = order.size();
    }
  };
  const unsigned nthreads = std::max(1u, bounds.threads);
  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < nthreads; ++i) pool.emplace_back(worker, i);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].right_parity)
      rep.deltas.push_back(std::move(results[i]));
    else
      rep.wrong_parity.push_back(std::move(results[i]));
  }

  for (int r = 0; r <= bounds.rmax; ++r) {
    if (!parity_ok(r, rep.epsilon)) continue;
    std::optional<int> best;
    bool searched = false;
    for (const auto& d : rep.deltas) {
      if (d.nu() != r) continue;
      searched = true;
      if (d.M && (!best || *d.M < *best)) best = d.M;
    }
    if (searched) rep.M_r[r] = best;
    if (best && !rep.rho) rep.rho = r;
    if (best && (!rep.M_inf_upper || *best < *rep.M_inf_upper)) rep.M_inf_upper = best;
  }

  if (rep.M_inf_upper && *rep.M_inf_upper < rep.ord_p_tam)
    rep.verdict = Verdict::CounterexampleSignal;
  else if (rep.M_inf_upper && *rep.M_inf_upper == rep.ord_p_tam)
    rep.verdict = Verdict::ConsistentWitness;
  else
    rep.verdict = Verdict::Inconclusive;
  return rep;
}

std::optional<int> sha_prediction(const SearchReport& report) {
  if (!report.rho || !report.M_inf_upper) return std::nullopt;
  const auto it = report.M_r.find(*report.rho);
  if (it == report.M_r.end() || !it->second) return std::nullopt;
  return *it->second - *report.M_inf_upper;
}

}  // namespace kurisym
