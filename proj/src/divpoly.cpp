#include "kurisym/divpoly.hpp"

#include <algorithm>
#include <map>

namespace kurisym {

void poly_trim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

ZPoly poly_mul(const ZPoly& f, const ZPoly& g) {
  if (f.empty() || g.empty()) return {};
  ZPoly h(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) h[i + j] += f[i] * g[j];
  }
  poly_trim(h);
  return h;
}

ZPoly poly_sub(const ZPoly& f, const ZPoly& g) {
  ZPoly h(std::max(f.size(), g.size()), 0);
  for (std::size_t i = 0; i < f.size(); ++i) h[i] += f[i];
  for (std::size_t i = 0; i < g.size(); ++i) h[i] -= g[i];
  poly_trim(h);
  return h;
}

ZPoly poly_derivative(const ZPoly& f) {
  ZPoly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<unsigned long>(i));
  poly_trim(d);
  return d;
}

mpz_class poly_eval_mod(const ZPoly& f, const mpz_class& x, const mpz_class& m) {
  mpz_class v = 0;
  for (auto it = f.rbegin(); it != f.rend(); ++it) {
    v = v * x + *it;
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
  }
  return v;
}

i64 poly_eval_mod(const ZPoly& f, i64 x, i64 m) {
  return poly_eval_mod(f, mpz_class(static_cast<long>(x)), mpz_class(static_cast<long>(m))).get_si();
}

ZPoly division_polynomial(const WeierstrassModel& model, int n) {
  const Invariants& I = model.invariants();
  const ZPoly F{I.b6, 2 * I.b4, I.b2, 4};  // psi_2^2
  const ZPoly F2 = poly_mul(F, F);
  std::map<int, ZPoly> memo;
  memo[0] = {};
  memo[1] = {1};
  memo[2] = {1};
  memo[3] = {I.b8, 3 * I.b6, 3 * I.b4, I.b2, 3};
  memo[4] = {I.b4 * I.b8 - I.b6 * I.b6, I.b2 * I.b8 - I.b4 * I.b6, 10 * I.b8, 10 * I.b6, 5 * I.b4, I.b2, 2};

  auto cube = [](const ZPoly& f) { return poly_mul(f, poly_mul(f, f)); };
  auto sq = [](const ZPoly& f) { return poly_mul(f, f); };

  std::function<const ZPoly&(int)> get = [&](int k) -> const ZPoly& {
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    ZPoly result;
    const int m = k / 2;
    if (k % 2 == 1) {
      ZPoly left = poly_mul(get(m + 2), cube(get(m)));
      ZPoly right = poly_mul(get(m - 1), cube(get(m + 1)));
      if (m % 2 == 0) {
        left = poly_mul(F2, left);
      } else {
        right = poly_mul(F2, right);
      }
      result = poly_sub(left, right);
    } else {
      result = poly_mul(get(m), poly_sub(poly_mul(get(m + 2), sq(get(m - 1))), poly_mul(get(m - 2), sq(get(m + 1)))));
    }
    return memo[k] = std::move(result);
  };
  if (n < 0) throw Error(ErrorCode::kInternal, "negative division polynomial index");
  return get(n);
}

namespace {

// a/b with a = b*r mod M, |a|, |b| <= bound.
std::optional<std::pair<mpz_class, mpz_class>> reconstruct(const mpz_class& r, const mpz_class& M, const mpz_class& bound) {
  mpz_class r0 = M, r1 = r, t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  mpz_class a = r1, b = t1;
  if (b < 0) {
    a = -a;
    b = -b;
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (g != 1) return std::nullopt;
  return std::make_pair(a, b);
}

bool is_root(const ZPoly& f, const mpz_class& a, const mpz_class& b) {
  mpz_class acc = 0, bpow = 1;
  const std::size_t d = f.size() - 1;
  std::vector<mpz_class> bp(d + 1);
  bp[0] = 1;
  for (std::size_t i = 1; i <= d; ++i) bp[i] = bp[i - 1] * b;
  mpz_class apow = 1;
  for (std::size_t i = 0; i <= d; ++i) {
    acc += f[i] * apow * bp[d - i];
    apow *= a;
  }
  return acc == 0;
}

}  // namespace

std::vector<std::pair<mpz_class, mpz_class>> rational_roots(const ZPoly& input) {
  ZPoly f = input;
  poly_trim(f);
  std::vector<std::pair<mpz_class, mpz_class>> roots;
  if (f.size() <= 1) return roots;
  if (f[0] == 0) {
    roots.emplace_back(0, 1);
    while (!f.empty() && f[0] == 0) f.erase(f.begin());
    if (f.size() <= 1) return roots;
  }
  const ZPoly df = poly_derivative(f);
  const mpz_class bound = std::max(abs(f.front()), abs(f.back()));
  const mpz_class need = 2 * bound * bound + 1;

  for (i64 q : primes_up_to(2000)) {
    const mpz_class qz = static_cast<long>(q);
    if (mpz_divisible_p(f.back().get_mpz_t(), qz.get_mpz_t())) continue;
    std::vector<i64> modroots;
    bool separable = true;
    for (i64 x = 0; x < q && separable; ++x) {
      if (poly_eval_mod(f, x, q) != 0) continue;
      if (poly_eval_mod(df, x, q) == 0) separable = false;
      modroots.push_back(x);
    }
    if (!separable) continue;
    for (i64 r0 : modroots) {
      mpz_class r = static_cast<long>(r0), M = qz;
      while (M <= need) {
        M = M * M;
        mpz_class fv = poly_eval_mod(f, r, M);
        mpz_class dv = poly_eval_mod(df, r, M), inv;
        mpz_invert(inv.get_mpz_t(), dv.get_mpz_t(), M.get_mpz_t());
        r = r - fv * inv;
        mpz_fdiv_r(r.get_mpz_t(), r.get_mpz_t(), M.get_mpz_t());
      }
      mpz_class sb;
      mpz_sqrt(sb.get_mpz_t(), mpz_class(M / 2).get_mpz_t());
      if (auto ab = reconstruct(r, M, sb); ab && is_root(f, ab->first, ab->second)) roots.push_back(*ab);
    }
    std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) { return x.first * y.second < y.first * x.second; });
    return roots;
  }
  throw Error(ErrorCode::kInternal, "rational_roots: no separable reduction found");
}

}  // namespace kurisym
