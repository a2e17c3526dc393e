#include "kurisym/arith.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace kurisym {

i64 powmod(i64 base, u64 exp, i64 m) {
  i64 result = 1 % m;
  base = mod(base, m);
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

i64 invmod(i64 a, i64 m) {
  i64 g = m, x = 0, x1 = 1, r = mod(a, m);
  while (r) {
    i64 q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(x, x1) = std::make_pair(x1, x - q * x1);
  }
  if (g != 1) throw Error(ErrorCode::kInternal, "invmod: " + std::to_string(a) + " not invertible mod " + std::to_string(m));
  return mod(x, m);
}

i64 ipow(i64 base, unsigned exp) {
  i64 r = 1;
  while (exp--) r *= base;
  return r;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  auto mulm = [n](u64 a, u64 b) { return static_cast<u64>(static_cast<unsigned __int128>(a) * b % n); };
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = 1, b = a % n, e = d;
    while (e) {
      if (e & 1) x = mulm(x, b);
      b = mulm(b, b);
      e >>= 1;
    }
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulm(x, x);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<i64> primes_up_to(i64 bound) {
  std::vector<i64> out;
  if (bound < 2) return out;
  std::vector<bool> sieve(static_cast<std::size_t>(bound) + 1, true);
  for (i64 i = 2; i <= bound; ++i) {
    if (!sieve[i]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= bound; j += i) sieve[j] = false;
  }
  return out;
}

int valuation(i64 n, i64 p) {
  if (n == 0) throw Error(ErrorCode::kInternal, "valuation of zero");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int valuation(const mpz_class& n, i64 p) {
  if (n == 0) throw Error(ErrorCode::kInternal, "valuation of zero");
  mpz_class pp = static_cast<long>(p);
  return static_cast<int>(mpz_remove(mpz_class().get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

int legendre(i64 a, i64 p) {
  a = mod(a, p);
  if (a == 0) return 0;
  return powmod(a, static_cast<u64>((p - 1) / 2), p) == 1 ? 1 : -1;
}

int kronecker(i64 a, i64 n) {
  mpz_class aa = static_cast<long>(a), nn = static_cast<long>(n);
  return mpz_kronecker(aa.get_mpz_t(), nn.get_mpz_t());
}

i64 primitive_root(i64 l) {
  if (l == 2) return 1;
  auto fac = factor(l - 1);
  for (i64 g = 2; g < l; ++g) {
    bool ok = std::all_of(fac.begin(), fac.end(), [&](const auto& f) { return powmod(g, static_cast<u64>((l - 1) / f.first), l) != 1; });
    if (ok) return g;
  }
  throw Error(ErrorCode::kInternal, "no primitive root for " + std::to_string(l));
}

std::vector<std::pair<i64, int>> factor(i64 n) {
  std::vector<std::pair<i64, int>> out;
  n = std::llabs(n);
  if (n == 0) throw Error(ErrorCode::kInternal, "factor of zero");
  for (i64 q = 2; q * q <= n; ++q) {
    if (n % q) continue;
    int e = 0;
    while (n % q == 0) {
      n /= q;
      ++e;
    }
    out.emplace_back(q, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

namespace {

mpz_class pollard_rho(const mpz_class& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class x = 2, y = 2, d = 1;
    auto step = [&](mpz_class& v) { v = (v * v + c) % n; };
    while (d == 1) {
      step(x);
      step(y);
      step(y);
      mpz_class diff = abs(x - y);
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != n) return d;
  }
}

void factor_into(mpz_class n, std::vector<mpz_class>& primes) {
  if (n == 1) return;
  if (mpz_probab_prime_p(n.get_mpz_t(), 30)) {
    primes.push_back(n);
    return;
  }
  mpz_class d = pollard_rho(n);
  factor_into(d, primes);
  factor_into(n / d, primes);
}

}  // namespace

std::vector<std::pair<mpz_class, int>> factor(const mpz_class& n) {
  if (n == 0) throw Error(ErrorCode::kInternal, "factor of zero");
  mpz_class m = abs(n);
  std::vector<mpz_class> primes;
  for (unsigned long q = 2; q < 100000 && q * q <= m; ++q) {
    while (mpz_divisible_ui_p(m.get_mpz_t(), q)) {
      primes.emplace_back(q);
      m /= q;
    }
  }
  factor_into(m, primes);
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<mpz_class, int>> out;
  for (const auto& q : primes) {
    if (!out.empty() && out.back().first == q) {
      ++out.back().second;
    } else {
      out.emplace_back(q, 1);
    }
  }
  return out;
}

i64 sqrt_mod(i64 a, i64 p) {
  a = mod(a, p);
  if (a == 0 || p == 2) return a;
  if (legendre(a, p) != 1) throw Error(ErrorCode::kInternal, "sqrt_mod: non-residue");
  i64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  i64 z = 2;
  while (legendre(z, p) != -1) ++z;
  i64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    i64 i = 0, tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    i64 b = powmod(c, 1ull << (m - i - 1), p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

}  // namespace kurisym
