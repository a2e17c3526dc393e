#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace kurisym {

enum class ErrorCode {
  kMalformedInput = 1,
  kSingularCurve = 2,
  kFileIo = 4,
  kBudgetExceeded = 3,
  kUnsupported = 5,
  kEigenspace = 6,
  kInternal = 7,
};

/// Library-wide exception. The code is what the CLI maps onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mulmod(i64 a, i64 b, i64 m) {
  return static_cast<i64>(static_cast<i128>(a) * b % m);
}

i64 powmod(i64 base, u64 exp, i64 m);
i64 invmod(i64 a, i64 m);  // throws if not invertible
i64 gcd(i64 a, i64 b);
i64 ipow(i64 base, unsigned exp);

bool is_prime(u64 n);
std::vector<i64> primes_up_to(i64 bound);

/// v_p(n); n must be nonzero.
int valuation(i64 n, i64 p);
int valuation(const mpz_class& n, i64 p);

/// Legendre symbol for odd prime p.
int legendre(i64 a, i64 p);
/// Kronecker symbol (a|n) for n > 0.
int kronecker(i64 a, i64 n);

/// Smallest generator of (Z/l)^*.
i64 primitive_root(i64 l);

/// Distinct prime factors of |n| with multiplicities, ascending. n != 0.
std::vector<std::pair<mpz_class, int>> factor(const mpz_class& n);
std::vector<std::pair<i64, int>> factor(i64 n);

/// Square root of a mod odd prime p (Tonelli-Shanks); a must be a square.
i64 sqrt_mod(i64 a, i64 p);

}  // namespace kurisym
