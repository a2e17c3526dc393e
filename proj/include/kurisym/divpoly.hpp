#pragma once

#include <vector>

#include <gmpxx.h>

#include "kurisym/curves.hpp"

namespace kurisym {

/// Dense integer polynomial, coefficient i multiplies x^i.
using ZPoly = std::vector<mpz_class>;

ZPoly poly_mul(const ZPoly& f, const ZPoly& g);
ZPoly poly_sub(const ZPoly& f, const ZPoly& g);
void poly_trim(ZPoly& f);
ZPoly poly_derivative(const ZPoly& f);
i64 poly_eval_mod(const ZPoly& f, i64 x, i64 m);
mpz_class poly_eval_mod(const ZPoly& f, const mpz_class& x, const mpz_class& m);

/// Division polynomial in x alone: psi_n for odd n, psi_n / psi_2 for even n.
ZPoly division_polynomial(const WeierstrassModel& model, int n);

/// Rational roots a/b (b > 0, reduced) of an integer polynomial, found by
/// lifting simple roots modulo a small prime and rational reconstruction.
std::vector<std::pair<mpz_class, mpz_class>> rational_roots(const ZPoly& f);

}  // namespace kurisym
