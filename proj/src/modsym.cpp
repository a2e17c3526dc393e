#include "kurisym/modsym.hpp"

#include <algorithm>
#include <numeric>

namespace kurisym {

namespace {

i64 floor_div(i64 x, i64 y) {
  i64 q = x / y;
  if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
  return q;
}

// x*a + y*b = gcd(a, b) >= 0
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  i64 x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    const i64 q = floor_div(a, b);
    i64 t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

// Signed union-find: x_i = rel[i] * x_parent[i].
class SignedUnionFind {
 public:
  explicit SignedUnionFind(std::size_t n) : parent_(n), rel_(n, 1), zero_(n, false) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::pair<std::size_t, int> find(std::size_t i) {
    if (parent_[i] == i) return {i, 1};
    auto [root, r] = find(parent_[i]);
    rel_[i] *= r;
    parent_[i] = root;
    return {root, rel_[i]};
  }

  // Impose x_i = s * x_j.
  void unite(std::size_t i, std::size_t j, int s) {
    auto [ri, si] = find(i);
    auto [rj, sj] = find(j);
    if (ri == rj) {
      if (si != s * sj) zero_[ri] = true;
      return;
    }
    parent_[ri] = rj;
    rel_[ri] = si * s * sj;
    zero_[rj] = zero_[rj] || zero_[ri];
  }

  bool zero(std::size_t root) const { return zero_[root]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rel_;
  std::vector<bool> zero_;
};

mpz_class lcm_of_denominators(const std::vector<mpq_class>& v) {
  mpz_class l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  return l;
}

}  // namespace

P1List::P1List(i64 N) : N_(N) {
  if (N < 1 || N > kMaxLevel) throw Error(ErrorCode::kUnsupported, "level out of range: " + std::to_string(N));
  table_.assign(static_cast<std::size_t>(N * N), -1);
  std::vector<i64> units;
  for (i64 u = 1; u <= std::max<i64>(N - 1, 1); ++u)
    if (gcd(u, N) == 1) units.push_back(u % N);
  for (i64 c = 0; c < N; ++c) {
    for (i64 d = 0; d < N; ++d) {
      if (table_[static_cast<std::size_t>(c * N + d)] >= 0 || gcd(gcd(c, d), N) != 1) continue;
      const int idx = static_cast<int>(reps_.size());
      reps_.emplace_back(c, d);
      for (i64 u : units) table_[static_cast<std::size_t>(u * c % N * N + u * d % N)] = idx;
    }
  }
}

Unimodular lift_to_sl2(i64 c, i64 d, i64 N) {
  c = mod(c, N);
  d = mod(d, N);
  if (c == 0) c = N;
  while (gcd(c, d) != 1) d += N;
  i64 x, y;
  ext_gcd(d, c, x, y);  // x d + y c = 1
  return {x, -y, c, d};
}

std::vector<Unimodular> heilbronn_matrices(i64 q) {
  std::vector<Unimodular> out;
  for (i64 a = 1; a <= q; ++a) {
    for (i64 b = 0; b < a; ++b) {
      for (i64 c = 0; c * (a - b) < q; ++c) {
        const i64 num = q + b * c;
        if (num % a != 0) continue;
        const i64 d = num / a;
        if (d > c) out.push_back({a, b, c, d});
      }
    }
  }
  return out;
}

std::pair<i64, i64> plus_cusp_class(i64 a, i64 c, i64 N) {
  if (c < 0) {
    a = -a;
    c = -c;
  }
  const i64 d = gcd(c, N);
  const i64 g = gcd(d, N / d);
  const i64 r = mod(mod(a, g) * mod(c / d, g), g);
  return {d, std::min(r, mod(-r, g))};
}

ManinSymbolSpace::ManinSymbolSpace(i64 N) : N_(N), p1_(std::make_shared<P1List>(N)) {
  const std::size_t n = p1_->size();
  SignedUnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i) {
    uf.unite(i, s_image(i), -1);
    uf.unite(i, eta_image(i), 1);
  }

  std::vector<int> root_gen(n, -1);
  gen_.assign(n, -1);
  sign_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto [root, s] = uf.find(i);
    if (uf.zero(root)) continue;
    if (root_gen[root] < 0) root_gen[root] = ngens_++;
    gen_[i] = root_gen[root];
    sign_[i] = s;
  }

  SparseEchelon ech(ngens_);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = t_image(i), k = t_image(j);
    if (i > j || i > k) continue;  // one relation per T-orbit
    std::map<int, i64> acc;
    for (std::size_t x : {i, j, k})
      if (gen_[x] >= 0) acc[gen_[x]] += sign_[x];
    SparseRow row;
    for (auto [g, v] : acc)
      if (v != 0) row.emplace_back(g, mpq_class(static_cast<long>(v)));
    if (!row.empty()) ech.add_row(std::move(row));
  }
  basis_ = ech.kernel();
  coord_gens_ = ech.free_columns();

  // Boundary map into the plus cusp classes; its rank splits off the Eisenstein part.
  std::map<std::pair<i64, i64>, int> cusp_ids;
  std::vector<bool> seen(static_cast<std::size_t>(ngens_), false);
  SparseEchelon bech(static_cast<int>(n) + 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (gen_[i] < 0 || seen[static_cast<std::size_t>(gen_[i])]) continue;
    seen[static_cast<std::size_t>(gen_[i])] = true;
    const auto [c, d] = p1_->rep(i);
    const Unimodular g = lift_to_sl2(c, d, N_);
    auto id = [&](i64 num, i64 den) {
      auto key = plus_cusp_class(num, den, N_);
      auto it = cusp_ids.find(key);
      if (it == cusp_ids.end()) it = cusp_ids.emplace(key, static_cast<int>(cusp_ids.size())).first;
      return it->second;
    };
    const int hi = id(g.a, g.c), lo = id(g.b, g.d);
    if (hi == lo) continue;
    SparseRow row;
    row.emplace_back(std::min(hi, lo), mpq_class(hi < lo ? 1 : -1));
    row.emplace_back(std::max(hi, lo), mpq_class(hi < lo ? -1 : 1));
    bech.add_row(std::move(row));
  }
  cuspidal_dim_ = dimension() - bech.rank();
}

std::size_t ManinSymbolSpace::s_image(std::size_t i) const {
  const auto [c, d] = p1_->rep(i);
  return static_cast<std::size_t>(p1_->index(d, -c));
}

std::size_t ManinSymbolSpace::t_image(std::size_t i) const {
  const auto [c, d] = p1_->rep(i);
  return static_cast<std::size_t>(p1_->index(d, -c - d));
}

std::size_t ManinSymbolSpace::eta_image(std::size_t i) const {
  const auto [c, d] = p1_->rep(i);
  return static_cast<std::size_t>(p1_->index(-c, d));
}

QVec ManinSymbolSpace::class_values(const QVec& generator_values) const {
  QVec out(p1_->size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    if (gen_[i] >= 0) out[i] = sign_[i] * generator_values[static_cast<std::size_t>(gen_[i])];
  return out;
}

std::map<int, i64> ManinSymbolSpace::heilbronn_image(std::size_t i, i64 q) const {
  const auto [c, d] = p1_->rep(i);
  std::map<int, i64> cnt;
  for (const auto& h : heilbronn_matrices(q)) {
    const int j = p1_->index(c * h.a + d * h.c, c * h.b + d * h.d);
    if (j >= 0) ++cnt[j];
  }
  return cnt;
}

QVec ManinSymbolSpace::hecke_apply(const QVec& class_values, i64 q) const {
  const auto hm = heilbronn_matrices(q);
  QVec out(p1_->size(), 0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto [c, d] = p1_->rep(i);
    mpq_class acc = 0;
    for (const auto& h : hm) {
      const int j = p1_->index(c * h.a + d * h.c, c * h.b + d * h.d);
      if (j >= 0) acc += class_values[static_cast<std::size_t>(j)];
    }
    out[i] = acc;
  }
  return out;
}

QMat ManinSymbolSpace::hecke_matrix(i64 q) const {
  const std::size_t dim = basis_.size();
  std::vector<QVec> cv;
  for (const auto& b : basis_) cv.push_back(class_values(b));
  QMat H(dim, QVec(dim, 0));
  for (std::size_t col = 0; col < dim; ++col) {
    const int g = coord_gens_[col];
    std::size_t rep = 0;
    while (gen_[rep] != g) ++rep;
    const auto cnt = heilbronn_image(rep, q);
    for (std::size_t j = 0; j < dim; ++j) {
      mpq_class acc = 0;
      for (auto [k, m] : cnt) acc += cv[j][static_cast<std::size_t>(k)] * static_cast<long>(m);
      H[j][col] = sign_[rep] * acc;
    }
  }
  return H;
}

EigenSymbol::EigenSymbol(std::shared_ptr<const P1List> p1, std::vector<mpq_class> class_values,
                         std::map<i64, i64> probes, mpq_class scale)
    : p1_(std::move(p1)), values_(std::move(class_values)), probes_(std::move(probes)), scale_(std::move(scale)) {
  if (values_.size() != p1_->size()) throw Error(ErrorCode::kInternal, "eigensymbol table size mismatch");
  den_ = lcm_of_denominators(values_);
  std::vector<i64> num(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const mpz_class z = values_[i].get_num() * (den_ / values_[i].get_den());
    if (!z.fits_slong_p() || abs(z) > (mpz_class(1) << 40))
      throw Error(ErrorCode::kUnsupported, "eigensymbol values too large for the evaluation table");
    num[i] = z.get_si();
  }
  const i64 N = p1_->level();
  flat_.assign(static_cast<std::size_t>(N * N), 0);
  for (i64 c = 0; c < N; ++c)
    for (i64 d = 0; d < N; ++d)
      if (int k = p1_->index_reduced(c, d); k >= 0) flat_[static_cast<std::size_t>(c * N + d)] = num[static_cast<std::size_t>(k)];
  level32_ = static_cast<std::uint32_t>(N);
  mod_magic_ = UINT64_MAX / level32_ + 1;
  start_ = flat_[static_cast<std::size_t>(mod(-1, N) * N)];
}

i64 EigenSymbol::evaluate_numerator(i64 a, i64 n) const {
  if (n <= 0) throw Error(ErrorCode::kMalformedInput, "modular symbol denominator must be positive");
  a = mod(a, n);
  const i64 g = gcd(a, n);
  a /= g;
  n /= g;
  if (n <= static_cast<i64>(UINT32_MAX)) return evaluate_reduced(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(n));

  const i64 N = p1_->level();
  i64 x = n, y = a;
  i64 qm1 = 1, qm2 = 0;
  bool neg = false;
  i64 sum = start_;
  while (y != 0) {
    const i64 t = x / y;
    const i64 r = x - t * y;
    const i64 q = t * qm1 + qm2;
    const i64 qn = q % N;
    const i64 c = neg ? (qn == 0 ? 0 : N - qn) : qn;
    sum += flat_[static_cast<std::size_t>(c * N + qm1 % N)];
    qm2 = qm1;
    qm1 = q;
    neg = !neg;
    x = y;
    y = r;
  }
  return sum;
}

i64 EigenSymbol::cusp_numerator(i64 a, i64 n) const {
  if (n == 0) return 0;
  if (n < 0) {
    a = -a;
    n = -n;
  }
  return evaluate_numerator(a, n);
}

std::vector<i64> good_primes(i64 N, std::size_t count, i64 after) {
  std::vector<i64> out;
  for (i64 q = after + 1; out.size() < count; ++q)
    if (is_prime(static_cast<u64>(q)) && N % q != 0) out.push_back(q);
  return out;
}

namespace {

EigenSymbol make_symbol(const ManinSymbolSpace& space, const QVec& coords, std::map<i64, i64> probes) {
  QVec gv(static_cast<std::size_t>(space.num_generators()), 0);
  for (std::size_t j = 0; j < coords.size(); ++j)
    for (std::size_t g = 0; g < gv.size(); ++g) gv[g] += coords[j] * space.basis()[j][g];
  QVec cv = space.class_values(gv);

  // Primitive integral vector with the first nonzero entry positive.
  const mpz_class l = lcm_of_denominators(cv);
  mpz_class content = 0;
  for (auto& x : cv) {
    x *= l;
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), x.get_num_mpz_t());
  }
  if (content == 0) throw Error(ErrorCode::kEigenspace, "eigensymbol is zero");
  auto first = std::find_if(cv.begin(), cv.end(), [](const mpq_class& x) { return x != 0; });
  if (*first < 0) content = -content;
  for (auto& x : cv) x /= content;
  return EigenSymbol(space.p1_shared(), std::move(cv), std::move(probes), mpq_class(1));
}

}  // namespace

EigenSymbol rational_eigensymbol(const ManinSymbolSpace& space, const WeierstrassModel& minimal,
                                 const std::vector<i64>& probes) {
  const std::size_t dim = static_cast<std::size_t>(space.dimension());
  QMat stacked;
  std::map<i64, i64> eig;
  for (i64 q : probes) {
    if (space.level() % q == 0) throw Error(ErrorCode::kMalformedInput, "probe prime divides the level");
    const i64 aq = frobenius_trace(minimal, q);
    eig[q] = aq;
    const QMat H = space.hecke_matrix(q);
    for (std::size_t i = 0; i < dim; ++i) {
      QVec row(dim);
      for (std::size_t j = 0; j < dim; ++j) row[j] = H[j][i];
      row[i] -= aq;
      stacked.push_back(std::move(row));
    }
  }
  const auto ns = nullspace(stacked, static_cast<int>(dim));
  if (ns.empty())
    throw Error(ErrorCode::kEigenspace, "no plus eigensymbol with the curve's eigenvalues at level " +
                                            std::to_string(space.level()));
  if (ns.size() > 1)
    throw Error(ErrorCode::kEigenspace, "eigenspace has dimension " + std::to_string(ns.size()) + " after " +
                                            std::to_string(probes.size()) + " probes; supply more probe primes");
  return make_symbol(space, ns.front(), std::move(eig));
}

EigenSymbol rational_eigensymbol(const ManinSymbolSpace& space, const WeierstrassModel& minimal, std::size_t max_probes) {
  std::vector<i64> probes = good_primes(space.level(), 3);
  while (true) {
    try {
      return rational_eigensymbol(space, minimal, probes);
    } catch (const Error& e) {
      const bool too_big = std::string(e.what()).find("dimension") != std::string::npos;
      if (!too_big || probes.size() >= max_probes) throw;
    }
    probes.push_back(good_primes(space.level(), 1, probes.back()).front());
  }
}

EigenSymbol normalize_p_integral(const EigenSymbol& sym, i64 p) {
  bool any = false;
  int v = 0;
  for (const auto& x : sym.values()) {
    if (x == 0) continue;
    const int w = valuation(x.get_num(), p) - valuation(x.get_den(), p);
    v = any ? std::min(v, w) : w;
    any = true;
  }
  if (!any) throw Error(ErrorCode::kMalformedInput, "cannot normalize the zero symbol");
  mpq_class f = 1;
  const mpz_class pz = static_cast<long>(p);
  for (int k = 0; k < std::abs(v); ++k) f *= pz;
  if (v > 0) f = 1 / f;
  std::vector<mpq_class> vals = sym.values();
  for (auto& x : vals) x *= f;
  return EigenSymbol(sym.p1_shared(), std::move(vals), sym.probe_eigenvalues(),
                     sym.scale() * f);
}

bool satisfies_hecke(const ManinSymbolSpace& space, const EigenSymbol& sym, i64 q, i64 a) {
  const QVec v(sym.values().begin(), sym.values().end());
  const QVec tv = space.hecke_apply(v, q);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (tv[i] != a * v[i]) return false;
  return true;
}

int fricke_eigenvalue(const EigenSymbol& sym) {
  const i64 N = sym.level();
  // W_N sends u/v to -v/(N u).
  auto w_value = [&](i64 u, i64 v) -> i64 {
    if (v == 0) return sym.cusp_numerator(0, 1);
    if (u == 0) return 0;
    return sym.cusp_numerator(-v, N * u);
  };
  int w = 0;
  for (std::size_t i = 0; i < sym.p1().size(); ++i) {
    const auto [c, d] = sym.p1().rep(i);
    const Unimodular g = lift_to_sl2(c, d, N);
    const i64 direct = sym.cusp_numerator(g.a, g.c) - sym.cusp_numerator(g.b, g.d);
    const i64 image = w_value(g.a, g.c) - w_value(g.b, g.d);
    if (direct == 0 && image == 0) continue;
    const int s = image == direct ? 1 : (image == -direct ? -1 : 0);
    if (s == 0 || (w != 0 && s != w)) throw Error(ErrorCode::kEigenspace, "symbol is not a Fricke eigenvector");
    w = s;
  }
  if (w == 0) throw Error(ErrorCode::kEigenspace, "zero symbol has no Fricke eigenvalue");
  return w;
}

int atkin_lehner_sign(const EigenSymbol& sym) { return -fricke_eigenvalue(sym); }

}  // namespace kurisym
