#pragma once

// Dense polynomials over F_p, places of the rational function field F_p(t)
// with their normalized absolute values, and the cyclotomic-coset
// factorization of t^n - 1 that the torsion-module formulas evaluate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rzeta/exact.hpp"

namespace rzeta {

// Coefficients live in [0, p); stored low degree first, leading nonzero.
// p is restricted below 2^32 so coefficient products fit in 64 bits.
class FpPoly {
 public:
  FpPoly() = default;

  FpPoly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p) {
    validate_prime(p);
    c_ = std::move(coeffs);
    for (auto& c : c_) c %= p_;
    normalize();
  }

  static FpPoly zero(std::uint64_t p) { return FpPoly(p, {}); }
  static FpPoly one(std::uint64_t p) { return FpPoly(p, {1}); }
  static FpPoly constant(std::uint64_t p, std::uint64_t c) { return FpPoly(p, {c}); }
  static FpPoly t(std::uint64_t p) { return FpPoly(p, {0, 1}); }

  static FpPoly monomial(std::uint64_t p, std::size_t deg, std::uint64_t c = 1) {
    std::vector<std::uint64_t> v(deg + 1, 0);
    v[deg] = c;
    return FpPoly(p, std::move(v));
  }

  // t^n - 1
  static FpPoly t_pow_minus_one(std::uint64_t p, unsigned long n) {
    std::vector<std::uint64_t> v(n + 1, 0);
    v[0] = p - 1;
    v[n] = (n == 0) ? 0 : 1;
    return FpPoly(p, std::move(v));
  }

  std::uint64_t prime() const { return p_; }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::uint64_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  const std::vector<std::uint64_t>& coeffs() const { return c_; }
  std::uint64_t leading() const {
    if (is_zero()) throw invariant_error("FpPoly: leading coefficient of zero");
    return c_.back();
  }
  bool is_monic() const { return !is_zero() && c_.back() == 1; }

  bool operator==(const FpPoly& o) const { return p_ == o.p_ && c_ == o.c_; }
  bool operator!=(const FpPoly& o) const { return !(*this == o); }

  friend FpPoly operator+(const FpPoly& a, const FpPoly& b) {
    a.match(b);
    std::vector<std::uint64_t> v(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = (a.coeff(i) + b.coeff(i)) % a.p_;
    return FpPoly(a.p_, std::move(v));
  }

  friend FpPoly operator-(const FpPoly& a, const FpPoly& b) {
    a.match(b);
    std::vector<std::uint64_t> v(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = (a.coeff(i) + a.p_ - b.coeff(i)) % a.p_;
    return FpPoly(a.p_, std::move(v));
  }

  friend FpPoly operator*(const FpPoly& a, const FpPoly& b) {
    a.match(b);
    if (a.is_zero() || b.is_zero()) return zero(a.p_);
    std::vector<std::uint64_t> v(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) {
        v[i + j] = (v[i + j] + detail::mulmod_u64(a.c_[i], b.c_[j], a.p_)) % a.p_;
      }
    }
    return FpPoly(a.p_, std::move(v));
  }

  FpPoly scaled(std::uint64_t s) const {
    std::vector<std::uint64_t> v(c_);
    for (auto& c : v) c = detail::mulmod_u64(c, s % p_, p_);
    return FpPoly(p_, std::move(v));
  }

  FpPoly make_monic() const {
    if (is_zero()) return *this;
    if (c_.back() == 1) return *this;
    return scaled(inv_mod(c_.back()));
  }

  FpPoly derivative() const {
    if (c_.size() <= 1) return zero(p_);
    std::vector<std::uint64_t> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      v[i - 1] = detail::mulmod_u64(c_[i], i % p_, p_);
    return FpPoly(p_, std::move(v));
  }

  std::uint64_t eval(std::uint64_t x) const {
    std::uint64_t acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;)
      acc = (detail::mulmod_u64(acc, x % p_, p_) + c_[i]) % p_;
    return acc;
  }

  std::string str(const char* var = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      if (!out.empty()) out += " + ";
      if (i == 0 || c_[i] != 1) out += std::to_string(c_[i]);
      if (i >= 1) {
        if (c_[i] != 1) out += "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

  std::uint64_t inv_mod(std::uint64_t a) const {
    // p prime, a != 0 mod p
    a %= p_;
    if (a == 0) throw invariant_error("FpPoly: inverse of zero residue");
    return detail::powmod_u64(a, p_ - 2, p_);
  }

 private:
  std::uint64_t p_ = 0;
  std::vector<std::uint64_t> c_;

  static void validate_prime(std::uint64_t p) {
    if (p >= (1ull << 32))
      throw invariant_error("FpPoly: characteristic must be below 2^32");
    if (!is_prime_u64(p))
      throw invariant_error("FpPoly: characteristic " + std::to_string(p) +
                            " is not prime");
  }

  void match(const FpPoly& o) const {
    if (p_ != o.p_)
      throw invariant_error("FpPoly: mixed characteristics " +
                            std::to_string(p_) + " and " + std::to_string(o.p_));
  }

  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
};

// Quotient and remainder, deg r < deg b.
inline std::pair<FpPoly, FpPoly> divmod(const FpPoly& a, const FpPoly& b) {
  if (b.is_zero()) throw invariant_error("FpPoly: division by zero polynomial");
  if (a.prime() != b.prime())
    throw invariant_error("FpPoly: mixed characteristics in divmod");
  std::uint64_t p = a.prime();
  if (a.degree() < b.degree()) return {FpPoly::zero(p), a};
  std::vector<std::uint64_t> rem(a.coeffs());
  std::vector<std::uint64_t> quo(a.degree() - b.degree() + 1, 0);
  std::uint64_t lead_inv = b.inv_mod(b.leading());
  for (long i = a.degree(); i >= b.degree(); --i) {
    std::uint64_t c = rem[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    std::uint64_t q = detail::mulmod_u64(c, lead_inv, p);
    quo[static_cast<std::size_t>(i - b.degree())] = q;
    for (long j = 0; j <= b.degree(); ++j) {
      auto idx = static_cast<std::size_t>(i - b.degree() + j);
      std::uint64_t sub = detail::mulmod_u64(q, b.coeff(static_cast<std::size_t>(j)), p);
      rem[idx] = (rem[idx] + p - sub) % p;
    }
  }
  return {FpPoly(p, std::move(quo)), FpPoly(p, std::move(rem))};
}

inline FpPoly operator%(const FpPoly& a, const FpPoly& b) { return divmod(a, b).second; }
inline FpPoly operator/(const FpPoly& a, const FpPoly& b) { return divmod(a, b).first; }

// Monic gcd.
inline FpPoly poly_gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = a % b;
    a = b;
    b = r;
  }
  return a.make_monic();
}

// base^e mod m, e an arbitrary non-negative big integer.
inline FpPoly powmod(const FpPoly& base, const BigInt& e, const FpPoly& m) {
  if (sgn(e) < 0) throw invariant_error("powmod: negative exponent");
  FpPoly result = FpPoly::one(base.prime()) % m;
  FpPoly b = base % m;
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  if (sgn(e) == 0) return result;
  for (std::size_t i = bits; i-- > 0;) {
    result = (result * result) % m;
    if (mpz_tstbit(e.get_mpz_t(), i)) result = (result * b) % m;
  }
  return result;
}

inline FpPoly powmod(const FpPoly& base, std::uint64_t e, const FpPoly& m) {
  return powmod(base, BigInt(e), m);
}

// Rabin test: w irreducible iff t^(p^d) = t mod w and, for every prime q | d,
// gcd(w, t^(p^(d/q)) - t) is constant.
inline bool is_irreducible(const FpPoly& w) {
  long d = w.degree();
  if (d < 1) throw invariant_error("is_irreducible: degree must be at least 1");
  if (d == 1) return true;
  std::uint64_t p = w.prime();
  FpPoly x = FpPoly::t(p) % w;
  std::vector<FpPoly> frob(static_cast<std::size_t>(d) + 1, FpPoly::zero(p));
  frob[0] = x;
  for (long i = 1; i <= d; ++i)
    frob[static_cast<std::size_t>(i)] =
        powmod(frob[static_cast<std::size_t>(i - 1)], p, w);
  if (frob[static_cast<std::size_t>(d)] != x) return false;
  for (auto [q, e] : factor_u64(static_cast<std::uint64_t>(d))) {
    (void)e;
    FpPoly diff = frob[static_cast<std::size_t>(d / static_cast<long>(q))] - x;
    if (poly_gcd(w, diff).degree() > 0) return false;
  }
  return true;
}

// A place of F_p(t): the degree-measuring infinite place, or the finite place
// attached to a monic irreducible polynomial.
class Place {
 public:
  static Place infinite(std::uint64_t p) {
    Place v;
    v.p_ = p;
    FpPoly::t(p);  // validates p
    return v;
  }

  static Place finite(FpPoly w) {
    if (w.degree() < 1) throw invariant_error("Place: finite place needs degree >= 1");
    if (!w.is_monic()) throw invariant_error("Place: finite place polynomial must be monic");
    if (!is_irreducible(w))
      throw invariant_error("Place: " + w.str() + " is not irreducible over F_" +
                            std::to_string(w.prime()));
    Place v;
    v.p_ = w.prime();
    v.w_ = std::move(w);
    return v;
  }

  bool is_infinite() const { return !w_.has_value(); }
  std::uint64_t prime() const { return p_; }
  const FpPoly& poly() const {
    if (is_infinite()) throw invariant_error("Place: infinite place has no polynomial");
    return *w_;
  }
  long degree() const { return is_infinite() ? 1 : w_->degree(); }

  bool operator==(const Place& o) const {
    if (p_ != o.p_ || is_infinite() != o.is_infinite()) return false;
    return is_infinite() || *w_ == *o.w_;
  }

  std::string str() const {
    return is_infinite() ? "oo" : "(" + w_->str() + ")";
  }

 private:
  std::uint64_t p_ = 0;
  std::optional<FpPoly> w_;
};

namespace detail {

// Arithmetic in F_{p^E} realized as F_p[u]/(modulus).
struct FqCtx {
  FpPoly modulus;

  FpPoly mul(const FpPoly& a, const FpPoly& b) const { return (a * b) % modulus; }

  FpPoly pow(const FpPoly& base, const BigInt& e) const {
    return powmod(base, e, modulus);
  }

  FpPoly one() const { return FpPoly::one(modulus.prime()); }
};

inline FpPoly poly_from_counter(std::uint64_t p, std::uint64_t counter,
                                std::size_t max_len) {
  std::vector<std::uint64_t> c;
  c.reserve(max_len);
  while (counter > 0) {
    c.push_back(counter % p);
    counter /= p;
  }
  return FpPoly(p, std::move(c));
}

inline FpPoly find_irreducible(std::uint64_t p, long degree) {
  // Smallest monic polynomial of the given degree in base-p counter order;
  // irreducibles have density about 1/degree, so the scan ends quickly.
  if (degree < 1) throw invariant_error("find_irreducible: degree >= 1 required");
  if (degree == 1) return FpPoly::t(p);
  if (degree > 64)
    throw invariant_error("find_irreducible: residue extension too large");
  std::uint64_t limit = 1;
  for (long i = 0; i < degree && limit < (1ull << 20); ++i) limit *= p;
  limit = std::min<std::uint64_t>(limit, 1ull << 20);
  for (std::uint64_t tail = 0; tail < limit; ++tail) {
    FpPoly low = poly_from_counter(p, tail, static_cast<std::size_t>(degree));
    FpPoly cand = FpPoly::monomial(p, static_cast<std::size_t>(degree)) + low;
    if (is_irreducible(cand)) return cand;
  }
  throw std::logic_error("find_irreducible: exhausted search space");
}

// Element of multiplicative order exactly m in F_{p^E}, m | p^E - 1.
inline FpPoly find_element_of_order(const FqCtx& ctx, std::uint64_t m) {
  std::uint64_t p = ctx.modulus.prime();
  long E = ctx.modulus.degree();
  BigInt group = pow_int(BigInt(p), static_cast<unsigned long>(E)) - 1;
  BigInt exp = group / BigInt(m);
  if (exp * m != group)
    throw std::logic_error("find_element_of_order: m does not divide group order");
  auto mfac = factor_u64(m);
  for (std::uint64_t counter = 1;; ++counter) {
    FpPoly cand = poly_from_counter(p, counter, static_cast<std::size_t>(E));
    if (cand.degree() >= E) throw std::logic_error("find_element_of_order: no generator found");
    FpPoly beta = ctx.pow(cand, exp);
    if (beta == ctx.one() && m > 1) continue;
    bool full_order = true;
    for (auto [q, e] : mfac) {
      (void)e;
      if (ctx.pow(beta, BigInt(m / q)) == ctx.one()) {
        full_order = false;
        break;
      }
    }
    if (full_order) return beta;
  }
}

}  // namespace detail

// Factorization of t^n - 1 over F_p.  With n = m p^k, p not dividing m, the
// distinct irreducible factors of t^m - 1 correspond to the cyclotomic cosets
// of p acting on Z/m, and each occurs with multiplicity p^k in t^n - 1.
// Factors are returned sorted by degree, then coefficient order.
inline std::vector<std::pair<FpPoly, long>> factor_tn_minus_1(unsigned long n,
                                                              std::uint64_t p) {
  if (n < 1) throw invariant_error("factor_tn_minus_1: n must be positive");
  FpPoly::t(p);  // validates p
  unsigned long m = n;
  long mult = 1;
  while (m % p == 0) {
    m /= p;
    mult *= static_cast<long>(p);
  }

  std::vector<std::pair<FpPoly, long>> factors;
  if (m == 1) {
    factors.emplace_back(FpPoly(p, {p - 1, 1}), mult);  // t - 1
  } else {
    // multiplicative order of p mod m
    long E = 1;
    {
      std::uint64_t acc = p % m;
      while (acc != 1) {
        acc = detail::mulmod_u64(acc, p % m, m);
        ++E;
        if (E > static_cast<long>(m))
          throw std::logic_error("factor_tn_minus_1: order computation ran away");
      }
    }
    detail::FqCtx ctx{detail::find_irreducible(p, E)};
    FpPoly beta = detail::find_element_of_order(ctx, m);

    std::vector<FpPoly> beta_pow(m, ctx.one());
    for (unsigned long i = 1; i < m; ++i) beta_pow[i] = ctx.mul(beta_pow[i - 1], beta);

    std::vector<bool> seen(m, false);
    for (unsigned long s = 0; s < m; ++s) {
      if (seen[s]) continue;
      std::vector<unsigned long> coset;
      unsigned long cur = s;
      while (!seen[cur]) {
        seen[cur] = true;
        coset.push_back(cur);
        cur = static_cast<unsigned long>(
            detail::mulmod_u64(cur, p % m, m));
      }
      // minimal polynomial of beta^s: prod over the coset of (t - beta^i),
      // computed with coefficients in the extension field
      std::vector<FpPoly> coeffs{ctx.one()};
      for (unsigned long i : coset) {
        std::vector<FpPoly> next(coeffs.size() + 1, FpPoly::zero(p));
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
          next[j + 1] = next[j + 1] + coeffs[j];
          FpPoly minus_root = ctx.mul(coeffs[j], beta_pow[i]);
          next[j] = next[j] - minus_root;
        }
        coeffs = std::move(next);
      }
      std::vector<std::uint64_t> proj(coeffs.size());
      for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j].degree() > 0)
          throw std::logic_error("factor_tn_minus_1: coefficient escaped the prime field");
        proj[j] = coeffs[j].coeff(0);
      }
      factors.emplace_back(FpPoly(p, std::move(proj)), mult);
    }
  }

  std::sort(factors.begin(), factors.end(),
            [](const auto& a, const auto& b) {
              if (a.first.degree() != b.first.degree())
                return a.first.degree() < b.first.degree();
              return a.first.coeffs() < b.first.coeffs();
            });

  // safety: the factored product must reassemble exactly
  FpPoly prod = FpPoly::one(p);
  for (const auto& [w, e] : factors)
    for (long i = 0; i < e; ++i) prod = prod * w;
  if (prod != FpPoly::t_pow_minus_one(p, n))
    throw std::logic_error("factor_tn_minus_1: product check failed");
  return factors;
}

// Order of f at a place: multiplicity of w for finite places, -deg(f) at the
// infinite place (so the normalized absolute value below is uniform).
inline long ord_at_place(const FpPoly& f, const Place& v) {
  if (f.is_zero()) throw invariant_error("ord_at_place: zero polynomial");
  if (f.prime() != v.prime())
    throw invariant_error("ord_at_place: characteristic mismatch");
  if (v.is_infinite()) return -f.degree();
  long count = 0;
  FpPoly g = f;
  while (true) {
    auto [q, r] = divmod(g, v.poly());
    if (!r.is_zero()) break;
    g = q;
    ++count;
  }
  return count;
}

// |f|_v = p^(-ord_v(f) * deg v); at the infinite place this is p^deg(f).
inline Rat abs_at_place(const FpPoly& f, const Place& v) {
  long e = ord_at_place(f, v) * v.degree();
  BigInt p(static_cast<unsigned long>(v.prime()));
  if (e >= 0) return make_rat(1, pow_int(p, static_cast<unsigned long>(e)));
  return Rat(pow_int(p, static_cast<unsigned long>(-e)));
}

// Least l >= 1 with t^l = 1 mod w, i.e. the order of t in the residue field.
inline BigInt mult_order_of_t(const FpPoly& w) {
  if (w.degree() < 1 || !w.is_monic() || !is_irreducible(w))
    throw invariant_error("mult_order_of_t: monic irreducible polynomial required");
  if (w.coeff(0) == 0)
    throw invariant_error("mult_order_of_t: t vanishes at the place (t)");
  BigInt group =
      pow_int(BigInt(static_cast<unsigned long>(w.prime())),
              static_cast<unsigned long>(w.degree())) - 1;
  if (!group.fits_ulong_p() || group.get_ui() > (1ull << 62))
    throw invariant_error("mult_order_of_t: residue field too large for divisor scan");
  FpPoly t = FpPoly::t(w.prime());
  FpPoly one = FpPoly::one(w.prime());
  for (std::uint64_t l : divisors_u64(group.get_ui())) {
    if (powmod(t, l, w) == one) return BigInt(l);
  }
  throw std::logic_error("mult_order_of_t: no divisor matched");
}

}  // namespace rzeta
