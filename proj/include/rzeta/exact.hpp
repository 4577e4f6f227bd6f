#pragma once

// Exact arithmetic substrate: arbitrary-precision integers and rationals
// (GMP-backed), p-adic valuations, and the extended naturals used for
// twisted-conjugacy counts, which are positive integers or infinity.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rzeta {

using BigInt = mpz_class;
using Rat = mpq_class;

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invariant_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when an iterate has infinitely many twisted conjugacy classes but a
// finite count (or a full zeta window) was required.
struct not_tame_error : std::runtime_error {
  unsigned long n;
  not_tame_error(unsigned long bad_n, const std::string& msg)
      : std::runtime_error(msg), n(bad_n) {}
};

// Canonical rational: reduced, denominator positive.
inline Rat make_rat(BigInt num, BigInt den) {
  if (sgn(den) == 0) throw invariant_error("make_rat: zero denominator");
  Rat q(std::move(num), std::move(den));
  q.canonicalize();
  return q;
}

inline BigInt pow_int(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline Rat pow_rat(const Rat& base, unsigned long e) {
  return make_rat(pow_int(base.get_num(), e), pow_int(base.get_den(), e));
}

inline BigInt gcd_int(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigInt lcm_int(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace detail

// Deterministic primality for the full 64-bit range: trial division by the
// first primes, then Miller-Rabin with the 12-base certificate set.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                          23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = detail::powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

// Accepts 2 <= p < 2^64 prime; anything larger is out of scope by design.
inline void check_prime(const BigInt& p) {
  if (p < 2) throw invariant_error("prime expected, got " + p.get_str());
  if (!p.fits_ulong_p())
    throw invariant_error("moduli at or above 2^64 are not supported");
  if (!is_prime_u64(p.get_ui()))
    throw invariant_error(p.get_str() + " is not prime");
}

// A non-negative integer or infinity.  Infinity is a legal count of twisted
// conjugacy classes, so it is an explicit state, never a sentinel value.
class ExtNat {
 public:
  ExtNat() : value_(0) {}
  explicit ExtNat(BigInt v) : value_(std::move(v)) {
    if (sgn(value_) < 0) throw invariant_error("ExtNat: negative value");
  }
  explicit ExtNat(unsigned long v) : value_(v) {}

  static ExtNat infinity() {
    ExtNat e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }

  const BigInt& value() const {
    if (infinite_) throw invariant_error("ExtNat: value() called on infinity");
    return value_;
  }

  // Multiplication by a positive value is absorbing for infinity;
  // 0 * infinity has no meaning here and is rejected.
  friend ExtNat operator*(const ExtNat& a, const ExtNat& b) {
    if (a.infinite_ || b.infinite_) {
      if ((!a.infinite_ && sgn(a.value_) == 0) ||
          (!b.infinite_ && sgn(b.value_) == 0))
        throw invariant_error("ExtNat: 0 * infinity is undefined");
      return infinity();
    }
    return ExtNat(a.value_ * b.value_);
  }

  ExtNat& operator*=(const ExtNat& o) { return *this = *this * o; }

  bool operator==(const ExtNat& o) const {
    if (infinite_ != o.infinite_) return false;
    return infinite_ || cmp(value_, o.value_) == 0;
  }
  bool operator!=(const ExtNat& o) const { return !(*this == o); }

  std::string str() const { return infinite_ ? "inf" : value_.get_str(); }

 private:
  bool infinite_ = false;
  BigInt value_;
};

// An integer-valued valuation extended by +infinity (the valuation of 0).
class Valuation {
 public:
  static Valuation infinity() {
    Valuation v;
    v.infinite_ = true;
    return v;
  }
  static Valuation of(long v) {
    Valuation r;
    r.v_ = v;
    return r;
  }
  bool is_infinite() const { return infinite_; }
  long value() const {
    if (infinite_) throw invariant_error("Valuation: value() of infinity");
    return v_;
  }
  bool operator==(const Valuation& o) const {
    return infinite_ == o.infinite_ && (infinite_ || v_ == o.v_);
  }

 private:
  bool infinite_ = false;
  long v_ = 0;
};

// Largest e with p^e | x; infinity iff x = 0.
inline ExtNat vp(const BigInt& x, const BigInt& p) {
  check_prime(p);
  if (sgn(x) == 0) return ExtNat::infinity();
  BigInt reduced;
  unsigned long e =
      mpz_remove(reduced.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
  return ExtNat(BigInt(e));
}

// v_p extended to Q: vp(num) - vp(den); infinity iff x = 0.
inline Valuation vp_rat(const Rat& x, const BigInt& p) {
  check_prime(p);
  if (sgn(x) == 0) return Valuation::infinity();
  BigInt tmp;
  long vn = static_cast<long>(
      mpz_remove(tmp.get_mpz_t(), x.get_num().get_mpz_t(), p.get_mpz_t()));
  long vd = static_cast<long>(
      mpz_remove(tmp.get_mpz_t(), x.get_den().get_mpz_t(), p.get_mpz_t()));
  return Valuation::of(vn - vd);
}

// |x|_p = p^(-v_p(x)) as an exact rational.  x = 0 is rejected: downstream
// code treats a vanishing determinant as an explicit infinite count instead.
inline Rat abs_p(const Rat& x, const BigInt& p) {
  if (sgn(x) == 0) throw invariant_error("abs_p: zero has no finite p-adic absolute value here");
  long v = vp_rat(x, p).value();
  if (v >= 0) return make_rat(1, pow_int(p, static_cast<unsigned long>(v)));
  return Rat(pow_int(p, static_cast<unsigned long>(-v)));
}

namespace detail {

inline std::uint64_t pollard_rho(std::uint64_t n) {
  // n composite with no factor below 1000; returns a nontrivial factor.
  for (std::uint64_t c = 1;; ++c) {
    auto f = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
    std::uint64_t x = 2, y = 2, d = 1;
    do {
      x = f(x);
      y = f(f(y));
      std::uint64_t diff = x > y ? x - y : y - x;
      d = diff == 0 ? n : std::gcd(diff, n);
    } while (d == 1);
    if (d != n) return d;
  }
}

}  // namespace detail

// Factorization of a 64-bit integer, sorted by prime.
inline std::vector<std::pair<std::uint64_t, int>> factor_u64(std::uint64_t n) {
  if (n == 0) throw invariant_error("factor_u64: zero");
  std::vector<std::pair<std::uint64_t, int>> out;
  auto push = [&](std::uint64_t q) {
    for (auto& pr : out)
      if (pr.first == q) {
        ++pr.second;
        return;
      }
    out.emplace_back(q, 1);
  };
  for (std::uint64_t q = 2; q <= 1000 && q * q <= n; q += (q == 2 ? 1 : 2)) {
    while (n % q == 0) {
      push(q);
      n /= q;
    }
  }
  std::vector<std::uint64_t> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    std::uint64_t m = stack.back();
    stack.pop_back();
    if (m == 1) continue;
    if (is_prime_u64(m)) {
      push(m);
      continue;
    }
    std::uint64_t d = detail::pollard_rho(m);
    stack.push_back(d);
    stack.push_back(m / d);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// All divisors of n, ascending.
inline std::vector<std::uint64_t> divisors_u64(std::uint64_t n) {
  auto fac = factor_u64(n);
  std::vector<std::uint64_t> divs{1};
  for (auto [q, e] : fac) {
    std::size_t base = divs.size();
    std::uint64_t qe = 1;
    for (int i = 1; i <= e; ++i) {
      qe *= q;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * qe);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

inline unsigned long euler_phi(unsigned long m) {
  if (m == 0) throw invariant_error("euler_phi: zero");
  std::uint64_t r = m;
  for (auto [q, e] : factor_u64(m)) {
    (void)e;
    r -= r / q;
  }
  return static_cast<unsigned long>(r);
}

}  // namespace rzeta
