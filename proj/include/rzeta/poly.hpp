#pragma once

// Dense univariate polynomials over exact coefficient rings.  Integer
// polynomials carry characteristic polynomials and zeta numerators and
// denominators; rational polynomials carry Sturm chains and Euclidean
// remainder sequences.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rzeta/exact.hpp"

namespace rzeta {

template <class T>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<T> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static Poly constant(T v) { return Poly(std::vector<T>{std::move(v)}); }
  static Poly x() { return Poly(std::vector<T>{T(0), T(1)}); }

  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  T coeff(long i) const {
    if (i < 0 || i > degree()) return T(0);
    return c_[static_cast<std::size_t>(i)];
  }

  const std::vector<T>& coeffs() const { return c_; }

  const T& leading() const {
    if (is_zero()) throw invariant_error("Poly: leading coefficient of zero");
    return c_.back();
  }

  bool operator==(const Poly& o) const { return c_ == o.c_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<T> v(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = a.coeff(static_cast<long>(i)) + b.coeff(static_cast<long>(i));
    return Poly(std::move(v));
  }

  friend Poly operator-(const Poly& a, const Poly& b) {
    std::vector<T> v(std::max(a.c_.size(), b.c_.size()), T(0));
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = a.coeff(static_cast<long>(i)) - b.coeff(static_cast<long>(i));
    return Poly(std::move(v));
  }

  Poly operator-() const {
    std::vector<T> v(c_);
    for (auto& c : v) c = -c;
    return Poly(std::move(v));
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<T> v(a.c_.size() + b.c_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i] == 0) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(v));
  }

  Poly scaled(const T& s) const {
    std::vector<T> v(c_);
    for (auto& c : v) c *= s;
    return Poly(std::move(v));
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<T> v(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) v[i - 1] = c_[i] * T(static_cast<long>(i));
    return Poly(std::move(v));
  }

  template <class X>
  X eval(const X& x) const {
    X acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + X(c_[i]);
    return acc;
  }

  // z -> -z
  Poly alternate_signs() const {
    std::vector<T> v(c_);
    for (std::size_t i = 1; i < v.size(); i += 2) v[i] = -v[i];
    return Poly(std::move(v));
  }

  std::string str(const char* var = "X") const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      if (!out.empty()) out += " + ";
      out += coeff_str(c_[i]);
      if (i >= 1) {
        out += "*";
        out += var;
        if (i > 1) out += "^" + std::to_string(i);
      }
    }
    return out;
  }

 private:
  std::vector<T> c_;

  void normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  static std::string coeff_str(const BigInt& c) { return c.get_str(); }
  static std::string coeff_str(const Rat& c) { return c.get_str(); }
};

using IPoly = Poly<BigInt>;
using QPoly = Poly<Rat>;

inline QPoly to_qpoly(const IPoly& a) {
  std::vector<Rat> v;
  v.reserve(static_cast<std::size_t>(a.degree() + 1));
  for (long i = 0; i <= a.degree(); ++i) v.emplace_back(a.coeff(i));
  return QPoly(std::move(v));
}

// Field division with remainder.
inline std::pair<QPoly, QPoly> divmod(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw invariant_error("QPoly: division by zero polynomial");
  if (a.degree() < b.degree()) return {QPoly(), a};
  std::vector<Rat> rem(a.coeffs());
  std::vector<Rat> quo(static_cast<std::size_t>(a.degree() - b.degree() + 1), Rat(0));
  const Rat& lead = b.leading();
  for (long i = a.degree(); i >= b.degree(); --i) {
    Rat c = rem[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    Rat q = c / lead;
    quo[static_cast<std::size_t>(i - b.degree())] = q;
    for (long j = 0; j <= b.degree(); ++j)
      rem[static_cast<std::size_t>(i - b.degree() + j)] -= q * b.coeff(j);
  }
  return {QPoly(std::move(quo)), QPoly(std::move(rem))};
}

inline QPoly gcd_monic(QPoly a, QPoly b) {
  while (!b.is_zero()) {
    QPoly r = divmod(a, b).second;
    a = b;
    b = r;
  }
  if (a.is_zero()) return a;
  Rat inv = Rat(1) / a.leading();
  return a.scaled(inv);
}

inline BigInt content(const IPoly& a) {
  BigInt g(0);
  for (long i = 0; i <= a.degree(); ++i) g = gcd_int(g, a.coeff(i));
  return g;
}

// a / g entrywise; g must divide every coefficient.
inline IPoly primitive_scale(const IPoly& a, const BigInt& g) {
  if (a.is_zero() || g == 1) return a;
  std::vector<BigInt> v(static_cast<std::size_t>(a.degree() + 1));
  for (long i = 0; i <= a.degree(); ++i)
    v[static_cast<std::size_t>(i)] = a.coeff(i) / g;
  return IPoly(std::move(v));
}

inline IPoly primitive_part(const IPoly& a) {
  if (a.is_zero()) return a;
  return primitive_scale(a, content(a));
}

// Pseudo-division over Z: lc(b)^(deg a - deg b + 1) * a = q * b + r with
// deg r < deg b.  Requires deg a >= deg b >= 0.
inline std::pair<IPoly, IPoly> pseudo_divmod(const IPoly& a, const IPoly& b) {
  if (b.is_zero()) throw invariant_error("pseudo_divmod: zero divisor");
  long da = a.degree(), db = b.degree();
  if (da < db) throw invariant_error("pseudo_divmod: dividend degree too small");
  const BigInt& d = b.leading();
  IPoly q;
  IPoly r = a;
  long e = da - db + 1;
  while (!r.is_zero() && r.degree() >= db) {
    std::vector<BigInt> tc(static_cast<std::size_t>(r.degree() - db + 1), BigInt(0));
    tc.back() = r.leading();
    IPoly t{std::move(tc)};
    q = q.scaled(d) + t;
    r = r.scaled(d) - t * b;
    --e;
  }
  if (e > 0) {
    BigInt f(1);
    for (long i = 0; i < e; ++i) f *= d;
    q = q.scaled(f);
    r = r.scaled(f);
  }
  return {std::move(q), std::move(r)};
}

// Integer multiple of a rational polynomial with coprime coefficients;
// sign of the leading coefficient is preserved.
inline IPoly clear_denominators(const QPoly& a) {
  if (a.is_zero()) return IPoly();
  BigInt l(1);
  for (long i = 0; i <= a.degree(); ++i) l = lcm_int(l, a.coeff(i).get_den());
  std::vector<BigInt> v(static_cast<std::size_t>(a.degree() + 1));
  for (long i = 0; i <= a.degree(); ++i) {
    Rat scaled = a.coeff(i) * Rat(l);
    if (scaled.get_den() != 1) throw std::logic_error("clear_denominators: not integral");
    v[static_cast<std::size_t>(i)] = scaled.get_num();
  }
  IPoly out{std::move(v)};
  BigInt c = content(out);
  if (c > 1) {
    std::vector<BigInt> w(static_cast<std::size_t>(out.degree() + 1));
    for (long i = 0; i <= out.degree(); ++i)
      w[static_cast<std::size_t>(i)] = out.coeff(i) / c;
    out = IPoly(std::move(w));
  }
  return out;
}

// Primitive gcd with positive leading coefficient, via the primitive
// pseudo-remainder sequence (integer arithmetic throughout).
inline IPoly ipoly_gcd(IPoly a, IPoly b) {
  auto normalized = [](IPoly p) {
    p = primitive_part(p);
    if (!p.is_zero() && sgn(p.leading()) < 0) p = -p;
    return p;
  };
  if (a.is_zero()) return normalized(std::move(b));
  if (b.is_zero()) return normalized(std::move(a));
  a = primitive_part(a);
  b = primitive_part(b);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    IPoly r = pseudo_divmod(a, b).second;
    a = std::move(b);
    b = primitive_part(r);
  }
  return normalized(std::move(a));
}

inline std::optional<IPoly> divide_exact(const IPoly& a, const IPoly& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.is_zero()) return IPoly();
  auto [q, r] = divmod(to_qpoly(a), to_qpoly(b));
  if (!r.is_zero()) return std::nullopt;
  std::vector<BigInt> v(static_cast<std::size_t>(q.degree() + 1));
  for (long i = 0; i <= q.degree(); ++i) {
    if (q.coeff(i).get_den() != 1) return std::nullopt;
    v[static_cast<std::size_t>(i)] = q.coeff(i).get_num();
  }
  return IPoly(std::move(v));
}

// m-th cyclotomic polynomial, by exact division of x^m - 1 by the proper
// cyclotomic divisors.
inline IPoly cyclotomic(unsigned long m) {
  if (m == 0) throw invariant_error("cyclotomic: index must be positive");
  std::vector<BigInt> xm(m + 1, BigInt(0));
  xm[0] = -1;
  xm[m] = 1;
  IPoly num{std::move(xm)};
  if (m == 1) return num;
  for (unsigned long d = 1; d < m; ++d) {
    if (m % d != 0) continue;
    auto q = divide_exact(num, cyclotomic(d));
    if (!q) throw std::logic_error("cyclotomic: division failed");
    num = *q;
  }
  return num;
}

}  // namespace rzeta
