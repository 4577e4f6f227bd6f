#pragma once

// Formal zeta series over Q, exact linear-recurrence detection, rational
// reconstruction through Euclidean Pade approximants, and the toral Lefschetz
// zeta function with its twisted-count identity.

#include <optional>
#include <utility>
#include <vector>

#include "rzeta/exact.hpp"
#include "rzeta/intmat.hpp"
#include "rzeta/poly.hpp"

namespace rzeta {

// Truncated power series c_0..c_N with exact rational coefficients.
class QSeries {
 public:
  QSeries() : c_(1, Rat(0)) {}
  explicit QSeries(std::vector<Rat> c) : c_(std::move(c)) {
    if (c_.empty()) throw invariant_error("QSeries: needs at least the constant term");
  }

  std::size_t order() const { return c_.size() - 1; }
  const Rat& coeff(std::size_t i) const {
    if (i >= c_.size()) throw invariant_error("QSeries: coefficient beyond window");
    return c_[i];
  }
  const std::vector<Rat>& coeffs() const { return c_; }

  bool operator==(const QSeries& o) const { return c_ == o.c_; }

 private:
  std::vector<Rat> c_;
};

// Quotient of coprime integer polynomials with den(0) = 1; the canonical
// closed form of a zeta function.  Construction fails (nullopt) when the
// input cannot be normalized that way.
class RationalFn {
 public:
  static std::optional<RationalFn> make(const IPoly& num_in, const IPoly& den_in) {
    return normalize(num_in, den_in, /*reduce_poly_gcd=*/true);
  }

  // For callers that already know the pair shares no nonconstant factor
  // (consecutive Euclidean remainder/cofactor pairs, for instance); skips
  // the polynomial gcd and only normalizes content and sign.
  static std::optional<RationalFn> make_coprime(const IPoly& num_in,
                                                const IPoly& den_in) {
    return normalize(num_in, den_in, /*reduce_poly_gcd=*/false);
  }

  static RationalFn one() {
    auto f = make(IPoly::constant(BigInt(1)), IPoly::constant(BigInt(1)));
    return *f;
  }

  const IPoly& num() const { return num_; }
  const IPoly& den() const { return den_; }

  bool operator==(const RationalFn& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RationalFn& o) const { return !(*this == o); }

  QSeries expand(std::size_t order) const {
    std::vector<Rat> s(order + 1, Rat(0));
    for (std::size_t n = 0; n <= order; ++n) {
      Rat acc(num_.coeff(static_cast<long>(n)));
      for (std::size_t j = 1; j <= n; ++j)
        acc -= Rat(den_.coeff(static_cast<long>(j))) * s[n - j];
      s[n] = acc;  // den(0) == 1
    }
    return QSeries(std::move(s));
  }

  // Incremental comparison against a target window; stops at the first
  // mismatching coefficient.
  bool expands_to(const QSeries& target) const {
    std::size_t order = target.order();
    std::vector<Rat> s(order + 1, Rat(0));
    for (std::size_t n = 0; n <= order; ++n) {
      Rat acc(num_.coeff(static_cast<long>(n)));
      for (std::size_t j = 1; j <= n; ++j)
        acc -= Rat(den_.coeff(static_cast<long>(j))) * s[n - j];
      if (acc != target.coeff(n)) return false;
      s[n] = std::move(acc);
    }
    return true;
  }

  std::optional<RationalFn> reciprocal() const {
    if (num_.is_zero()) return std::nullopt;
    return make(den_, num_);
  }

  RationalFn substitute_neg() const {
    auto f = make(num_.alternate_signs(), den_.alternate_signs());
    if (!f) throw std::logic_error("RationalFn: sign substitution lost normal form");
    return *f;
  }

  friend std::optional<RationalFn> operator*(const RationalFn& a, const RationalFn& b) {
    return make(a.num_ * b.num_, a.den_ * b.den_);
  }

  std::string str(const char* var = "z") const {
    return "(" + num_.str(var) + ") / (" + den_.str(var) + ")";
  }

 private:
  IPoly num_, den_;

  static std::optional<RationalFn> normalize(const IPoly& num_in, const IPoly& den_in,
                                             bool reduce_poly_gcd) {
    if (den_in.is_zero()) return std::nullopt;
    IPoly num = num_in, den = den_in;
    if (reduce_poly_gcd && !num.is_zero()) {
      IPoly g = ipoly_gcd(num, den);
      if (g.degree() >= 1) {
        auto qn = divide_exact(num, g);
        auto qd = divide_exact(den, g);
        if (!qn || !qd) return std::nullopt;
        num = *qn;
        den = *qd;
      }
    }
    BigInt cn = content(num), cd = content(den);
    BigInt c = num.is_zero() ? cd : gcd_int(cn, cd);
    if (c > 1) {
      num = primitive_scale(num, c);
      den = primitive_scale(den, c);
    }
    if (den.coeff(0) == -1) {
      num = -num;
      den = -den;
    }
    if (den.coeff(0) != 1) return std::nullopt;
    RationalFn f;
    f.num_ = std::move(num);
    f.den_ = std::move(den);
    return f;
  }
};

// exp(sum_{n>=1} R(n) z^n / n) through order N, via the logarithmic
// derivative recurrence.  counts[i] holds R(i+1); every value in the window
// must be finite.
inline QSeries zeta_series(const std::vector<ExtNat>& counts, std::size_t order) {
  if (counts.size() < order)
    throw invariant_error("zeta_series: window shorter than requested order");
  for (std::size_t n = 1; n <= order; ++n)
    if (counts[n - 1].is_infinite())
      throw not_tame_error(static_cast<unsigned long>(n),
                           "zeta series undefined: infinite count at n = " +
                               std::to_string(n));
  std::vector<Rat> f(order + 1, Rat(0));
  f[0] = 1;
  for (std::size_t k = 1; k <= order; ++k) {
    Rat acc(0);
    for (std::size_t m = 1; m <= k; ++m)
      acc += Rat(counts[m - 1].value()) * f[k - m];
    f[k] = acc / Rat(static_cast<unsigned long>(k));
  }
  return QSeries(std::move(f));
}

struct BerlekampMasseyResult {
  std::size_t order = 0;
  QPoly connection;                     // C(z), constant term 1
  std::optional<RationalFn> gen_fn;     // z-indexed generating function of a_1, a_2, ...
  bool tail_validated = false;          // recurrence from the first 3/4 predicts the rest
};

namespace detail {

inline QPoly bm_connection(const std::vector<Rat>& s, std::size_t* order_out) {
  QPoly c = QPoly::constant(Rat(1));
  QPoly b = QPoly::constant(Rat(1));
  std::size_t l = 0, m = 1;
  Rat bb(1);
  for (std::size_t n = 0; n < s.size(); ++n) {
    Rat delta = s[n];
    for (std::size_t i = 1; i <= l; ++i)
      delta += c.coeff(static_cast<long>(i)) * s[n - i];
    if (sgn(delta) == 0) {
      ++m;
      continue;
    }
    QPoly shift{[&] {
      std::vector<Rat> v(m + 1, Rat(0));
      v[m] = delta / bb;
      return v;
    }()};
    if (2 * l <= n) {
      QPoly t = c;
      c = c - shift * b;
      b = t;
      l = n + 1 - l;
      bb = delta;
      m = 1;
    } else {
      c = c - shift * b;
      ++m;
    }
  }
  if (order_out) *order_out = l;
  return c;
}

inline bool lfsr_predicts(const QPoly& c, std::size_t order,
                          const std::vector<Rat>& s, std::size_t from) {
  if (order > from) return false;
  for (std::size_t n = from; n < s.size(); ++n) {
    Rat acc(0);
    for (std::size_t i = 1; i <= order; ++i)
      acc -= c.coeff(static_cast<long>(i)) * s[n - i];
    if (acc != s[n]) return false;
  }
  return true;
}

}  // namespace detail

// Shortest linear recurrence fitting the window a_1, a_2, ... (values[i] is
// a_{i+1}), plus the generating function z*P(z)/C(z) of sum a_n z^n when it
// normalizes to integer form.
inline BerlekampMasseyResult berlekamp_massey(const std::vector<Rat>& values) {
  if (values.size() < 4)
    throw invariant_error("berlekamp_massey: window of at least 4 values required");
  BerlekampMasseyResult res;
  res.connection = detail::bm_connection(values, &res.order);

  // numerator fixing the initial terms: P = (S * C) mod z^order
  std::vector<Rat> p(res.order, Rat(0));
  for (std::size_t k = 0; k < res.order; ++k) {
    Rat acc(0);
    for (std::size_t j = 0; j <= k; ++j)
      acc += res.connection.coeff(static_cast<long>(j)) * values[k - j];
    p[k] = acc;
  }
  QPoly pnum{std::move(p)};
  // shift by one: the sequence is indexed from n = 1
  std::vector<Rat> shifted(static_cast<std::size_t>(pnum.degree() + 2), Rat(0));
  for (long i = 0; i <= pnum.degree(); ++i)
    shifted[static_cast<std::size_t>(i + 1)] = pnum.coeff(i);
  QPoly znum{res.order == 0 ? std::vector<Rat>{} : std::move(shifted)};

  // joint integer normalization
  BigInt l(1);
  for (long i = 0; i <= znum.degree(); ++i) l = lcm_int(l, znum.coeff(i).get_den());
  for (long i = 0; i <= res.connection.degree(); ++i)
    l = lcm_int(l, res.connection.coeff(i).get_den());
  auto lift = [&](const QPoly& q) {
    std::vector<BigInt> v(static_cast<std::size_t>(q.degree() + 1));
    for (long i = 0; i <= q.degree(); ++i) {
      Rat s = q.coeff(i) * Rat(l);
      v[static_cast<std::size_t>(i)] = s.get_num();
    }
    return IPoly(std::move(v));
  };
  res.gen_fn = RationalFn::make(lift(znum), lift(res.connection));

  std::size_t head = (values.size() * 3) / 4;
  if (head >= 4) {
    std::vector<Rat> prefix(values.begin(), values.begin() + static_cast<long>(head));
    std::size_t head_order = 0;
    QPoly head_c = detail::bm_connection(prefix, &head_order);
    res.tail_validated = detail::lfsr_predicts(head_c, head_order, values, head);
  }
  return res;
}

// Minimal exact rational representation of the series, scanned over the
// Euclidean Pade table with total degree budget N - 4.  The remainder
// sequence runs in integer arithmetic (pseudo-division with joint content
// stripping; a pair scales freely without changing the approximant it
// represents).  Every returned function re-expands to the entire window; no
// candidate is accepted on partial agreement.
inline std::optional<RationalFn> pade_reconstruct(const QSeries& s) {
  std::size_t n = s.order();
  if (n < 8) throw invariant_error("pade_reconstruct: series order of at least 8 required");
  long budget = static_cast<long>(n) - 4;

  // an admissible closed form has integer coefficients and den(0) = 1, so it
  // re-expands to integers; a non-integral series can match no candidate
  for (const auto& c : s.coeffs())
    if (c.get_den() != 1) return std::nullopt;

  IPoly r_prev{[&] {
    std::vector<BigInt> v(n + 2, BigInt(0));
    v[n + 1] = 1;
    return v;
  }()};  // z^(N+1)
  IPoly r_cur{[&] {
    std::vector<BigInt> v(n + 1);
    for (std::size_t i = 0; i <= n; ++i) v[i] = s.coeff(i).get_num();
    return v;
  }()};
  // remainders stay integer and primitive (polynomial coefficient growth);
  // cofactors ride along over Q, divided by the same scalars
  QPoly v_prev;  // 0
  QPoly v_cur = QPoly::constant(Rat(1));

  struct Candidate {
    IPoly num, den;
  };
  std::vector<Candidate> candidates;

  auto consider = [&](const IPoly& r, const QPoly& v) {
    if (v.is_zero()) return;
    BigInt l(1);
    for (long i = 0; i <= v.degree(); ++i) l = lcm_int(l, v.coeff(i).get_den());
    std::vector<BigInt> dc(static_cast<std::size_t>(v.degree() + 1));
    for (long i = 0; i <= v.degree(); ++i) {
      Rat sc = v.coeff(i) * Rat(l);
      dc[static_cast<std::size_t>(i)] = sc.get_num();
    }
    candidates.push_back({r.scaled(l), IPoly(std::move(dc))});
  };

  consider(r_cur, v_cur);
  while (!r_cur.is_zero() && r_prev.degree() >= r_cur.degree()) {
    auto [q, rem] = pseudo_divmod(r_prev, r_cur);
    const BigInt& d = r_cur.leading();
    BigInt f(1);
    for (long i = 0; i < r_prev.degree() - r_cur.degree() + 1; ++i) f *= d;
    QPoly v_next = v_prev.scaled(Rat(f)) - to_qpoly(q) * v_cur;
    BigInt c = content(rem);
    if (c > 1) {
      rem = primitive_scale(rem, c);
      v_next = v_next.scaled(make_rat(1, c));
    }
    r_prev = std::exchange(r_cur, std::move(rem));
    v_prev = std::exchange(v_cur, std::move(v_next));
    consider(r_cur, v_cur);
  }

  // consecutive remainder/cofactor pairs share only constant factors (any
  // common divisor divides a constant multiple of z^(N+1), and candidates
  // with den(0) = 0 fail normalization), so the polynomial gcd is skipped
  std::vector<std::pair<long, RationalFn>> normalized;
  for (auto& cand : candidates) {
    auto f = RationalFn::make_coprime(cand.num, cand.den);
    if (!f) continue;
    long total = std::max(f->num().degree(), 0L) + std::max(f->den().degree(), 0L);
    if (total > budget) continue;
    normalized.emplace_back(total, *f);
  }
  std::stable_sort(normalized.begin(), normalized.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [total, f] : normalized) {
    (void)total;
    if (f.expands_to(s)) {
      if (ipoly_gcd(f.num(), f.den()).degree() >= 1)
        throw std::logic_error("pade_reconstruct: accepted candidate not coprime");
      return f;
    }
  }
  return std::nullopt;
}

// det(I - M z) as an integer polynomial (the reversed characteristic
// polynomial).
inline IPoly det_one_minus_z(const IMat& m) {
  IPoly cp = charpoly(m);
  long d = cp.degree();
  std::vector<BigInt> v(static_cast<std::size_t>(d + 1));
  for (long i = 0; i <= d; ++i) v[static_cast<std::size_t>(i)] = cp.coeff(d - i);
  return IPoly(std::move(v));
}

// Alternating product of det(I - z * induced map on the k-th exterior power):
// the Lefschetz zeta function of the toral map with linearization F.
inline RationalFn lefschetz_zeta(const IMat& f) {
  IPoly num = IPoly::constant(BigInt(1));
  IPoly den = IPoly::constant(BigInt(1));
  for (std::size_t k = 0; k <= f.dim(); ++k) {
    IPoly factor = det_one_minus_z(exterior_power(f, k));
    if (k % 2 == 1)
      num = num * factor;
    else
      den = den * factor;
  }
  auto r = RationalFn::make(num, den);
  if (!r) throw std::logic_error("lefschetz_zeta: normalization failed");
  return *r;
}

struct LefschetzIdentityReport {
  bool ok = false;
  long p = 0;  // real eigenvalues < -1
  long r = 0;  // real eigenvalues with |mu| > 1
  RationalFn reconstructed = RationalFn::one();
  RationalFn lefschetz_side = RationalFn::one();
};

// Checks that the zeta function built from the counts |det(F^n - I)| equals
// the Lefschetz zeta function evaluated at (-1)^p z and raised to (-1)^r.
inline LefschetzIdentityReport verify_nilpotent_identity(const IMat& f,
                                                         std::size_t window = 32) {
  unsigned long order = 0;
  if (!is_tame_matrix(f, &order))
    throw invariant_error("verify_nilpotent_identity: eigenvalue of finite order " +
                          std::to_string(order));
  RealEigCounts counts = count_real_eigs(charpoly(f));

  std::vector<ExtNat> seq;
  seq.reserve(window);
  IMat id = IMat::identity(f.dim());
  for (std::size_t n = 1; n <= window; ++n)
    seq.push_back(coker_order(f.pow(static_cast<unsigned long>(n)) - id));
  auto reconstructed = pade_reconstruct(zeta_series(seq, window));
  if (!reconstructed)
    throw std::logic_error(
        "verify_nilpotent_identity: reconstruction failed; enlarge the window");

  RationalFn rhs = lefschetz_zeta(f);
  if (counts.below_minus_one % 2 != 0) rhs = rhs.substitute_neg();
  if (counts.outside_unit % 2 != 0) {
    auto inv = rhs.reciprocal();
    if (!inv) throw std::logic_error("verify_nilpotent_identity: reciprocal failed");
    rhs = *inv;
  }

  LefschetzIdentityReport rep;
  rep.ok = (*reconstructed == rhs);
  rep.p = counts.below_minus_one;
  rep.r = counts.outside_unit;
  rep.reconstructed = *reconstructed;
  rep.lefschetz_side = rhs;
  return rep;
}

}  // namespace rzeta
