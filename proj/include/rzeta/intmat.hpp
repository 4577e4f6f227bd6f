#pragma once

// Exact linear algebra on Z^d and Q^d: fraction-free determinants,
// characteristic polynomials, Smith normal form, exterior powers, and Sturm
// counts of real eigenvalue locations.

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "rzeta/exact.hpp"
#include "rzeta/poly.hpp"

namespace rzeta {

template <class T>
class Mat {
 public:
  Mat() = default;
  explicit Mat(std::size_t d) : d_(d), a_(d * d, T(0)) {
    if (d == 0) throw invariant_error("Mat: dimension must be positive");
  }

  static Mat identity(std::size_t d) {
    Mat m(d);
    for (std::size_t i = 0; i < d; ++i) m.at(i, i) = T(1);
    return m;
  }

  static Mat from_rows(const std::vector<std::vector<T>>& rows) {
    std::size_t d = rows.size();
    Mat m(d);
    for (std::size_t i = 0; i < d; ++i) {
      if (rows[i].size() != d) throw invariant_error("Mat: ragged rows");
      for (std::size_t j = 0; j < d; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t dim() const { return d_; }

  T& at(std::size_t i, std::size_t j) { return a_[i * d_ + j]; }
  const T& at(std::size_t i, std::size_t j) const { return a_[i * d_ + j]; }

  bool operator==(const Mat& o) const { return d_ == o.d_ && a_ == o.a_; }
  bool operator!=(const Mat& o) const { return !(*this == o); }

  friend Mat operator+(const Mat& a, const Mat& b) {
    a.match(b);
    Mat r(a.d_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] + b.a_[i];
    return r;
  }

  friend Mat operator-(const Mat& a, const Mat& b) {
    a.match(b);
    Mat r(a.d_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) r.a_[i] = a.a_[i] - b.a_[i];
    return r;
  }

  friend Mat operator*(const Mat& a, const Mat& b) {
    a.match(b);
    Mat r(a.d_);
    for (std::size_t i = 0; i < a.d_; ++i)
      for (std::size_t k = 0; k < a.d_; ++k) {
        const T& aik = a.at(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < a.d_; ++j) r.at(i, j) += aik * b.at(k, j);
      }
    return r;
  }

  Mat scaled(const T& s) const {
    Mat r(d_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
    return r;
  }

  Mat pow(const BigInt& e) const {
    if (sgn(e) < 0) throw invariant_error("Mat: negative power");
    Mat result = identity(d_);
    if (sgn(e) == 0) return result;
    std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (std::size_t i = bits; i-- > 0;) {
      result = result * result;
      if (mpz_tstbit(e.get_mpz_t(), i)) result = result * (*this);
    }
    return result;
  }

  Mat pow(unsigned long e) const { return pow(BigInt(e)); }

  T trace() const {
    T t(0);
    for (std::size_t i = 0; i < d_; ++i) t += at(i, i);
    return t;
  }

 private:
  std::size_t d_ = 0;
  std::vector<T> a_;

  void match(const Mat& o) const {
    if (d_ != o.d_) throw invariant_error("Mat: dimension mismatch");
  }
};

using IMat = Mat<BigInt>;
using QMat = Mat<Rat>;

namespace detail {

inline BigInt exact_div(const BigInt& a, const BigInt& b) {
  BigInt q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Rat exact_div(const Rat& a, const Rat& b) { return a / b; }

}  // namespace detail

// Fraction-free (Bareiss) determinant; exact for integer and rational entries.
template <class T>
T det(const Mat<T>& m) {
  std::size_t n = m.dim();
  Mat<T> a = m;
  T denom(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a.at(k, k) == 0) {
      std::size_t pivot = k;
      for (std::size_t i = k + 1; i < n; ++i)
        if (a.at(i, k) != 0) {
          pivot = i;
          break;
        }
      if (pivot == k) return T(0);
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(pivot, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a.at(i, j) =
            detail::exact_div(a.at(k, k) * a.at(i, j) - a.at(i, k) * a.at(k, j), denom);
    denom = a.at(k, k);
  }
  T result = a.at(n - 1, n - 1);
  return sign < 0 ? T(-result) : result;
}

// Monic characteristic polynomial via the trace recurrence; the divisions are
// exact because the coefficients are integers of the same ring.
template <class T>
Poly<T> charpoly(const Mat<T>& m) {
  std::size_t d = m.dim();
  std::vector<T> c(d + 1, T(0));
  c[d] = T(1);
  Mat<T> b = Mat<T>::identity(d);
  for (std::size_t k = 1; k <= d; ++k) {
    b = m * b;
    T ck = detail::exact_div(-b.trace(), T(static_cast<long>(k)));
    c[d - k] = ck;
    if (k < d) {
      for (std::size_t i = 0; i < d; ++i) b.at(i, i) += ck;
    }
  }
  return Poly<T>(std::move(c));
}

struct SmithForm {
  IMat u, d, v;  // u * input * v == d, u and v unimodular
};

// Gcd-driven reduction.  Pivot selection (smallest nonzero absolute value,
// first in row-major order on ties) is fixed so outputs are reproducible.
inline SmithForm smith_normal_form(const IMat& m) {
  std::size_t n = m.dim();
  SmithForm s{IMat::identity(n), m, IMat::identity(n)};
  IMat& d = s.d;

  auto swap_rows = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < n; ++j) {
      std::swap(d.at(a, j), d.at(b, j));
      std::swap(s.u.at(a, j), s.u.at(b, j));
    }
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < n; ++i) {
      std::swap(d.at(i, a), d.at(i, b));
      std::swap(s.v.at(i, a), s.v.at(i, b));
    }
  };
  auto add_row = [&](std::size_t dst, std::size_t src, const BigInt& f) {
    for (std::size_t j = 0; j < n; ++j) {
      d.at(dst, j) += f * d.at(src, j);
      s.u.at(dst, j) += f * s.u.at(src, j);
    }
  };
  auto add_col = [&](std::size_t dst, std::size_t src, const BigInt& f) {
    for (std::size_t i = 0; i < n; ++i) {
      d.at(i, dst) += f * d.at(i, src);
      s.v.at(i, dst) += f * s.v.at(i, src);
    }
  };

  for (std::size_t t = 0; t < n; ++t) {
    while (true) {
      // smallest nonzero |entry| in the trailing block
      bool found = false;
      std::size_t pi = t, pj = t;
      BigInt best;
      for (std::size_t i = t; i < n; ++i)
        for (std::size_t j = t; j < n; ++j) {
          if (d.at(i, j) == 0) continue;
          BigInt a = abs(d.at(i, j));
          if (!found || a < best) {
            found = true;
            best = a;
            pi = i;
            pj = j;
          }
        }
      if (!found) {
        t = n;  // trailing block is zero
        break;
      }
      swap_rows(t, pi);
      swap_cols(t, pj);

      bool clean = true;
      for (std::size_t i = t + 1; i < n; ++i) {
        if (d.at(i, t) == 0) continue;
        BigInt q = d.at(i, t) / d.at(t, t);  // truncated; remainder reduced next pass
        add_row(i, t, -q);
        if (d.at(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (d.at(t, j) == 0) continue;
        BigInt q = d.at(t, j) / d.at(t, t);
        add_col(j, t, -q);
        if (d.at(t, j) != 0) clean = false;
      }
      if (!clean) continue;

      // pivot must divide the remaining block for the divisibility chain
      bool divides = true;
      for (std::size_t i = t + 1; i < n && divides; ++i)
        for (std::size_t j = t + 1; j < n && divides; ++j)
          if (d.at(i, j) % d.at(t, t) != 0) {
            add_row(t, i, BigInt(1));
            divides = false;
          }
      if (divides) break;
    }
    if (t == n) break;
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (sgn(d.at(i, i)) < 0) {
      for (std::size_t j = 0; j < n; ++j) {
        d.at(i, j) = -d.at(i, j);
        s.u.at(i, j) = -s.u.at(i, j);
      }
    }
  }
  return s;
}

// |coker(M)| = |det M| when nonzero, infinity otherwise; the Smith diagonal
// product is recomputed as a consistency check.
inline ExtNat coker_order(const IMat& m) {
  BigInt dt = det(m);
  if (sgn(dt) == 0) return ExtNat::infinity();
  SmithForm s = smith_normal_form(m);
  BigInt prod(1);
  for (std::size_t i = 0; i < m.dim(); ++i) prod *= s.d.at(i, i);
  if (prod != abs(dt))
    throw std::logic_error("coker_order: Smith diagonal disagrees with determinant");
  return ExtNat(abs(dt));
}

// |coker(A^n - B^n)|: the number of coincidence Reidemeister classes on Z^d.
inline ExtNat coincidence_R(const IMat& a, const IMat& b, unsigned long n) {
  if (a.dim() != b.dim()) throw invariant_error("coincidence_R: dimension mismatch");
  if (n == 0) throw invariant_error("coincidence_R: n must be positive");
  return coker_order(a.pow(n) - b.pow(n));
}

namespace detail {

inline void k_subsets(std::size_t d, std::size_t k, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur(k);
  // lexicographic enumeration of sorted k-subsets of {0..d-1}
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  if (k == 0) {
    out.push_back({});
    return;
  }
  if (k > d) return;
  while (true) {
    out.push_back(cur);
    long i = static_cast<long>(k) - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] ==
                         d - k + static_cast<std::size_t>(i))
      --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (std::size_t j = static_cast<std::size_t>(i) + 1; j < k; ++j)
      cur[j] = cur[j - 1] + 1;
  }
}

}  // namespace detail

// Matrix of k-by-k minors, rows and columns indexed by sorted k-subsets in
// lexicographic order; this is the induced map on the k-th exterior power.
inline IMat exterior_power(const IMat& m, std::size_t k) {
  std::size_t d = m.dim();
  if (k > d) throw invariant_error("exterior_power: k exceeds dimension");
  std::vector<std::vector<std::size_t>> subsets;
  detail::k_subsets(d, k, subsets);
  IMat out(subsets.size());
  for (std::size_t r = 0; r < subsets.size(); ++r)
    for (std::size_t c = 0; c < subsets.size(); ++c) {
      if (k == 0) {
        out.at(r, c) = 1;
        continue;
      }
      IMat minor(k);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          minor.at(i, j) = m.at(subsets[r][i], subsets[c][j]);
      out.at(r, c) = det(minor);
    }
  return out;
}

namespace detail {

inline int sign_of(const Rat& x) { return sgn(x); }

// Sturm chain of a squarefree rational polynomial.
inline std::vector<QPoly> sturm_chain(const QPoly& q) {
  std::vector<QPoly> chain{q, q.derivative()};
  while (!chain.back().is_zero() && chain.back().degree() >= 0) {
    const QPoly& a = chain[chain.size() - 2];
    const QPoly& b = chain.back();
    if (b.is_zero()) break;
    QPoly r = divmod(a, b).second;
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  return chain;
}

enum class AtPoint { MinusInf, PlusInf, Value };

inline int chain_sign(const QPoly& f, AtPoint where, const Rat& x) {
  if (f.is_zero()) return 0;
  switch (where) {
    case AtPoint::MinusInf: {
      int lead = sgn(f.leading());
      return (f.degree() % 2 == 0) ? lead : -lead;
    }
    case AtPoint::PlusInf:
      return sgn(f.leading());
    case AtPoint::Value:
      return sgn(f.eval(x));
  }
  return 0;
}

inline int sign_variations(const std::vector<QPoly>& chain, AtPoint where,
                           const Rat& x = Rat(0)) {
  int vars = 0, prev = 0;
  for (const auto& f : chain) {
    int s = chain_sign(f, where, x);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++vars;
    prev = s;
  }
  return vars;
}

// Yun squarefree decomposition over Q; returns (factor, multiplicity) with
// factors monic squarefree and pairwise coprime.
inline std::vector<std::pair<QPoly, int>> squarefree_decomposition(QPoly f) {
  std::vector<std::pair<QPoly, int>> out;
  if (f.degree() < 1) return out;
  Rat inv = Rat(1) / f.leading();
  f = f.scaled(inv);
  QPoly fp = f.derivative();
  QPoly c = gcd_monic(f, fp);
  QPoly w = divmod(f, c).first;
  QPoly y = divmod(fp, c).first;
  QPoly z = y - w.derivative();
  int i = 1;
  while (!z.is_zero()) {
    QPoly g = gcd_monic(w, z);
    if (g.degree() > 0) out.emplace_back(g, i);
    w = divmod(w, g).first;
    y = divmod(z, g).first;
    z = y - w.derivative();
    ++i;
  }
  if (w.degree() > 0) out.emplace_back(w, i);
  return out;
}

}  // namespace detail

struct RealEigCounts {
  long below_minus_one = 0;   // real roots < -1
  long outside_unit = 0;      // real roots with |x| > 1
};

// Exact counts with multiplicity.  Roots exactly at +-1 contribute to neither
// interval; callers treating them as obstructions detect them separately.
inline RealEigCounts count_real_eigs(const IPoly& q0) {
  if (q0.is_zero()) throw invariant_error("count_real_eigs: zero polynomial");
  QPoly q = to_qpoly(q0);
  for (long r : {1L, -1L}) {
    QPoly lin{std::vector<Rat>{Rat(-r), Rat(1)}};
    while (q.degree() >= 1 && sgn(q.eval(Rat(r))) == 0) q = divmod(q, lin).first;
  }
  RealEigCounts counts;
  if (q.degree() < 1) return counts;

  for (const auto& [s, mult] : detail::squarefree_decomposition(q)) {
    auto chain = detail::sturm_chain(s);
    int v_minf = detail::sign_variations(chain, detail::AtPoint::MinusInf);
    int v_m1 = detail::sign_variations(chain, detail::AtPoint::Value, Rat(-1));
    int v_p1 = detail::sign_variations(chain, detail::AtPoint::Value, Rat(1));
    int v_pinf = detail::sign_variations(chain, detail::AtPoint::PlusInf);
    long below = v_minf - v_m1;
    long above = v_p1 - v_pinf;
    counts.below_minus_one += mult * below;
    counts.outside_unit += mult * (below + above);
  }
  return counts;
}

// True when no eigenvalue is a root of unity, i.e. det(M^n - I) != 0 for all
// n; checked by gcd against every cyclotomic polynomial of degree <= d.
inline bool cyclotomic_obstruction(const IPoly& cp, unsigned long* order_out) {
  auto d = static_cast<unsigned long>(cp.degree());
  for (unsigned long m = 1; m <= 2 * d * d + 2; ++m) {
    if (euler_phi(m) > d) continue;
    if (ipoly_gcd(cp, cyclotomic(m)).degree() >= 1) {
      if (order_out) *order_out = m;
      return true;
    }
  }
  return false;
}

inline bool is_tame_matrix(const IMat& m, unsigned long* order_out = nullptr) {
  return !cyclotomic_obstruction(charpoly(m), order_out);
}

// Low-precision root approximations (Durand-Kerner); advisory use only, the
// exact paths never consume these values.
inline std::vector<std::complex<double>> approx_roots(const IPoly& q) {
  long d = q.degree();
  if (d < 1) return {};
  std::vector<std::complex<double>> c(static_cast<std::size_t>(d) + 1);
  double lead = q.leading().get_d();
  for (long i = 0; i <= d; ++i)
    c[static_cast<std::size_t>(i)] = q.coeff(i).get_d() / lead;
  std::vector<std::complex<double>> roots(static_cast<std::size_t>(d));
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> acc(1.0, 0.0);
  for (auto& r : roots) {
    acc *= seed;
    r = acc;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v(0.0, 0.0);
    for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
  };
  for (int iter = 0; iter < 500; ++iter) {
    double moved = 0;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      std::complex<double> denom(1.0, 0.0);
      for (std::size_t j = 0; j < roots.size(); ++j)
        if (j != i) denom *= roots[i] - roots[j];
      if (std::abs(denom) < 1e-30) denom = std::complex<double>(1e-30, 0);
      std::complex<double> delta = eval(roots[i]) / denom;
      roots[i] -= delta;
      moved += std::abs(delta);
    }
    if (moved < 1e-13) break;
  }
  return roots;
}

}  // namespace rzeta
