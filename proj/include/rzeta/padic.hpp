#pragma once

// Endomorphisms of Z_p^d with p-integral rational matrices: iterate counts
// through p-adic determinant valuations, finiteness of all iterates, and the
// rational/natural-boundary classification with a checkable certificate.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rzeta/exact.hpp"
#include "rzeta/fppoly.hpp"
#include "rzeta/intmat.hpp"
#include "rzeta/poly.hpp"
#include "rzeta/report.hpp"
#include "rzeta/series.hpp"

namespace rzeta {

// A prime p and a d x d matrix of p-integral rationals (v_p >= 0 entrywise);
// such matrices are dense in M_d(Z_p) and keep every computation exact.
class PadicEndo {
 public:
  PadicEndo(BigInt p, std::vector<std::vector<Rat>> rows) : p_(std::move(p)) {
    check_prime(p_);
    d_ = rows.size();
    if (d_ == 0) throw invariant_error("PadicEndo: dimension must be at least 1");
    m_ = QMat(d_);
    for (std::size_t i = 0; i < d_; ++i) {
      if (rows[i].size() != d_) throw invariant_error("PadicEndo: ragged matrix");
      for (std::size_t j = 0; j < d_; ++j) {
        const Rat& e = rows[i][j];
        if (sgn(e) != 0 && vp_rat(e, p_).value() < 0)
          throw invariant_error("PadicEndo: entry " + e.get_str() +
                                " is not p-integral for p = " + p_.get_str());
        m_.at(i, j) = e;
      }
    }
  }

  const BigInt& prime() const { return p_; }
  std::size_t dim() const { return d_; }
  const QMat& matrix() const { return m_; }

 private:
  BigInt p_;
  std::size_t d_ = 0;
  QMat m_;
};

// R(phi^n) = |det(Phi^n - I)|_p^(-1) = p^(v_p(det)), infinite iff the
// determinant vanishes.
inline ExtNat reidemeister_padic(const PadicEndo& e, const BigInt& n) {
  if (n < 1) throw invariant_error("reidemeister_padic: n must be positive");
  QMat power = e.matrix().pow(n);
  for (std::size_t i = 0; i < e.dim(); ++i) power.at(i, i) -= 1;
  Rat dt = det(power);
  if (sgn(dt) == 0) return ExtNat::infinity();
  long v = vp_rat(dt, e.prime()).value();
  if (v < 0) throw std::logic_error("reidemeister_padic: negative valuation on a p-integral determinant");
  return ExtNat(pow_int(e.prime(), static_cast<unsigned long>(v)));
}

inline ExtNat reidemeister_padic(const PadicEndo& e, unsigned long n) {
  return reidemeister_padic(e, BigInt(n));
}

struct TameResult {
  bool tame = true;
  unsigned long n = 0;      // first iterate with an infinite count
  unsigned long order = 0;  // order of the offending root of unity
};

namespace detail {

inline IPoly integral_charpoly(const QMat& m) {
  // same roots as charpoly, coefficients cleared to Z
  return clear_denominators(charpoly(m));
}

}  // namespace detail

// Every iterate count is finite iff no eigenvalue is a root of unity; roots
// of unity of degree <= d are exactly the cyclotomic indices with phi(m) <= d.
inline TameResult tame_check(const PadicEndo& e) {
  unsigned long order = 0;
  if (cyclotomic_obstruction(detail::integral_charpoly(e.matrix()), &order))
    return {false, order, order};
  return {};
}

namespace detail {

// charpoly reduced mod p; valid because every coefficient is p-integral.
inline FpPoly charpoly_mod_p(const QPoly& cp, const BigInt& p) {
  if (!p.fits_ulong_p() || p.get_ui() >= (1ull << 32))
    throw invariant_error("residue computations need p below 2^32");
  std::uint64_t pu = p.get_ui();
  std::vector<std::uint64_t> c(static_cast<std::size_t>(cp.degree() + 1));
  for (long i = 0; i <= cp.degree(); ++i) {
    const Rat& x = cp.coeff(i);
    if (sgn(x) == 0) {
      c[static_cast<std::size_t>(i)] = 0;
      continue;
    }
    long v = vp_rat(x, p).value();
    if (v < 0) throw std::logic_error("charpoly_mod_p: coefficient not p-integral");
    if (v > 0) {
      c[static_cast<std::size_t>(i)] = 0;
      continue;
    }
    BigInt num = x.get_num() % p;
    if (sgn(num) < 0) num += p;
    BigInt den = x.get_den() % p;
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t()) == 0)
      throw std::logic_error("charpoly_mod_p: denominator not invertible");
    if (sgn(inv) < 0) inv += p;
    c[static_cast<std::size_t>(i)] = mulmod_u64(num.get_ui(), inv.get_ui(), pu);
  }
  return FpPoly(pu, std::move(c));
}

// lcm of the multiplicative orders of t modulo the distinct irreducible
// factors of u (u(0) != 0), obtained degree by degree: gcd with t^(p^k) - t
// peels off the distinct factors of degree exactly k.
inline BigInt order_of_unit_part(FpPoly u) {
  std::uint64_t p = u.prime();
  u = u.make_monic();
  BigInt gamma(1);
  FpPoly t = FpPoly::t(p);
  FpPoly one = FpPoly::one(p);
  for (long k = 1; !u.is_zero() && u.degree() >= 1; ++k) {
    if (k > 64) throw std::logic_error("order_of_unit_part: runaway degree scan");
    while (u.degree() >= 1) {
      FpPoly frob = t % u;
      for (long i = 0; i < k; ++i) frob = powmod(frob, p, u);
      FpPoly h = poly_gcd(u, frob - (t % u));
      if (h.degree() < 1) break;
      BigInt group = pow_int(BigInt(static_cast<unsigned long>(p)),
                             static_cast<unsigned long>(k)) - 1;
      if (!group.fits_ulong_p() || group.get_ui() > (1ull << 62))
        throw invariant_error("order_of_unit_part: residue field too large");
      bool found = false;
      for (std::uint64_t l : divisors_u64(group.get_ui())) {
        if (powmod(t, l, h) == one) {
          gamma = lcm_int(gamma, BigInt(l));
          found = true;
          break;
        }
      }
      if (!found) throw std::logic_error("order_of_unit_part: no order found");
      u = (u / h).make_monic();
    }
  }
  return gamma;
}

}  // namespace detail

// Certificate for the natural-boundary branch: for n(e) = q^e * gamma * p^r
// the counts satisfy R(phi^(k n(e))) = R(phi^(n(e))) for every k coprime to
// n(e); the sequence takes infinitely many values infinitely often, so it
// satisfies no linear recurrence.  Each tested equality is checked exactly
// and a failure is a hard error.
inline PadicCertificate boundary_certificate(const PadicEndo& e, std::size_t samples,
                                             unsigned long max_e = 3) {
  if (samples == 0) throw invariant_error("boundary_certificate: samples must be positive");
  const BigInt& p = e.prime();
  QPoly cp = charpoly(e.matrix());
  FpPoly red = detail::charpoly_mod_p(cp, p);

  std::size_t shift = 0;
  while (red.coeff(shift) == 0) ++shift;
  if (shift == static_cast<std::size_t>(red.degree()) + 1)
    throw std::logic_error("boundary_certificate: zero reduction of a monic polynomial");
  std::vector<std::uint64_t> unit_coeffs(red.coeffs().begin() + static_cast<long>(shift),
                                         red.coeffs().end());
  FpPoly unit_part(red.prime(), std::move(unit_coeffs));
  if (unit_part.degree() < 1)
    throw invariant_error("boundary_certificate: no unit eigenvalues; the instance is in the rational branch");

  PadicCertificate cert;
  cert.gamma = detail::order_of_unit_part(unit_part);
  cert.q = (p == 2) ? BigInt(3) : BigInt(2);

  auto valuation_at = [&](const BigInt& n) {
    QMat power = e.matrix().pow(n);
    for (std::size_t i = 0; i < e.dim(); ++i) power.at(i, i) -= 1;
    Rat dt = det(power);
    if (sgn(dt) == 0)
      throw std::logic_error("boundary_certificate: infinite count on a tame instance");
    return vp_rat(dt, p).value();
  };

  // scan for stabilization of the valuation increments along gamma * p^r
  unsigned long r0 = 0;
  {
    std::vector<long> vals;
    BigInt exponent = cert.gamma;
    for (unsigned long r = 0; r <= 12; ++r) {
      vals.push_back(valuation_at(exponent));
      exponent *= p;
      if (vals.size() >= 3) {
        std::size_t i = vals.size() - 3;
        if (vals[i + 1] - vals[i] == vals[i + 2] - vals[i + 1]) {
          r0 = static_cast<unsigned long>(i);
          break;
        }
      }
      if (r == 12)
        throw std::logic_error("boundary_certificate: valuation increments did not stabilize");
    }
  }
  cert.r = r0 + 1;

  BigInt p_pow_r = pow_int(p, cert.r);
  for (unsigned long lvl = 1; lvl <= max_e; ++lvl) {
    PadicCertificate::Level level;
    level.e = lvl;
    level.n_e = pow_int(cert.q, lvl) * cert.gamma * p_pow_r;
    long base_v = valuation_at(level.n_e);
    level.base = ExtNat(pow_int(p, static_cast<unsigned long>(base_v)));
    BigInt k(2);
    while (level.ks.size() < samples) {
      if (gcd_int(k, level.n_e) == 1) {
        long v = valuation_at(k * level.n_e);
        if (v != base_v)
          throw std::logic_error(
              "boundary_certificate: equality R(phi^(k n)) = R(phi^n) failed at n = " +
              level.n_e.get_str() + ", k = " + k.get_str());
        level.ks.push_back(k);
      }
      k += 1;
    }
    cert.levels.push_back(std::move(level));
  }
  return cert;
}

// The dichotomy: all eigenvalues inside the maximal ideal (charpoly congruent
// to X^d mod p) gives the rational form 1/(1-z); any unit eigenvalue forces a
// natural boundary, certified by the sparse-exponent equalities.
inline DichotomyReport classify_padic(const PadicEndo& e, std::size_t samples = 5) {
  DichotomyReport rep;
  TameResult t = tame_check(e);
  if (!t.tame) {
    rep.verdict = Verdict::NotTame;
    rep.not_tame_n = t.n;
    rep.not_tame_order = t.order;
    rep.provenance = "eigenvalue of finite multiplicative order " +
                     std::to_string(t.order) + ": count at n = " +
                     std::to_string(t.n) + " is infinite";
    return rep;
  }

  QPoly cp = charpoly(e.matrix());
  bool all_small = true;
  for (long i = 0; i < cp.degree(); ++i) {
    const Rat& c = cp.coeff(i);
    if (sgn(c) != 0 && vp_rat(c, e.prime()).value() < 1) {
      all_small = false;
      break;
    }
  }

  if (all_small) {
    rep.verdict = Verdict::Rational;
    auto f = RationalFn::make(IPoly::constant(BigInt(1)),
                              IPoly(std::vector<BigInt>{BigInt(1), BigInt(-1)}));
    rep.closed_form = *f;
    rep.provenance =
        "characteristic polynomial reduces to X^" + std::to_string(cp.degree()) +
        " mod p: every eigenvalue has p-adic absolute value below 1, all counts equal 1";
  } else {
    rep.verdict = Verdict::NaturalBoundary;
    rep.padic_certificate = boundary_certificate(e, samples);
    rep.provenance =
        "some eigenvalue is a p-adic unit: counts recur along sparse exponent sets "
        "and satisfy no linear recurrence";
  }
  return rep;
}

}  // namespace rzeta
