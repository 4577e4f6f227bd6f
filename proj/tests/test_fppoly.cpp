#include <catch2/catch_amalgamated.hpp>

#include "rzeta/fppoly.hpp"

using namespace rzeta;

namespace {
FpPoly mk(std::uint64_t p, std::vector<std::uint64_t> c) { return FpPoly(p, std::move(c)); }
}  // namespace

TEST_CASE("ring operations over F_p") {
  // gcd(t^2 + t, t + 1) = t + 1 over F_2
  CHECK(poly_gcd(mk(2, {0, 1, 1}), mk(2, {1, 1})) == mk(2, {1, 1}));
  // (t + 1)(t^2 + t + 1) = t^3 + 1 over F_2
  CHECK(mk(2, {1, 1}) * mk(2, {1, 1, 1}) == mk(2, {1, 0, 0, 1}));
  // divmod(t^3 - 1, t - 1) = (t^2 + t + 1, 0) over F_3
  auto [q, r] = divmod(FpPoly::t_pow_minus_one(3, 3), mk(3, {2, 1}));
  CHECK(q == mk(3, {1, 1, 1}));
  CHECK(r.is_zero());
  CHECK_THROWS_AS(divmod(mk(2, {1, 1}), FpPoly::zero(2)), invariant_error);
  CHECK_THROWS_AS(mk(2, {1}) + mk(3, {1}), invariant_error);
}

TEST_CASE("irreducibility") {
  CHECK(is_irreducible(mk(2, {1, 1, 1})));        // t^2+t+1 over F_2
  CHECK(!is_irreducible(mk(2, {1, 0, 1})));       // t^2+1 = (t+1)^2 over F_2
  CHECK(is_irreducible(mk(3, {1, 0, 1})));        // t^2+1 over F_3
  CHECK(is_irreducible(mk(2, {0, 1})));           // t
  CHECK(!is_irreducible(mk(2, {0, 0, 1})));       // t^2
  CHECK(is_irreducible(mk(2, {1, 1, 0, 0, 1})));  // t^4+t+1 over F_2
  CHECK(!is_irreducible(mk(2, {1, 0, 0, 0, 1})));  // t^4+1 = (t+1)^4 over F_2
}

TEST_CASE("factorization of t^n - 1") {
  auto f32 = factor_tn_minus_1(3, 2);
  REQUIRE(f32.size() == 2);
  CHECK(f32[0] == std::pair<FpPoly, long>{mk(2, {1, 1}), 1});
  CHECK(f32[1] == std::pair<FpPoly, long>{mk(2, {1, 1, 1}), 1});

  auto f42 = factor_tn_minus_1(4, 2);
  REQUIRE(f42.size() == 1);
  CHECK(f42[0] == std::pair<FpPoly, long>{mk(2, {1, 1}), 4});

  for (std::uint64_t p : {2ull, 5ull, 7ull}) {
    auto f1 = factor_tn_minus_1(1, p);
    REQUIRE(f1.size() == 1);
    CHECK(f1[0] == std::pair<FpPoly, long>{mk(p, {p - 1, 1}), 1});
  }
}

TEST_CASE("factors of t^m - 1 are squarefree away from the characteristic") {
  for (std::uint64_t p : {2ull, 3ull, 5ull}) {
    for (unsigned long m = 1; m <= 20; ++m) {
      if (m % p == 0) continue;
      for (const auto& [w, mult] : factor_tn_minus_1(m, p)) {
        CHECK(mult == 1);
        CHECK(is_irreducible(w));
        CHECK(w.is_monic());
      }
    }
  }
}

TEST_CASE("order at a place and the degree convention at infinity") {
  FpPoly t3m1 = FpPoly::t_pow_minus_one(2, 3);
  CHECK(ord_at_place(t3m1, Place::finite(mk(2, {1, 1}))) == 1);
  CHECK(ord_at_place(t3m1, Place::infinite(2)) == -3);
  CHECK(ord_at_place(FpPoly::t_pow_minus_one(2, 4), Place::finite(mk(2, {1, 1}))) == 4);
  CHECK_THROWS_AS(ord_at_place(FpPoly::zero(2), Place::infinite(2)), invariant_error);
}

TEST_CASE("normalized absolute values") {
  FpPoly t3m1 = FpPoly::t_pow_minus_one(2, 3);
  CHECK(abs_at_place(t3m1, Place::finite(mk(2, {1, 1, 1}))) == make_rat(1, 4));
  CHECK(abs_at_place(t3m1, Place::infinite(2)) == Rat(8));
  for (unsigned long j = 1; j <= 12; ++j)
    CHECK(abs_at_place(FpPoly::t_pow_minus_one(2, j), Place::finite(mk(2, {0, 1}))) == Rat(1));
}

TEST_CASE("multiplicative order of t in residue fields") {
  CHECK(mult_order_of_t(mk(3, {2, 1})) == 1);     // t - 1 over F_3
  CHECK(mult_order_of_t(mk(2, {1, 1, 1})) == 3);  // t^2+t+1 over F_2
  CHECK(mult_order_of_t(mk(2, {1, 1})) == 1);     // t + 1 over F_2
  CHECK(mult_order_of_t(mk(3, {1, 0, 1})) == 4);  // t^2+1 over F_3
  CHECK_THROWS_AS(mult_order_of_t(mk(2, {0, 1})), invariant_error);   // place (t)
  CHECK_THROWS_AS(mult_order_of_t(mk(2, {1, 0, 1})), invariant_error);  // reducible
}

TEST_CASE("orders divide the residue field group order") {
  for (std::uint64_t p : {2ull, 3ull}) {
    for (unsigned long m = 2; m <= 15; ++m) {
      if (m % p == 0) continue;
      for (const auto& [w, mult] : factor_tn_minus_1(m, p)) {
        (void)mult;
        if (w.degree() == 1 && w.coeff(0) == 0) continue;
        BigInt order = mult_order_of_t(w);
        BigInt group = pow_int(BigInt(static_cast<unsigned long>(p)),
                               static_cast<unsigned long>(w.degree())) - 1;
        CHECK(group % order == 0);
      }
    }
  }
}

TEST_CASE("order of t^n - 1 at a factor place matches the wild multiplicity") {
  // with n = m p^k and w | t^m - 1, the multiplicity of w in t^n - 1 is p^k
  for (std::uint64_t p : {2ull, 3ull}) {
    for (unsigned long m : {1ul, 3ul, 5ul}) {
      if (m % p == 0) continue;
      for (unsigned long k = 0; k <= 2; ++k) {
        unsigned long pk = 1;
        for (unsigned long i = 0; i < k; ++i) pk *= static_cast<unsigned long>(p);
        unsigned long n = m * pk;
        for (const auto& [w, mult] : factor_tn_minus_1(m, p)) {
          (void)mult;
          CHECK(ord_at_place(FpPoly::t_pow_minus_one(p, n), Place::finite(w)) ==
                static_cast<long>(pk));
        }
      }
    }
  }
}

TEST_CASE("Artin product formula for t^n - 1") {
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull}) {
    for (unsigned long n = 1; n <= 30; ++n) {
      FpPoly f = FpPoly::t_pow_minus_one(p, n);
      Rat product = abs_at_place(f, Place::infinite(p));
      for (const auto& [w, mult] : factor_tn_minus_1(n, p)) {
        (void)mult;
        product *= abs_at_place(f, Place::finite(w));
      }
      CHECK(product == Rat(1));
    }
  }
}

TEST_CASE("places validate their data") {
  CHECK_THROWS_AS(Place::finite(mk(2, {1, 0, 1})), invariant_error);  // reducible
  CHECK_THROWS_AS(Place::finite(mk(3, {1})), invariant_error);        // constant
  Place v = Place::finite(mk(3, {2, 1}));
  CHECK(v.degree() == 1);
  CHECK(Place::infinite(3).degree() == 1);
  CHECK(v.str() == "(t + 2)");
}
