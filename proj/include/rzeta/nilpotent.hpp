#pragma once

// Coincidence counts for endomorphism pairs of finitely generated torsion-free
// nilpotent groups, represented by the integer matrix pairs they induce on the
// free-abelian factors of an adapted lower central series.  The total count is
// the product of the layer counts.

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "rzeta/exact.hpp"
#include "rzeta/intmat.hpp"

namespace rzeta {

// Per-layer matrix pairs (A_k, B_k); a single endomorphism is the pair with
// every B_k the identity.
struct LayeredPair {
  struct Layer {
    IMat a, b;
  };
  std::vector<Layer> layers;

  static LayeredPair make(std::vector<Layer> layers) {
    if (layers.empty()) throw invariant_error("LayeredPair: at least one layer");
    for (const auto& l : layers)
      if (l.a.dim() != l.b.dim())
        throw invariant_error("LayeredPair: layer dimensions disagree");
    LayeredPair p;
    p.layers = std::move(layers);
    return p;
  }
};

// prod_k |coker(A_k^n - B_k^n)|; infinite as soon as one layer is.
inline ExtNat coincidence_R_nilpotent(const LayeredPair& pair, unsigned long n) {
  ExtNat total{BigInt(1)};
  for (const auto& layer : pair.layers) {
    ExtNat r = coincidence_R(layer.a, layer.b, n);
    if (r.is_infinite()) return ExtNat::infinity();
    total *= r;
  }
  return total;
}

// Discrete Heisenberg-type layer data for a class-2 group built from a 2x2
// matrix: the abelianized map is A, the induced map on the commutator layer
// is the second exterior power [[det A]].
inline LayeredPair heisenberg_layers(const IMat& a) {
  if (a.dim() != 2) throw invariant_error("heisenberg_layers: 2x2 matrix required");
  return LayeredPair::make({{a, IMat::identity(2)},
                            {exterior_power(a, 2), IMat::identity(1)}});
}

// For an automorphism pair, the coincidence problem reduces to the single
// endomorphism B^(-1) A; valid when B is invertible over Q and the product is
// integral.
inline IMat reduce_pair_to_single(const IMat& a, const IMat& b) {
  if (a.dim() != b.dim()) throw invariant_error("reduce_pair_to_single: dimension mismatch");
  std::size_t d = b.dim();
  BigInt dt = det(b);
  if (sgn(dt) == 0) throw invariant_error("reduce_pair_to_single: B is singular");
  // adjugate via signed minors
  IMat adj(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (d == 1) {
        adj.at(0, 0) = 1;
        continue;
      }
      IMat minor(d - 1);
      for (std::size_t r = 0, mr = 0; r < d; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, mc = 0; c < d; ++c) {
          if (c == i) continue;
          minor.at(mr, mc) = b.at(r, c);
          ++mc;
        }
        ++mr;
      }
      BigInt m = det(minor);
      adj.at(i, j) = ((i + j) % 2 == 0) ? m : -m;
    }
  IMat prod = adj * a;
  IMat out(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      BigInt q, r;
      mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), prod.at(i, j).get_mpz_t(),
                  dt.get_mpz_t());
      if (sgn(r) != 0)
        throw invariant_error("reduce_pair_to_single: B^(-1) A is not integral");
      out.at(i, j) = q;
    }
  return out;
}

inline bool commuting_check(const IMat& a, const IMat& b) {
  if (a.dim() != b.dim()) throw invariant_error("commuting_check: dimension mismatch");
  return a * b == b * a;
}

struct PairTameScan {
  bool tame_up_to = false;
  unsigned long horizon = 0;
  unsigned long not_tame_n = 0;        // meaningful when !tame_up_to
  std::string separation_report;      // low-precision |eigenvalue| comparison
  bool separation_plausible = false;  // advisory only; exactness never rests on it
};

// Scans iterates 1..N for an infinite count; on survival reports a heuristic
// magnitude-separation summary from approximate eigenvalues.
inline PairTameScan tame_scan(const LayeredPair& pair, unsigned long horizon) {
  PairTameScan scan;
  scan.horizon = horizon;
  for (unsigned long n = 1; n <= horizon; ++n) {
    if (coincidence_R_nilpotent(pair, n).is_infinite()) {
      scan.not_tame_n = n;
      scan.separation_report = "count infinite at n = " + std::to_string(n);
      return scan;
    }
  }
  scan.tame_up_to = true;
  scan.separation_plausible = true;
  std::string rep;
  char buf[64];
  for (std::size_t k = 0; k < pair.layers.size(); ++k) {
    auto xs = approx_roots(charpoly(pair.layers[k].a));
    auto ys = approx_roots(charpoly(pair.layers[k].b));
    double min_gap = -1.0;
    for (const auto& x : xs)
      for (const auto& y : ys) {
        double gap = std::abs(std::abs(x) - std::abs(y));
        if (min_gap < 0 || gap < min_gap) min_gap = gap;
      }
    if (min_gap >= 0 && min_gap < 1e-6) scan.separation_plausible = false;
    if (!rep.empty()) rep += "; ";
    std::snprintf(buf, sizeof(buf), "%.6g", min_gap);
    rep += "layer " + std::to_string(k + 1) + ": min ||xi|-|eta|| = " + buf;
  }
  scan.separation_report = rep;
  return scan;
}

}  // namespace rzeta
