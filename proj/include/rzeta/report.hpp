#pragma once

// Classification reports: the rational / natural-boundary verdict, the
// certificate payloads that back it, and the empirical evidence block
// attached by the instance-level classifier.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rzeta/exact.hpp"
#include "rzeta/fppoly.hpp"
#include "rzeta/series.hpp"

namespace rzeta {

enum class Verdict { Rational, NaturalBoundary, ApparentIrrational, NotTame };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Rational: return "rational";
    case Verdict::NaturalBoundary: return "natural_boundary";
    case Verdict::ApparentIrrational: return "apparent_irrational";
    case Verdict::NotTame: return "not_tame";
  }
  return "?";
}

// Verified count equalities R(phi^(k n_e)) = R(phi^(n_e)) along the sparse
// exponent family n_e = q^e * gamma * p^r.
struct PadicCertificate {
  BigInt gamma;     // multiplicative order of a unit residue eigenvalue
  BigInt q;         // auxiliary prime, distinct from p
  unsigned long r = 0;

  struct Level {
    unsigned long e = 0;
    BigInt n_e;
    ExtNat base;
    std::vector<BigInt> ks;  // tested multipliers, each coprime to n_e
  };
  std::vector<Level> levels;
};

// A finite place w != (t) in the complement data, together with the verified
// absolute-value identity |t^(l_w p^k) - 1|_w = p^(-p^k d_w).
struct TorsionWitness {
  std::uint64_t p = 0;
  FpPoly w;
  long d_w = 0;
  BigInt l_w;

  struct Identity {
    int k = 0;
    BigInt exponent;   // l_w * p^k
    Rat value;         // |t^exponent - 1|_w, equal to p^(-p^k d_w)
  };
  std::vector<Identity> identities;
};

struct GrowthRow {
  std::size_t window = 0;
  std::size_t order = 0;  // Berlekamp-Massey minimal order on that window
};

struct Evidence {
  std::vector<ExtNat> sequence;  // R(1)..R(w)
  std::vector<GrowthRow> bm_orders;
  bool bm_tail_validated = false;
  enum class Pade { NotRun, Stabilized, NoStabilize } pade = Pade::NotRun;
  std::optional<RationalFn> pade_result;
  std::optional<std::string> radius_estimate;
  std::optional<std::string> separation;
  std::optional<std::string> note;
};

struct DichotomyReport {
  Verdict verdict = Verdict::ApparentIrrational;
  std::string provenance;
  std::optional<RationalFn> closed_form;
  std::optional<PadicCertificate> padic_certificate;
  std::optional<TorsionWitness> torsion_witness;
  unsigned long not_tame_n = 0;
  unsigned long not_tame_order = 0;
  std::optional<Evidence> evidence;
};

}  // namespace rzeta
