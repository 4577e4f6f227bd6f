#pragma once

// Instance files: one JSON object per dynamical instance, validated against
// the owning module's invariants before any computation runs.
//
//   {"kind":"padic","p":3,"matrix":[["4"]]}
//   {"kind":"torsion","components":[{"p":2,"S":[[0,1],[1,1]]}]}
//   {"kind":"rational_xi","components":[{"xi":"2","S":["3"]}]}
//   {"kind":"abelian_pair","A":[["2"]],"B":[["3"]]}
//   {"kind":"nilpotent","layers":[{"A":[["2","0"],["0","2"]]},{"A":[["4"]]}]}
//
// Matrix entries are decimal strings (optionally "a/b" for p-integral
// rationals); torsion places are coefficient arrays, low degree first.  An
// optional "options" object carries {"max_n","window","samples"}.

#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rzeta/exact.hpp"
#include "rzeta/nilpotent.hpp"
#include "rzeta/padic.hpp"
#include "rzeta/torsion.hpp"

namespace rzeta {

struct Policy {
  unsigned long max_n = 32;
  unsigned long window = 32;
  unsigned long samples = 5;
};

struct Instance {
  enum class Kind { Padic, Torsion, RationalXi, AbelianPair, Nilpotent };

  Kind kind = Kind::Padic;
  std::optional<PadicEndo> padic;
  std::optional<TorsionModuleSpec> torsion;
  std::optional<RationalXiSpec> rational_xi;
  std::optional<LayeredPair> pair;  // abelian pairs are the single-layer case
  Policy options;
};

inline const char* kind_name(Instance::Kind k) {
  switch (k) {
    case Instance::Kind::Padic: return "padic";
    case Instance::Kind::Torsion: return "torsion";
    case Instance::Kind::RationalXi: return "rational_xi";
    case Instance::Kind::AbelianPair: return "abelian_pair";
    case Instance::Kind::Nilpotent: return "nilpotent";
  }
  return "?";
}

// Dimension guard for desk-scale runs; override with TZ_MAX_DIM.
inline unsigned long max_dimension_cap() {
  if (const char* env = std::getenv("TZ_MAX_DIM")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return v;
  }
  return 8;
}

namespace detail {

inline BigInt parse_bigint(const nlohmann::json& j, const char* what) {
  try {
    if (j.is_number_integer()) return BigInt(j.get<long>());
    if (j.is_string()) return BigInt(j.get<std::string>(), 10);
  } catch (const std::invalid_argument&) {
    throw parse_error(std::string(what) + ": malformed integer '" + j.dump() + "'");
  }
  throw parse_error(std::string(what) + ": expected integer or decimal string, got " + j.dump());
}

inline Rat parse_rat(const nlohmann::json& j, const char* what) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rat(BigInt(s, 10));
      BigInt num(s.substr(0, slash), 10);
      BigInt den(s.substr(slash + 1), 10);
      return make_rat(num, den);
    } catch (const std::invalid_argument&) {
      throw parse_error(std::string(what) + ": malformed rational '" + s + "'");
    }
  }
  throw parse_error(std::string(what) + ": expected rational string, got " + j.dump());
}

template <class T, class Parse>
std::vector<std::vector<T>> parse_matrix(const nlohmann::json& j, const char* what,
                                         Parse parse_entry) {
  if (!j.is_array() || j.empty())
    throw parse_error(std::string(what) + ": expected a non-empty array of rows");
  std::vector<std::vector<T>> rows;
  for (const auto& row : j) {
    if (!row.is_array())
      throw parse_error(std::string(what) + ": expected an array row, got " + row.dump());
    std::vector<T> r;
    for (const auto& cell : row) r.push_back(parse_entry(cell, what));
    rows.push_back(std::move(r));
  }
  std::size_t d = rows.size();
  for (const auto& r : rows)
    if (r.size() != d)
      throw parse_error(std::string(what) + ": matrix must be square");
  if (d > max_dimension_cap())
    throw invariant_error(std::string(what) + ": dimension " + std::to_string(d) +
                          " exceeds the cap (" + std::to_string(max_dimension_cap()) +
                          "); set TZ_MAX_DIM to raise it");
  return rows;
}

inline IMat parse_imat(const nlohmann::json& j, const char* what) {
  auto rows = parse_matrix<BigInt>(j, what, [](const nlohmann::json& c, const char* w) {
    return parse_bigint(c, w);
  });
  return IMat::from_rows(rows);
}

inline std::uint64_t parse_small_prime(const nlohmann::json& j, const char* what) {
  BigInt p = parse_bigint(j, what);
  check_prime(p);
  if (p.get_ui() >= (1ull << 32))
    throw invariant_error(std::string(what) + ": primes must be below 2^32 here");
  return p.get_ui();
}

inline FpPoly parse_place_poly(const nlohmann::json& j, std::uint64_t p, const char* what) {
  if (!j.is_array())
    throw parse_error(std::string(what) + ": place must be a coefficient array");
  std::vector<std::uint64_t> coeffs;
  for (const auto& c : j) {
    if (!c.is_number_unsigned() && !c.is_number_integer())
      throw parse_error(std::string(what) + ": place coefficients are small integers");
    long v = c.get<long>();
    if (v < 0) throw parse_error(std::string(what) + ": place coefficients are non-negative");
    coeffs.push_back(static_cast<std::uint64_t>(v));
  }
  return FpPoly(p, std::move(coeffs));
}

}  // namespace detail

inline Instance parse_instance(const nlohmann::json& j) {
  if (!j.is_object()) throw parse_error("instance: expected a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw parse_error("instance: missing string field 'kind'");
  std::string kind = j["kind"].get<std::string>();

  Instance inst;
  if (j.contains("options")) {
    const auto& o = j["options"];
    if (!o.is_object()) throw parse_error("instance: 'options' must be an object");
    auto read = [&](const char* key, unsigned long* out) {
      if (!o.contains(key)) return;
      if (!o[key].is_number_unsigned())
        throw parse_error(std::string("instance: option '") + key +
                          "' must be a non-negative integer");
      *out = o[key].get<unsigned long>();
    };
    read("max_n", &inst.options.max_n);
    read("window", &inst.options.window);
    read("samples", &inst.options.samples);
  }

  if (kind == "padic") {
    inst.kind = Instance::Kind::Padic;
    if (!j.contains("p") || !j.contains("matrix"))
      throw parse_error("padic instance: fields 'p' and 'matrix' required");
    BigInt p = detail::parse_bigint(j["p"], "padic.p");
    auto rows = detail::parse_matrix<Rat>(
        j["matrix"], "padic.matrix",
        [](const nlohmann::json& c, const char* w) { return detail::parse_rat(c, w); });
    inst.padic.emplace(p, std::move(rows));
  } else if (kind == "torsion") {
    inst.kind = Instance::Kind::Torsion;
    if (!j.contains("components") || !j["components"].is_array())
      throw parse_error("torsion instance: array field 'components' required");
    std::vector<TorsionComponent> comps;
    for (const auto& cj : j["components"]) {
      if (!cj.is_object() || !cj.contains("p"))
        throw parse_error("torsion component: object with field 'p' required");
      TorsionComponent comp;
      comp.p = detail::parse_small_prime(cj["p"], "torsion.p");
      bool has_s = cj.contains("S"), has_p = cj.contains("P");
      if (has_s == has_p)
        throw parse_error("torsion component: exactly one of 'S' or 'P' required");
      comp.s_mode = has_s;
      const auto& list = has_s ? cj["S"] : cj["P"];
      if (!list.is_array())
        throw parse_error("torsion component: place list must be an array");
      for (const auto& pl : list)
        comp.places.push_back(detail::parse_place_poly(pl, comp.p, "torsion place"));
      comps.push_back(std::move(comp));
    }
    inst.torsion.emplace(std::move(comps));
  } else if (kind == "rational_xi") {
    inst.kind = Instance::Kind::RationalXi;
    if (!j.contains("components") || !j["components"].is_array())
      throw parse_error("rational_xi instance: array field 'components' required");
    std::vector<RationalXiComponent> comps;
    for (const auto& cj : j["components"]) {
      if (!cj.is_object() || !cj.contains("xi"))
        throw parse_error("rational_xi component: object with field 'xi' required");
      RationalXiComponent comp;
      comp.xi = detail::parse_rat(cj["xi"], "rational_xi.xi");
      if (cj.contains("S")) {
        if (!cj["S"].is_array())
          throw parse_error("rational_xi component: 'S' must be an array of primes");
        for (const auto& pj : cj["S"])
          comp.s_primes.push_back(detail::parse_bigint(pj, "rational_xi.S"));
      }
      comps.push_back(std::move(comp));
    }
    inst.rational_xi.emplace(std::move(comps));
  } else if (kind == "abelian_pair") {
    inst.kind = Instance::Kind::AbelianPair;
    if (!j.contains("A")) throw parse_error("abelian_pair instance: field 'A' required");
    IMat a = detail::parse_imat(j["A"], "abelian_pair.A");
    IMat b = j.contains("B") ? detail::parse_imat(j["B"], "abelian_pair.B")
                             : IMat::identity(a.dim());
    if (a.dim() != b.dim())
      throw invariant_error("abelian_pair instance: A and B dimensions differ");
    inst.pair = LayeredPair::make({{std::move(a), std::move(b)}});
  } else if (kind == "nilpotent") {
    inst.kind = Instance::Kind::Nilpotent;
    if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty())
      throw parse_error("nilpotent instance: non-empty array field 'layers' required");
    std::vector<LayeredPair::Layer> layers;
    for (const auto& lj : j["layers"]) {
      if (!lj.is_object() || !lj.contains("A"))
        throw parse_error("nilpotent layer: object with field 'A' required");
      IMat a = detail::parse_imat(lj["A"], "nilpotent.A");
      IMat b = lj.contains("B") ? detail::parse_imat(lj["B"], "nilpotent.B")
                                : IMat::identity(a.dim());
      if (a.dim() != b.dim())
        throw invariant_error("nilpotent layer: A and B dimensions differ");
      layers.push_back({std::move(a), std::move(b)});
    }
    inst.pair = LayeredPair::make(std::move(layers));
  } else {
    throw parse_error("instance: unknown kind '" + kind + "'");
  }
  return inst;
}

inline Instance parse_instance_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw parse_error("instance: invalid JSON");
  return parse_instance(j);
}

// R(1)..R(max_n) for any instance kind.
inline std::vector<ExtNat> reidemeister_sequence(const Instance& inst,
                                                 unsigned long max_n) {
  std::vector<ExtNat> seq;
  seq.reserve(max_n);
  for (unsigned long n = 1; n <= max_n; ++n) {
    switch (inst.kind) {
      case Instance::Kind::Padic:
        seq.push_back(reidemeister_padic(*inst.padic, n));
        break;
      case Instance::Kind::Torsion:
        seq.push_back(reidemeister_torsion(*inst.torsion, n));
        break;
      case Instance::Kind::RationalXi:
        seq.push_back(reidemeister_rational_xi(*inst.rational_xi, n));
        break;
      case Instance::Kind::AbelianPair:
      case Instance::Kind::Nilpotent:
        seq.push_back(coincidence_R_nilpotent(*inst.pair, n));
        break;
    }
  }
  return seq;
}

}  // namespace rzeta
