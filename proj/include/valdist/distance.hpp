#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <valdist/cuts.hpp>
#include <valdist/fields.hpp>
#include <valdist/hahn.hpp>

namespace valdist {

enum class Immediacy { yes, no, unknown_at_budget };

// Snapshot of a scan of v(a - K): the strictly increasing values realized by
// successively better approximants, the recognized cut of that set, and how
// many terms of a the scan consumed.  cut == infinity means a lies in K.
struct DistanceReport {
  std::string element;
  std::string field_id;
  std::vector<GroupElement> value_prefix;
  Cut cut = Cut::infinity(1);
  Immediacy weakly_immediate = Immediacy::unknown_at_budget;
  std::size_t budget_used = 0;
};

// Value scan only: walks up to `budget` terms of a, recording v(a - c) along
// the way; recognizes attained maxima and membership but never pattern-matches
// an unattained supremum.
DistanceReport value_set(const HahnSeries& a, const FieldDescriptor& K, std::size_t budget);

// Full distance: value_set plus certificate-driven recognition of unattained
// suprema at accumulation points of the support (principal-minus / edge-minus
// cuts).  Anything the engine cannot prove stays unresolved.
DistanceReport distance_of(const HahnSeries& a, const FieldDescriptor& K, std::size_t budget);

Immediacy is_weakly_immediate(const HahnSeries& a, const FieldDescriptor& K,
                              std::size_t budget);

// Stabilized Hasse-row values v(f_i(c)) over successive truncations c of a
// with v(a - c) >= gamma.  ok == false: stabilization failed within budget and
// `failure` says why (the counter-witness).
struct ImmediacyWitness {
  bool ok = false;
  GroupElement gamma;
  std::vector<std::optional<GroupElement>> fixed_values;  // per row; nullopt: row vanishes
  std::string failure;
};

ImmediacyWitness strong_immediacy_witness(const HahnSeries& a, const FieldDescriptor& K,
                                          const Polynomial& f, std::size_t budget);

// Distance of f(a) from K obtained symbolically from the distance of a: the
// p-power index h minimizing v(f_h(c)) + h*dist near the cut, the shift
// v(f_h(c)), and the transported cut shift(scale(base, h), v(f_h(c))).
struct TransportResult {
  unsigned h = 1;
  GroupElement shift;
  Cut cut = Cut::infinity(1);
};

TransportResult transport_distance(const Polynomial& f, const DistanceReport& base,
                                   const ImmediacyWitness& witness,
                                   const FieldDescriptor& K);

}  // namespace valdist
