#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cuts.hpp"
#include "fields.hpp"
#include "hahn.hpp"

namespace valdist {

// Where a degree-p root of X^p - X = b lands relative to its base field.
enum class ASClass {
  trivial,                // the root already lies in the base
  defectless_nontrivial,  // degree p fully accounted for by e and f
  dependent_defect,       // a p-th root from the perfect hull realizes the distance
  independent_defect,     // the distance sits on the lower edge of a convex subgroup
  unresolved,             // budget ran out before any certificate materialized
};

std::string render_as_class(ASClass c);

struct ASExtensionRecord {
  const FieldDescriptor* base = nullptr;
  HahnSeries rhs;        // finite-support member of the base field
  HahnSeries generator;  // solves X^p - X = rhs
  unsigned degree = 1;   // 1 when the generator lands in the base, p otherwise
  ASClass classification = ASClass::unresolved;
  std::string dependence_witness;         // set only for dependent_defect
  std::optional<Cut> generator_distance;  // recorded once classification computes it
};

// Adjoin a root of X^p - X = b.  The right-hand side must be a finite-support
// member of K; classification is left to classify_as.
ASExtensionRecord as_extension(const HahnSeries& b, const FieldDescriptor& K);

// Record described by a synthetic base's script: the generator is the labeled
// element the script talks about, with no materialized defining relation.
ASExtensionRecord scripted_extension(const FieldDescriptor& K);

// One sampled element certifying a value-group or residue-field jump.
struct GenerationWitness {
  std::string kind;     // "value" or "residue"
  std::string element;  // rendered description of the sample
  unsigned index = 1;   // the multiplier (for e) or degree (for f) it certifies
};

// Splitting of [L:K] into defect, ramification, residue and distinguished-unit
// parts: degree = d * e * f * g with d a power of the residue characteristic.
struct DefectCertificate {
  unsigned degree = 1;
  unsigned d = 1;
  unsigned e = 1;
  unsigned f = 1;
  unsigned g = 1;
  std::vector<GenerationWitness> evidence;
};

// Estimate e and f from random elements of K(generator) and back out the
// defect d = degree / (e * f * g).  Sampling can only undershoot e and f, so
// d is an upper bound certified by the named witnesses; g is always taken as
// 1.  Throws InconsistentSamples if the sampled parts fail to divide the
// degree or leave a non-p-power quotient.
DefectCertificate defect_certificate(const FieldDescriptor& K, const HahnSeries& generator,
                                     unsigned degree, unsigned samples,
                                     std::uint64_t seed = 0x5eedull);

// Decide the record's class within the given term budget and record the
// generator's distance on the way.  Never guesses: when neither a dependence
// witness nor an edge certificate appears, the record stays unresolved.
ASClass classify_as(ASExtensionRecord& rec, std::size_t budget);

}  // namespace valdist
