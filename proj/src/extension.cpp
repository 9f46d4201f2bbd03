#include "valdist/extension.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "valdist/distance.hpp"
#include "valdist/errors.hpp"

namespace valdist {

namespace {

// Random element of the base value group: rejection against the coordinate
// discipline, falling back to the (always admissible) zero exponent.
GroupElement random_base_exponent(const OrderedGroupSpec& spec, std::mt19937_64& rng) {
  const int rank = spec.rank();
  const long long p = spec.prime();
  std::uniform_int_distribution<long long> num(-8, 8);
  std::uniform_int_distribution<int> denpow(0, 3);
  for (int attempt = 0; attempt < 32; ++attempt) {
    std::vector<Rational> coords;
    coords.reserve(static_cast<size_t>(rank));
    for (int i = 0; i < rank; ++i) {
      Int den = 1;
      for (int j = denpow(rng); j > 0; --j) den *= p;
      coords.emplace_back(Int(num(rng)), den);
    }
    GroupElement g{std::move(coords)};
    if (member_value_group(g, spec)) return g;
  }
  return GroupElement::zero(rank);
}

// Random element of the base residue field (ambient elements whose degree
// divides the declared subfield degree), falling back to 1.
unsigned random_base_coeff(const FiniteField& F, unsigned subfield_degree,
                           std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> pick(1, F.size() - 1);
  for (int attempt = 0; attempt < 64; ++attempt) {
    unsigned u = pick(rng);
    if (subfield_degree % F.element_degree(u) == 0) return u;
  }
  return 1;
}

unsigned strip_p_power(unsigned d, unsigned p) {
  while (d > 1 && d % p == 0) d /= p;
  return d;
}

}  // namespace

std::string render_as_class(ASClass c) {
  switch (c) {
    case ASClass::trivial:
      return "trivial";
    case ASClass::defectless_nontrivial:
      return "defectless-nontrivial";
    case ASClass::dependent_defect:
      return "dependent-defect";
    case ASClass::independent_defect:
      return "independent-defect";
    case ASClass::unresolved:
      return "unresolved";
  }
  throw Error("unreachable extension class");
}

ASExtensionRecord as_extension(const HahnSeries& b, const FieldDescriptor& K) {
  if (b.rank() != K.rank())
    throw RankMismatch("right-hand side and base field have different ranks");
  if (K.kind() == FieldKind::synthetic)
    throw UnsupportedInput(
        "a scripted base describes its extension directly; use scripted_extension");
  const std::vector<Term> terms = all_terms(b);
  for (const Term& t : terms)
    if (!term_in_field(t, K))
      throw UnsupportedInput("right-hand side lies outside the base field");

  HahnSeries root = artin_schreier_root(b);
  const unsigned degree = member_series(root, K) ? 1 : K.exponent_spec().prime();
  return ASExtensionRecord{&K, b, std::move(root), degree, ASClass::unresolved, {}, {}};
}

ASExtensionRecord scripted_extension(const FieldDescriptor& K) {
  if (K.kind() != FieldKind::synthetic)
    throw UnsupportedInput("only scripted bases describe extensions without a relation");
  const SyntheticScript& sc = K.script();
  if (sc.generator.empty())
    throw UnsupportedInput("script names no generator");
  const unsigned degree =
      sc.generator_degree <= 1 ? 1u : static_cast<unsigned>(sc.generator_degree);
  return ASExtensionRecord{&K,
                           HahnSeries::zero(K.rank(), K.ambient_field()),
                           HahnSeries::labeled(sc.generator, K.rank(), K.ambient_field()),
                           degree,
                           ASClass::unresolved,
                           {},
                           {}};
}

DefectCertificate defect_certificate(const FieldDescriptor& K, const HahnSeries& generator,
                                     unsigned degree, unsigned samples,
                                     std::uint64_t seed) {
  const unsigned p = K.exponent_spec().prime();
  DefectCertificate cert;
  cert.degree = degree;
  if (degree <= 1) return cert;

  // A scripted base declares a divisible value group and the full ambient
  // residue field, so neither e nor f can move: the degree is all defect.
  if (K.kind() == FieldKind::synthetic) {
    cert.d = degree;
    if (strip_p_power(cert.d, p) != 1)
      throw InconsistentSamples("defect part of a scripted extension is not a p-power");
    return cert;
  }

  const std::optional<Term> lead = leading_term(generator);
  if (!lead) throw UnsupportedInput("a zero generator cannot span a proper extension");

  const OrderedGroupSpec& vgroup = K.exponent_spec();
  const unsigned res_degree = K.effective_subfield_degree();
  const FiniteField& F = *K.ambient_field();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> coin(0, 3);
  std::uniform_int_distribution<unsigned> pick_power(0, degree - 1);

  // Powers of the generator's leading term; a random K-combination of
  // generator powers has, off ties, the value and residue of its least slot.
  std::vector<GroupElement> power_value;
  std::vector<unsigned> power_coeff;
  for (unsigned i = 0; i < degree; ++i) {
    power_value.push_back(lead->exponent.scaled(Rational(i)));
    power_coeff.push_back(F.pow(lead->coeff, i));
  }

  for (unsigned s = 0; s < samples; ++s) {
    std::optional<GroupElement> value;
    unsigned residue = 0;
    for (int attempt = 0; attempt < 64 && !value; ++attempt) {
      std::optional<GroupElement> best;
      bool tie = false;
      unsigned best_slot = 0, best_coeff = 0;
      bool any = false;
      for (unsigned i = 0; i < degree; ++i) {
        if (coin(rng) == 0) continue;  // slot left empty
        any = true;
        GroupElement v = random_base_exponent(vgroup, rng) + power_value[i];
        unsigned u = random_base_coeff(F, res_degree, rng);
        if (!best || lex_less(v, *best)) {
          best = v;
          tie = false;
          best_slot = i;
          best_coeff = u;
        } else if (v == *best) {
          tie = true;
        }
      }
      if (!any) {
        unsigned i = pick_power(rng);
        best = random_base_exponent(vgroup, rng) + power_value[i];
        best_slot = i;
        best_coeff = random_base_coeff(F, res_degree, rng);
        tie = false;
      }
      if (tie) continue;  // colliding slots could cancel; redraw
      value = best;
      residue = F.mul(best_coeff, power_coeff[best_slot]);
    }
    if (!value) continue;

    // Ramification: least multiplier pulling the sampled value into vK.
    unsigned mult = 0;
    for (unsigned m = 1; m <= degree; ++m) {
      if (member_value_group(value->scaled(Rational(m)), vgroup)) {
        mult = m;
        break;
      }
    }
    if (mult == 0)
      throw InconsistentSamples(
          "sampled value is not torsion modulo the base value group within the degree");
    unsigned e_next = std::lcm(cert.e, mult);
    if (e_next != cert.e) {
      cert.evidence.push_back({"value", "v(x) = " + render_group_element(*value), mult});
      cert.e = e_next;
    }

    // Residue growth: degree of the sampled leading coefficient over the
    // base residue field.
    const unsigned rd = F.element_degree(residue);
    const unsigned jump = rd / std::gcd(rd, res_degree);
    unsigned f_next = std::lcm(cert.f, jump);
    if (f_next != cert.f) {
      std::ostringstream what;
      what << "leading coefficient of degree " << rd << " over the prime field";
      cert.evidence.push_back({"residue", what.str(), jump});
      cert.f = f_next;
    }

    if (cert.e * cert.f > degree)
      throw InconsistentSamples("sampled ramification and residue parts exceed the degree");
  }

  const unsigned split = cert.e * cert.f * cert.g;
  if (degree % split != 0)
    throw InconsistentSamples("sampled ramification and residue parts do not divide the degree");
  cert.d = degree / split;
  if (strip_p_power(cert.d, p) != 1)
    throw InconsistentSamples("defect part left by the samples is not a p-power");
  return cert;
}

namespace {

constexpr unsigned kClassifySamples = 48;

// True when a candidate at distance `value` provably lands beyond every
// element of the base field.  A resolved lower cut gives an exact test
// (reaching the cut point beats the sup approached from below); an
// unresolved cut only supports the weaker all-scanned-values comparison.
// Attained or infinite cuts admit no dependence witness at all.
bool certifies_dependence(const Cut& cut, const std::vector<GroupElement>& prefix,
                          const std::optional<GroupElement>& value) {
  if (!value) return true;  // the candidate coincides with the generator
  switch (cut.kind()) {
    case Cut::Kind::principal_minus:
    case Cut::Kind::edge_minus:
      return !lex_less(*value, cut.point());
    case Cut::Kind::unresolved:
      return !prefix.empty() &&
             std::all_of(prefix.begin(), prefix.end(),
                         [&](const GroupElement& g) { return lex_less(g, *value); });
    default:
      return false;
  }
}

// Dependence witness search over p-th roots of leading sections of the
// generator's p-th power: each candidate lies in the perfect hull of the
// base whenever the section itself lies in the base.  Against an unresolved
// cut the sections stay strictly shallower than the scan, so a mere
// truncation of the generator can never pose as a witness.
std::optional<std::string> dependence_witness(const ASExtensionRecord& rec,
                                              const DistanceReport& report) {
  const FieldDescriptor& K = *rec.base;
  std::size_t depth = 6;
  if (report.cut.kind() == Cut::Kind::unresolved)
    depth = std::min<std::size_t>(depth, report.budget_used ? report.budget_used - 1 : 0);
  if (depth == 0) return std::nullopt;
  const HahnSeries power = frobenius_pow(rec.generator);
  const std::vector<Term> lead =
      first_terms(power, power.wall(), static_cast<int>(depth));
  for (std::size_t j = 1; j <= lead.size(); ++j) {
    std::vector<Term> section(lead.begin(), lead.begin() + static_cast<long>(j));
    if (!contains(section, K)) continue;
    HahnSeries candidate =
        frobenius_root(HahnSeries::from_terms(K.rank(), K.ambient_field(), section));
    if (member_series(candidate, K)) continue;  // base members cannot witness defect
    std::optional<GroupElement> v =
        valuation(add_series(rec.generator, negate_series(candidate)));
    if (certifies_dependence(report.cut, report.value_prefix, v)) {
      std::ostringstream what;
      what << "p-th root of the " << j << "-term section of the generator's p-th power";
      return what.str();
    }
  }
  return std::nullopt;
}

}  // namespace

ASClass classify_as(ASExtensionRecord& rec, std::size_t budget) {
  if (!rec.base) throw UnsupportedInput("extension record carries no base field");
  const FieldDescriptor& K = *rec.base;

  if (rec.degree <= 1) {
    rec.classification = ASClass::trivial;
    return rec.classification;
  }

  const DefectCertificate cert =
      defect_certificate(K, rec.generator, rec.degree, kClassifySamples);
  if (cert.d == 1) {
    rec.classification = ASClass::defectless_nontrivial;
    return rec.classification;
  }

  const DistanceReport report = distance_of(rec.generator, K, budget);
  rec.generator_distance = report.cut;

  // Dependent: some p-th root over the base realizes the distance, landing
  // beyond everything the base field attains.
  if (K.kind() == FieldKind::synthetic) {
    const SyntheticScript& sc = K.script();
    if (!sc.eta.empty() && sc.eta_value) {
      std::vector<GroupElement> seen = report.value_prefix;
      seen.insert(seen.end(), sc.prefix.begin(), sc.prefix.end());
      if (certifies_dependence(report.cut, seen, sc.eta_value)) {
        rec.dependence_witness = sc.eta;
        rec.classification = ASClass::dependent_defect;
        return rec.classification;
      }
    }
  } else if (std::optional<std::string> witness = dependence_witness(rec, report)) {
    rec.dependence_witness = *witness;
    rec.classification = ASClass::dependent_defect;
    return rec.classification;
  }

  // Independent: the distance certifies itself as the lower edge of a convex
  // subgroup (the trivial one for a principal cut).
  if (std::optional<EdgeInfo> edge = classify_edge(report.cut);
      edge && edge->side == EdgeInfo::Side::lower) {
    rec.classification = ASClass::independent_defect;
    return rec.classification;
  }

  rec.classification = ASClass::unresolved;
  return rec.classification;
}

}  // namespace valdist
