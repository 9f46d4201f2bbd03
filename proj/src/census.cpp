#include "valdist/census.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "valdist/distance.hpp"
#include "valdist/errors.hpp"

namespace valdist {

namespace {

long long need(const BoundQuery& q, const std::optional<long long>& v, const char* name) {
  if (!v)
    throw UnsupportedInput("bound " + q.theorem + " requires parameter " + name);
  if (*v < 0)
    throw UnsupportedInput("bound " + q.theorem + " got a negative " + name);
  return *v;
}

Int factorial(long long n) {
  Int f = 1;
  for (long long j = 2; j <= n; ++j) f *= j;
  return f;
}

Int int_pow(unsigned base, long long e) {
  Int v = 1;
  for (long long j = 0; j < e; ++j) v *= base;
  return v;
}

}  // namespace

Int bound_value(const BoundQuery& q) {
  const BoundContext& c = q.params;
  const std::string& t = q.theorem;
  if (t == "nddtow" || t == "nonhens-normal")
    return Int(need(q, c.m, "m")) * need(q, c.e, "e");
  if (t == "nonhens-general") {
    const long long m = need(q, c.m, "m");
    const long long deg = need(q, c.degree, "degree");
    if (c.prime < 2) throw UnsupportedInput("bound nonhens-general requires parameter p");
    // floor division: a non-integral quotient still bounds an integer count
    return Int(m) * factorial(deg) / int_pow(c.prime, m);
  }
  if (t == "r+m") return Int(need(q, c.r, "r")) + need(q, c.m, "m");
  if (t == "r+k") return Int(need(q, c.r, "r")) + need(q, c.k, "k");
  if (t == "MT1") return Int(2) * need(q, c.trdeg, "trdeg");
  if (t == "ndd_i") return Int(need(q, c.r, "r")) + Int(need(q, c.i, "i")) * need(q, c.m, "m");
  if (t == "r+1") return Int(need(q, c.r, "r")) + 1;
  if (t == "two_r") return Int(2) * need(q, c.r, "r");
  if (t == "idegp") return Int(1);
  throw UnsupportedInput("unknown bound id: " + t);
}

std::string render_verdict(BoundVerdict v) {
  switch (v) {
    case BoundVerdict::respected:
      return "respected";
    case BoundVerdict::violated:
      return "violated";
    case BoundVerdict::inapplicable:
      return "inapplicable";
  }
  throw Error("unreachable verdict");
}

namespace {

CutModulus census_modulus(CutModulus::Kind kind, const FieldDescriptor& K) {
  if (kind == CutModulus::Kind::value_group)
    return CutModulus::value_group(K.exponent_spec().coords(), K.exponent_spec().prime());
  return CutModulus::divisible_hull();
}

void bucket_insert(std::vector<CensusBucket>& buckets, const Cut& cut,
                   const std::string& witness, const CutModulus& mod) {
  for (CensusBucket& b : buckets) {
    if (equal_mod(b.representative, cut, mod).value_or(false)) {
      ++b.count;
      b.witnesses.push_back(witness);
      return;
    }
  }
  buckets.push_back(CensusBucket{cut, {witness}, 1});
}

void sort_buckets(std::vector<CensusBucket>& buckets) {
  std::sort(buckets.begin(), buckets.end(), [](const CensusBucket& a, const CensusBucket& b) {
    return render_cut(a.representative) < render_cut(b.representative);
  });
}

unsigned random_unit(const FiniteField& F, unsigned subfield_degree, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> pick(1, F.size() - 1);
  for (int attempt = 0; attempt < 64; ++attempt) {
    unsigned u = pick(rng);
    if (subfield_degree % F.element_degree(u) == 0) return u;
  }
  return 1;
}

GroupElement random_shift(const OrderedGroupSpec& spec, std::mt19937_64& rng) {
  const long long p = spec.prime();
  std::uniform_int_distribution<long long> num(-2, 2);
  std::uniform_int_distribution<int> denpow(0, 2);
  for (int attempt = 0; attempt < 16; ++attempt) {
    std::vector<Rational> coords(static_cast<size_t>(spec.rank()), Rational(0));
    Int den = 1;
    for (int j = denpow(rng); j > 0; --j) den *= p;
    coords[0] = Rational(Int(num(rng)), den);
    GroupElement g{std::move(coords)};
    if (member_value_group(g, spec)) return g;
  }
  std::vector<Rational> coords(static_cast<size_t>(spec.rank()), Rational(0));
  coords[0] = Rational(num(rng));
  return GroupElement{std::move(coords)};
}

}  // namespace

std::vector<CensusSample> default_census_samples(const FieldDescriptor& K,
                                                 unsigned degree_bound, std::size_t count,
                                                 std::uint64_t seed) {
  if (degree_bound < 2)
    throw UnsupportedInput("the enumeration needs room for nonconstant polynomials");
  const auto field = K.ambient_field();
  const unsigned sub = K.effective_subfield_degree();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> deg(1, degree_bound - 1);
  std::uniform_int_distribution<unsigned> coin(0, 1);

  std::vector<CensusSample> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    const unsigned d = deg(rng);
    std::vector<HahnSeries> coeffs;
    std::ostringstream text;
    for (unsigned j = 0; j <= d; ++j) {
      if (j < d && coin(rng) == 0) {
        coeffs.push_back(HahnSeries::zero(K.rank(), field));
        continue;
      }
      const unsigned u = random_unit(*field, sub, rng);
      const GroupElement q = random_shift(K.exponent_spec(), rng);
      coeffs.push_back(HahnSeries::monomial(field, q, u));
      if (text.tellp() > 0) text << " + ";
      text << "(" << render_series(coeffs.back()) << ")";
      if (j > 0) text << "*X^" << j;
    }
    out.push_back(CensusSample{make_polynomial(std::move(coeffs)), text.str()});
  }
  return out;
}

namespace {

// Constant slots never move a distance class (approximation over the base is
// translation-invariant), so direct evaluation keeps only the moving part.
Term monomial_term(const HahnSeries& c) {
  std::vector<Term> ts = all_terms(c);
  if (ts.size() != 1)
    throw UnsupportedInput("direct evaluation expects monomial coefficients");
  return ts.front();
}

HahnSeries evaluate_moving_part(const HahnSeries& a, const Polynomial& f) {
  const int d = f.degree();
  if (d < 1) throw UnsupportedInput("census polynomials are nonconstant");
  const FiniteField& F = *a.field();
  if (d == 1) {
    const Term c1 = monomial_term(f.coeffs[1]);
    return mul_monomial(a, c1.exponent, c1.coeff);
  }
  if (d == 2) {
    const Term c2 = monomial_term(f.coeffs[2]);
    // Complete the square: c2*(a + c1/(2 c2))^2 differs from f(a) by a base
    // element only.
    HahnSeries w = a;
    if (!f.coeffs[1].structurally_zero()) {
      const Term c1 = monomial_term(f.coeffs[1]);
      const unsigned two = F.from_int(2);
      if (two == 0)
        throw UnsupportedInput("the square completion needs odd characteristic");
      w = add_series(a, HahnSeries::monomial(a.field(), c1.exponent - c2.exponent,
                                             F.mul(c1.coeff, F.inv(F.mul(two, c2.coeff)))));
    }
    return mul_monomial(pow_below_accumulation(w, 2), c2.exponent, c2.coeff);
  }
  throw UnsupportedInput("direct evaluation is certified only through degree 2");
}

BoundContext descriptor_context(const ASExtensionRecord& ext) {
  const FieldDescriptor& K = *ext.base;
  BoundContext ctx;
  ctx.r = K.rank();
  ctx.m = K.metadata().declared_m;
  ctx.k = K.metadata().declared_k;
  ctx.degree = ext.degree;
  ctx.prime = K.exponent_spec().prime();
  ctx.perfect_hull_in_completion = K.metadata().perfect_hull_in_completion;
  return ctx;
}

}  // namespace

CensusReport ndd_census(const ASExtensionRecord& ext, CutModulus::Kind modulus,
                        const std::vector<CensusSample>& samples, std::size_t budget) {
  if (!ext.base) throw UnsupportedInput("extension record carries no base field");
  const FieldDescriptor& K = *ext.base;
  const CutModulus mod = census_modulus(modulus, K);

  CensusReport rep;
  rep.modulus = modulus;
  rep.budget = budget;
  rep.extension = "degree-" + std::to_string(ext.degree) + " extension of " + K.id();

  if (K.kind() == FieldKind::synthetic) {
    const SyntheticScript& sc = K.script();
    rep.degree_bound = ext.degree;
    rep.sample_count = sc.census_cuts.size();
    for (const std::string& lit : sc.census_cuts)
      bucket_insert(rep.buckets, parse_cut(lit, K.rank()), "scripted: " + lit, mod);
  } else {
    rep.sample_count = samples.size();
    for (const CensusSample& s : samples)
      rep.degree_bound = std::max(rep.degree_bound, static_cast<unsigned>(s.f.degree()) + 1);

    const DistanceReport base = distance_of(ext.generator, K, budget);
    if (!base.cut.resolved())
      throw UnresolvedBase("census requires a resolved generator distance");
    if (base.weakly_immediate == Immediacy::yes) {
      for (const CensusSample& s : samples) {
        if (s.f.degree() < 1) {
          ++rep.skipped;
          continue;
        }
        const ImmediacyWitness w = strong_immediacy_witness(ext.generator, K, s.f, budget);
        if (!w.ok) {
          ++rep.skipped;
          continue;
        }
        const TransportResult tr = transport_distance(s.f, base, w, K);
        if (!tr.cut.resolved()) {
          ++rep.skipped;
          continue;
        }
        bucket_insert(rep.buckets, tr.cut, s.text, mod);
      }
    }
    // otherwise: nothing weakly immediate to enumerate; the class list is empty
  }

  sort_buckets(rep.buckets);
  rep.ndd_lower = rep.buckets.size();
  return check_bounds(rep, descriptor_context(ext));
}

std::vector<CensusBucket> brute_force_distances(const ASExtensionRecord& ext,
                                                const std::vector<CensusSample>& samples,
                                                CutModulus::Kind modulus, std::size_t budget) {
  if (!ext.base) throw UnsupportedInput("extension record carries no base field");
  const FieldDescriptor& K = *ext.base;
  if (K.kind() == FieldKind::synthetic)
    throw UnsupportedInput("scripted bases have no concrete generator to evaluate");
  const CutModulus mod = census_modulus(modulus, K);

  std::vector<CensusBucket> buckets;
  for (const CensusSample& s : samples) {
    const HahnSeries image = evaluate_moving_part(ext.generator, s.f);
    const DistanceReport rep = distance_of(image, K, budget);
    if (!rep.cut.resolved())
      throw UnresolvedBase("direct evaluation left a distance unresolved within the budget");
    bucket_insert(buckets, rep.cut, s.text, mod);
  }
  sort_buckets(buckets);
  return buckets;
}

CensusReport& check_bounds(CensusReport& report, const BoundContext& ctx) {
  const auto ok = [](const std::optional<long long>& v) { return v && *v >= 0; };
  report.bounds.clear();
  static const char* ids[] = {"nddtow", "nonhens-general", "nonhens-normal", "r+m",
                              "r+k",    "MT1",             "ndd_i",          "r+1",
                              "two_r",  "idegp"};
  for (const char* id : ids) {
    const std::string t = id;
    bool applicable = false;
    if (t == "nddtow" || t == "nonhens-normal") applicable = ok(ctx.m) && ok(ctx.e);
    else if (t == "nonhens-general") applicable = ok(ctx.m) && ok(ctx.degree) && ctx.prime >= 2;
    else if (t == "r+m") applicable = ok(ctx.r) && ok(ctx.m);
    else if (t == "r+k") applicable = ok(ctx.r) && ok(ctx.k);
    else if (t == "MT1") applicable = ok(ctx.trdeg);
    else if (t == "ndd_i") applicable = ok(ctx.r) && ok(ctx.i) && ok(ctx.m);
    else if (t == "r+1") applicable = ok(ctx.r) && ctx.perfect_hull_in_completion;
    else if (t == "two_r") applicable = ok(ctx.r);
    else if (t == "idegp")
      applicable = ok(ctx.degree) && ctx.prime >= 2 && *ctx.degree == ctx.prime &&
                   report.modulus == CutModulus::Kind::value_group;
    if (!applicable) {
      report.bounds.push_back(BoundResult{t, std::nullopt, BoundVerdict::inapplicable});
      continue;
    }
    const Int value = bound_value(BoundQuery{t, ctx});
    const BoundVerdict verdict =
        Int(report.ndd_lower) <= value ? BoundVerdict::respected : BoundVerdict::violated;
    report.bounds.push_back(BoundResult{t, value, verdict});
  }
  return report;
}

std::string render_census_report(const CensusReport& report) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["extension"] = report.extension;
  j["modulus"] =
      report.modulus == CutModulus::Kind::value_group ? "value-group" : "divisible-hull";
  ordered_json en;
  en["degree_bound"] = report.degree_bound;
  en["samples"] = report.sample_count;
  en["skipped"] = report.skipped;
  en["budget"] = report.budget;
  j["enumeration"] = en;
  j["buckets"] = ordered_json::array();
  for (const CensusBucket& b : report.buckets) {
    ordered_json jb;
    jb["cut"] = render_cut(b.representative);
    jb["witnesses"] = b.witnesses;
    jb["count"] = b.count;
    j["buckets"].push_back(jb);
  }
  j["ndd_lower"] = report.ndd_lower;
  j["bounds"] = ordered_json::array();
  for (const BoundResult& b : report.bounds) {
    ordered_json jb;
    jb["theorem"] = b.theorem;
    if (b.value && *b.value <= Int(std::numeric_limits<long long>::max()))
      jb["value"] = b.value->convert_to<long long>();
    else if (b.value)
      jb["value"] = b.value->str();
    else
      jb["value"] = nullptr;
    jb["verdict"] = render_verdict(b.verdict);
    j["bounds"].push_back(jb);
  }
  return j.dump(2) + "\n";
}

}  // namespace valdist
