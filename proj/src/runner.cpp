#include "valdist/runner.hpp"

#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "valdist/census.hpp"
#include "valdist/distance.hpp"
#include "valdist/errors.hpp"
#include "valdist/extension.hpp"

namespace valdist {

namespace {

using nlohmann::ordered_json;

std::string immediacy_text(Immediacy w) {
  switch (w) {
    case Immediacy::yes: return "yes";
    case Immediacy::no: return "no";
    default: return "unknown-at-budget";
  }
}

ordered_json int_value(const Int& v) {
  if (v >= std::numeric_limits<long long>::min() &&
      v <= std::numeric_limits<long long>::max())
    return static_cast<long long>(v);
  return v.str();
}

std::string task_label(std::size_t index, const std::string& kind) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "task-%02zu-", index + 1);
  return buf + kind;
}

// The extension a task speaks about: scripted bases answer from their script,
// concrete bases adjoin a root of X^p - X = rhs.
ASExtensionRecord task_extension(const FieldDescriptor& K, const TaskSpec& t) {
  const std::string text = !t.rhs.empty() ? t.rhs : t.element;
  if (K.kind() == FieldKind::synthetic) {
    if (!text.empty())
      throw UnsupportedInput("scripted bases define their own generator; drop the rhs");
    return scripted_extension(K);
  }
  if (text.empty()) throw UnsupportedInput("the task needs an rhs over a concrete base");
  return as_extension(parse_series(text, K.rank(), K.ambient_field()), K);
}

CutModulus::Kind modulus_kind(const std::string& text) {
  if (text == "vk") return CutModulus::Kind::value_group;
  if (text == "divhull") return CutModulus::Kind::divisible_hull;
  throw UnsupportedInput("modulus must be vk or divhull, got '" + text + "'");
}

// Declared invariants of the base field, overridden by anything the task
// states explicitly.
BoundContext merged_context(const ASExtensionRecord& ext, const TaskSpec& t) {
  const FieldDescriptor& K = *ext.base;
  BoundContext ctx = t.context;
  if (!ctx.r) ctx.r = K.rank();
  if (!ctx.m) ctx.m = K.metadata().declared_m;
  if (!ctx.k) ctx.k = K.metadata().declared_k;
  if (!ctx.degree) ctx.degree = ext.degree;
  if (ctx.prime == 0) ctx.prime = K.exponent_spec().prime();
  ctx.perfect_hull_in_completion =
      ctx.perfect_hull_in_completion || K.metadata().perfect_hull_in_completion;
  return ctx;
}

ordered_json run_as_root(const FieldDescriptor& K, const TaskSpec& t) {
  if (t.rhs.empty()) throw UnsupportedInput("an as-root task needs an rhs");
  const HahnSeries b = parse_series(t.rhs, K.rank(), K.ambient_field());
  const ASExtensionRecord rec = as_extension(b, K);
  ordered_json j;
  j["field"] = K.id();
  j["rhs"] = render_series(rec.rhs);
  j["degree"] = rec.degree;
  j["generator"] = render_series(rec.generator);
  return j;
}

ordered_json run_distance(const FieldDescriptor& K, const TaskSpec& t, std::size_t budget) {
  if (t.element.empty()) throw UnsupportedInput("a distance task needs an element");
  const HahnSeries a = parse_series(t.element, K.rank(), K.ambient_field());
  const DistanceReport rep = distance_of(a, K, budget);
  ordered_json j;
  j["field"] = K.id();
  j["element"] = render_series(a);
  j["cut"] = render_cut(rep.cut);
  j["value_prefix"] = ordered_json::array();
  for (const GroupElement& g : rep.value_prefix)
    j["value_prefix"].push_back(render_group_element(g));
  j["weakly_immediate"] = immediacy_text(rep.weakly_immediate);
  j["budget_used"] = rep.budget_used;
  return j;
}

ordered_json run_classify(const FieldDescriptor& K, const TaskSpec& t, std::size_t budget) {
  ASExtensionRecord rec = task_extension(K, t);
  classify_as(rec, budget);
  ordered_json j;
  j["field"] = K.id();
  j["degree"] = rec.degree;
  j["classification"] = render_as_class(rec.classification);
  if (rec.generator_distance) j["distance"] = render_cut(*rec.generator_distance);
  if (!rec.dependence_witness.empty()) j["witness"] = rec.dependence_witness;
  return j;
}

ordered_json run_census(const FieldDescriptor& K, const TaskSpec& t, std::size_t budget,
                        std::uint64_t seed, bool& violated) {
  const ASExtensionRecord rec = task_extension(K, t);
  const CutModulus::Kind kind = modulus_kind(t.modulus);
  std::vector<CensusSample> samples;
  if (K.kind() != FieldKind::synthetic)
    samples = default_census_samples(K, t.degree_bound.value_or(rec.degree),
                                     t.samples.value_or(50), seed);
  CensusReport rep = ndd_census(rec, kind, samples, budget);
  check_bounds(rep, merged_context(rec, t));
  for (const BoundResult& b : rep.bounds)
    if (b.verdict == BoundVerdict::violated) violated = true;
  return ordered_json::parse(render_census_report(rep));
}

ordered_json run_verify(const TaskSpec& t) {
  if (t.theorems.empty()) throw UnsupportedInput("a verify task needs a theorems list");
  ordered_json j;
  j["bounds"] = ordered_json::array();
  for (const std::string& theorem : t.theorems) {
    ordered_json entry;
    entry["theorem"] = theorem;
    entry["value"] = int_value(bound_value(BoundQuery{theorem, t.context}));
    entry["verdict"] = "n/a";
    j["bounds"].push_back(entry);
  }
  return j;
}

std::string digest_line(const std::string& name, const ordered_json& j, bool failed) {
  std::string line = name + ": ";
  if (failed) return line + "error: " + j["error"]["message"].get<std::string>();
  if (j.contains("classification"))
    return line + j["classification"].get<std::string>() +
           (j.contains("distance") ? ", distance " + j["distance"].get<std::string>() : "");
  if (j.contains("buckets")) {
    std::size_t bad = 0;
    for (const auto& b : j["bounds"])
      if (b["verdict"] == "violated") ++bad;
    line += std::to_string(j["buckets"].size()) + " class(es) under the " +
            j["modulus"].get<std::string>() + " modulus";
    if (bad > 0) line += ", " + std::to_string(bad) + " bound(s) violated";
    return line;
  }
  if (j.contains("cut"))
    return line + "distance " + j["cut"].get<std::string>() + ", weakly immediate " +
           j["weakly_immediate"].get<std::string>();
  if (j.contains("generator"))
    return line + "degree " + std::to_string(j["degree"].get<unsigned>()) + " root adjoined";
  if (j.contains("bounds")) {
    std::vector<std::string> parts;
    for (const auto& b : j["bounds"])
      parts.push_back(b["theorem"].get<std::string>() + " = " + b["value"].dump());
    std::string joined;
    for (const std::string& p : parts) joined += (joined.empty() ? "" : ", ") + p;
    return line + joined;
  }
  return line + "done";
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  RunOutcome out;
  std::size_t failed = 0;
  std::size_t violations = 0;
  std::ostringstream summary;

  for (std::size_t i = 0; i < cfg.tasks.size(); ++i) {
    const TaskSpec& t = cfg.tasks[i];
    const std::size_t budget = t.budget.value_or(cfg.budget);
    const std::uint64_t seed = t.seed.value_or(cfg.seed);

    TaskReport report;
    report.name = task_label(i, t.kind);
    ordered_json body;
    try {
      if (t.kind == "as-root") body = run_as_root(*cfg.field, t);
      else if (t.kind == "distance") body = run_distance(*cfg.field, t, budget);
      else if (t.kind == "classify") body = run_classify(*cfg.field, t, budget);
      else if (t.kind == "census") body = run_census(*cfg.field, t, budget, seed, report.violated);
      else if (t.kind == "verify") body = run_verify(t);
      else throw UnsupportedInput("unknown task kind " + t.kind);
    } catch (const Error& e) {
      body = ordered_json();
      body["error"]["message"] = e.what();
      report.failed = true;
    }

    ordered_json j;
    j["task"] = report.name;
    for (const auto& item : body.items()) j[item.key()] = item.value();
    report.json = j.dump(2) + "\n";

    if (report.failed) ++failed;
    if (report.violated) ++violations;
    summary << digest_line(report.name, j, report.failed) << "\n";
    out.reports.push_back(std::move(report));
  }

  summary << cfg.tasks.size() << " task(s), " << failed << " failed, " << violations
          << " with violated bounds\n";
  out.summary = summary.str();
  out.exit_code = (failed > 0 || violations > 0) ? 1 : 0;
  return out;
}

}  // namespace valdist
