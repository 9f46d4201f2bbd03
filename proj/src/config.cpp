#include "valdist/config.hpp"

#include <fstream>
#include <sstream>

#include "valdist/errors.hpp"

namespace valdist {

namespace {

std::string trim(std::string_view s) {
  const size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Cut off a trailing comment, honoring double-quoted strings.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    else if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

[[noreturn]] void fail(int lineno, const std::string& what) {
  throw ConfigError("config line " + std::to_string(lineno) + ": " + what);
}

long long to_int(const std::string& v, int lineno, const std::string& key) {
  try {
    size_t used = 0;
    const long long n = std::stoll(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  fail(lineno, "key " + key + " expects an integer, got '" + v + "'");
}

bool to_bool(const std::string& v, int lineno, const std::string& key) {
  if (v == "true") return true;
  if (v == "false") return false;
  fail(lineno, "key " + key + " expects true or false, got '" + v + "'");
}

std::string unquote(const std::string& v, int lineno, const std::string& key) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
    return v.substr(1, v.size() - 2);
  fail(lineno, "key " + key + " expects a quoted string, got '" + v + "'");
}

// Single-line array of quoted strings (commas inside quotes are literal).
std::vector<std::string> to_array(const std::string& v, int lineno, const std::string& key) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']')
    fail(lineno, "key " + key + " expects an array");
  std::vector<std::string> items;
  std::string cur;
  bool quoted = false;
  bool any = false;
  for (size_t i = 1; i + 1 < v.size(); ++i) {
    const char c = v[i];
    if (c == '"') quoted = !quoted;
    if (c == ',' && !quoted) {
      items.push_back(trim(cur));
      cur.clear();
      any = true;
      continue;
    }
    cur += c;
  }
  const std::string last = trim(cur);
  if (!last.empty()) items.push_back(last);
  else if (any) fail(lineno, "key " + key + " has a trailing comma");
  for (std::string& item : items) item = unquote(item, lineno, key);
  return items;
}

CoordGroup parse_coord(const std::string& text, int lineno) {
  if (text == "p-powers") return CoordGroup::p_powers();
  if (text == "rationals") return CoordGroup::rationals();
  if (text.rfind("lattice:", 0) == 0)
    return CoordGroup::lattice(
        static_cast<int>(to_int(text.substr(8), lineno, "coords")));
  fail(lineno, "unknown coordinate group '" + text + "'");
}

struct FieldBuild {
  bool seen = false;
  int defined_at = 0;
  std::string kind;
  unsigned p = 2;
  unsigned ambient_degree = 1;
  int level = 0;
  int rank = 1;
  unsigned subfield_degree = 0;
  std::vector<std::string> coords;
  FieldMetadata metadata;
};

struct ScriptBuild {
  bool seen = false;
  int defined_at = 0;
  SyntheticScript script;
  std::vector<std::string> prefix_text;
  std::string eta_value_text;
};

FieldDescriptor build_field(const FieldBuild& fb, const ScriptBuild& sb) {
  const auto F = FiniteField::make(fb.p, fb.ambient_degree);
  const bool has_metadata = fb.metadata.declared_m || fb.metadata.declared_k ||
                            fb.metadata.perfect_hull_in_completion;
  if (fb.kind == "laurent" || fb.kind == "perfect-hull") {
    // These descriptors carry no declared invariants; refuse rather than drop.
    if (has_metadata)
      fail(fb.defined_at, "kind " + fb.kind + " does not take declared invariants");
  }
  if (fb.kind == "laurent")
    return FieldDescriptor::laurent(fb.level, fb.rank, F, fb.subfield_degree);
  if (fb.kind == "perfect-hull")
    return FieldDescriptor::perfect_hull(fb.rank, F, fb.subfield_degree);
  if (fb.kind == "full-restricted") {
    std::vector<CoordGroup> coords;
    if (fb.coords.empty())
      coords.assign(static_cast<size_t>(fb.rank), CoordGroup::lattice(0));
    else if (fb.coords.size() == 1)
      coords.assign(static_cast<size_t>(fb.rank), parse_coord(fb.coords[0], fb.defined_at));
    else
      for (const std::string& c : fb.coords) coords.push_back(parse_coord(c, fb.defined_at));
    return FieldDescriptor::full_restricted(OrderedGroupSpec(fb.rank, fb.p, std::move(coords)),
                                            F, fb.subfield_degree, fb.metadata);
  }
  if (fb.kind == "synthetic") {
    if (!sb.seen) fail(fb.defined_at, "kind synthetic needs a [synthetic] table");
    SyntheticScript script = sb.script;
    for (const std::string& g : sb.prefix_text)
      script.prefix.push_back(parse_group_element(g, fb.rank));
    if (!sb.eta_value_text.empty())
      script.eta_value = parse_group_element(sb.eta_value_text, fb.rank);
    return FieldDescriptor::synthetic(std::move(script), fb.rank, F, fb.metadata);
  }
  fail(fb.defined_at, "unknown field kind '" + fb.kind + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  FieldBuild fb;
  ScriptBuild sb;
  std::string section;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line == "[field]") {
        fb.seen = true;
        fb.defined_at = lineno;
        section = "field";
      } else if (line == "[synthetic]") {
        sb.seen = true;
        sb.defined_at = lineno;
        section = "synthetic";
      } else if (line == "[[task]]") {
        cfg.tasks.emplace_back();
        section = "task";
      } else {
        fail(lineno, "unknown table " + line);
      }
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) fail(lineno, "expected key = value");

    if (section.empty()) {
      if (key == "budget") {
        const long long b = to_int(val, lineno, key);
        if (b <= 0) fail(lineno, "budget must be positive");
        cfg.budget = static_cast<std::size_t>(b);
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(to_int(val, lineno, key));
      } else if (key == "out") {
        cfg.out = unquote(val, lineno, key);
      } else {
        fail(lineno, "unknown top-level key " + key);
      }
    } else if (section == "field") {
      if (key == "kind") fb.kind = unquote(val, lineno, key);
      else if (key == "p") fb.p = static_cast<unsigned>(to_int(val, lineno, key));
      else if (key == "ambient_degree")
        fb.ambient_degree = static_cast<unsigned>(to_int(val, lineno, key));
      else if (key == "level") fb.level = static_cast<int>(to_int(val, lineno, key));
      else if (key == "rank") fb.rank = static_cast<int>(to_int(val, lineno, key));
      else if (key == "subfield_degree")
        fb.subfield_degree = static_cast<unsigned>(to_int(val, lineno, key));
      else if (key == "coords") fb.coords = to_array(val, lineno, key);
      else if (key == "declared_m")
        fb.metadata.declared_m = static_cast<int>(to_int(val, lineno, key));
      else if (key == "declared_k")
        fb.metadata.declared_k = static_cast<int>(to_int(val, lineno, key));
      else if (key == "perfect_hull_in_completion")
        fb.metadata.perfect_hull_in_completion = to_bool(val, lineno, key);
      else fail(lineno, "unknown [field] key " + key);
    } else if (section == "synthetic") {
      if (key == "generator") sb.script.generator = unquote(val, lineno, key);
      else if (key == "generator_degree")
        sb.script.generator_degree = static_cast<int>(to_int(val, lineno, key));
      else if (key == "distance") sb.script.distance = unquote(val, lineno, key);
      else if (key == "prefix") sb.prefix_text = to_array(val, lineno, key);
      else if (key == "eta") sb.script.eta = unquote(val, lineno, key);
      else if (key == "eta_value") sb.eta_value_text = unquote(val, lineno, key);
      else if (key == "census_cuts") sb.script.census_cuts = to_array(val, lineno, key);
      else fail(lineno, "unknown [synthetic] key " + key);
    } else {  // task
      TaskSpec& t = cfg.tasks.back();
      if (key == "kind") t.kind = unquote(val, lineno, key);
      else if (key == "rhs") t.rhs = unquote(val, lineno, key);
      else if (key == "element") t.element = unquote(val, lineno, key);
      else if (key == "modulus") t.modulus = unquote(val, lineno, key);
      else if (key == "degree_bound")
        t.degree_bound = static_cast<unsigned>(to_int(val, lineno, key));
      else if (key == "samples")
        t.samples = static_cast<std::size_t>(to_int(val, lineno, key));
      else if (key == "budget") {
        const long long b = to_int(val, lineno, key);
        if (b <= 0) fail(lineno, "budget must be positive");
        t.budget = static_cast<std::size_t>(b);
      } else if (key == "seed")
        t.seed = static_cast<std::uint64_t>(to_int(val, lineno, key));
      else if (key == "theorems") t.theorems = to_array(val, lineno, key);
      else if (key == "r") t.context.r = to_int(val, lineno, key);
      else if (key == "m") t.context.m = to_int(val, lineno, key);
      else if (key == "k") t.context.k = to_int(val, lineno, key);
      else if (key == "i") t.context.i = to_int(val, lineno, key);
      else if (key == "e") t.context.e = to_int(val, lineno, key);
      else if (key == "degree") t.context.degree = to_int(val, lineno, key);
      else if (key == "trdeg") t.context.trdeg = to_int(val, lineno, key);
      else if (key == "p") t.context.prime = static_cast<unsigned>(to_int(val, lineno, key));
      else if (key == "perfect_hull_in_completion")
        t.context.perfect_hull_in_completion = to_bool(val, lineno, key);
      else fail(lineno, "unknown [[task]] key " + key);
    }
  }

  if (fb.seen) {
    if (fb.kind.empty()) fail(fb.defined_at, "[field] needs a kind");
    if (fb.p < 2) fail(fb.defined_at, "field characteristic must be at least 2");
    cfg.field = build_field(fb, sb);
  }
  for (size_t i = 0; i < cfg.tasks.size(); ++i) {
    const TaskSpec& t = cfg.tasks[i];
    if (t.kind.empty())
      throw ConfigError("task " + std::to_string(i + 1) + " has no kind");
    const bool known = t.kind == "as-root" || t.kind == "distance" || t.kind == "classify" ||
                       t.kind == "census" || t.kind == "verify";
    if (!known) throw ConfigError("task " + std::to_string(i + 1) + ": unknown kind " + t.kind);
    if (t.kind != "verify" && !cfg.field)
      throw ConfigError("task " + std::to_string(i + 1) + " (" + t.kind +
                        ") needs a [field] table");
    if (t.modulus != "vk" && t.modulus != "divhull")
      throw ConfigError("task " + std::to_string(i + 1) + ": modulus must be vk or divhull");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace valdist
