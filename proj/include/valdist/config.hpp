#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "census.hpp"
#include "fields.hpp"

namespace valdist {

// One batch task.  Which members matter depends on `kind`:
//   as-root / classify / census read `rhs`, distance reads `element`,
//   census additionally reads modulus/degree_bound/samples/seed,
//   verify reads `theorems` plus the bound context.
struct TaskSpec {
  std::string kind;
  std::string rhs;
  std::string element;
  std::string modulus = "vk";  // vk | divhull
  std::optional<unsigned> degree_bound;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> budget;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> theorems;
  BoundContext context;
};

struct ExperimentConfig {
  std::optional<FieldDescriptor> field;
  std::size_t budget = 8;
  std::uint64_t seed = 0xced5u;
  std::string out;  // report directory; empty = print only
  std::vector<TaskSpec> tasks;
};

// Structured-text configuration: a TOML-style subset with [field],
// [synthetic] and repeated [[task]] tables, string/integer/boolean/array
// values, and # comments.  Throws ConfigError with a line reference.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace valdist
