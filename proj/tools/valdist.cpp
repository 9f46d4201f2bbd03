// Command-line front end: one-shot subcommands for single questions and a
// batch `run` mode that executes a config file's task list, writing one JSON
// report per task plus a summary. Exit codes: 0 clean, 1 task failure or
// violated bound, 2 config error.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "valdist/errors.hpp"
#include "valdist/runner.hpp"

namespace {

using valdist::ConfigError;
using valdist::ExperimentConfig;
using valdist::RunOutcome;
using valdist::TaskSpec;

void write_reports(const ExperimentConfig& cfg, const RunOutcome& outcome,
                   const std::string& out_override) {
  namespace fs = std::filesystem;
  const std::string chosen = !out_override.empty() ? out_override
                             : !cfg.out.empty()    ? cfg.out
                                                   : std::string("reports");
  const fs::path dir(chosen);
  fs::create_directories(dir);
  for (const valdist::TaskReport& r : outcome.reports) {
    std::ofstream f(dir / (r.name + ".json"), std::ios::binary);
    if (!f) throw valdist::Error("cannot write report under " + dir.string());
    f << r.json;
  }
  std::ofstream s(dir / "summary.txt", std::ios::binary);
  if (!s) throw valdist::Error("cannot write summary under " + dir.string());
  s << outcome.summary;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"valuation-theoretic distance and defect toolkit"};
  app.require_subcommand(1);

  std::string field_config;  // config file providing the [field] table
  std::string literal;       // series literal for the one-shot subcommands
  std::string modulus = "vk";
  long long budget = -1;
  unsigned long long seed = 0;
  long long degree_bound = -1;
  long long samples = -1;
  std::vector<std::string> theorems;
  long long ctx_r = -1, ctx_m = -1, ctx_k = -1, ctx_i = -1, ctx_e = -1;
  long long ctx_degree = -1, ctx_trdeg = -1, ctx_p = -1;
  bool ctx_phic = false;

  std::string run_config;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "execute every task in a config file");
  run->add_option("config", run_config, "config file")->required();
  run->add_option("--out", out_dir, "report directory (overrides the config)");

  const auto add_shared = [&](CLI::App* sc) {
    sc->add_option("--config", field_config, "config file with the [field] table");
    sc->add_option("--budget", budget, "term budget for distance scans");
    sc->add_option("--seed", seed, "sampling seed");
  };

  auto* as_root = app.add_subcommand("as-root", "adjoin a root of X^p - X = rhs");
  add_shared(as_root);
  as_root->add_option("rhs", literal, "right-hand side series")->required();

  auto* distance = app.add_subcommand("distance", "distance of an element from the base");
  add_shared(distance);
  distance->add_option("element", literal, "series literal")->required();

  auto* classify = app.add_subcommand("classify", "classify the extension adjoining a root");
  add_shared(classify);
  classify->add_option("rhs", literal, "right-hand side series (omit for scripted bases)");

  auto* census = app.add_subcommand("census", "count distance classes over sampled polynomials");
  add_shared(census);
  census->add_option("rhs", literal, "right-hand side series (omit for scripted bases)");
  census->add_option("--modulus", modulus, "cut modulus: vk or divhull")
      ->check(CLI::IsMember({"vk", "divhull"}));
  census->add_option("--degree-bound", degree_bound, "strict degree bound for samples");
  census->add_option("--samples", samples, "number of sampled polynomials");

  auto* verify = app.add_subcommand("verify", "evaluate theorem bounds from given parameters");
  verify->add_option("theorems", theorems, "theorem tags to evaluate")->required();
  verify->add_option("--r", ctx_r, "rank of the value group");
  verify->add_option("--m", ctx_m, "exponent of the purely wild part");
  verify->add_option("--k", ctx_k, "torsion-free summand count");
  verify->add_option("--i", ctx_i, "tower index");
  verify->add_option("--e", ctx_e, "ramification index");
  verify->add_option("--degree", ctx_degree, "extension degree");
  verify->add_option("--trdeg", ctx_trdeg, "transcendence degree");
  verify->add_option("--p", ctx_p, "characteristic");
  verify->add_flag("--perfect-hull-in-completion", ctx_phic,
                   "the perfect hull sits inside the completion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (app.got_subcommand(run)) {
      ExperimentConfig cfg = valdist::load_config(run_config);
      const RunOutcome outcome = valdist::run_experiment(cfg);
      write_reports(cfg, outcome, out_dir);
      std::cout << outcome.summary;
      return outcome.exit_code;
    }

    TaskSpec t;
    ExperimentConfig cfg;
    for (CLI::App* sc : {as_root, distance, classify, census, verify})
      if (app.got_subcommand(sc)) t.kind = sc->get_name();
    if (t.kind != "verify") {
      if (field_config.empty())
        throw ConfigError("one-shot " + t.kind + " needs --config with a [field] table");
      cfg = valdist::load_config(field_config);
      cfg.tasks.clear();
    }
    if (t.kind == "distance") t.element = literal;
    else t.rhs = literal;
    t.modulus = modulus;
    if (budget > 0) t.budget = static_cast<std::size_t>(budget);
    if (seed != 0) t.seed = seed;
    if (degree_bound > 0) t.degree_bound = static_cast<unsigned>(degree_bound);
    if (samples >= 0) t.samples = static_cast<std::size_t>(samples);
    t.theorems = theorems;
    if (ctx_r >= 0) t.context.r = ctx_r;
    if (ctx_m >= 0) t.context.m = ctx_m;
    if (ctx_k >= 0) t.context.k = ctx_k;
    if (ctx_i >= 0) t.context.i = ctx_i;
    if (ctx_e >= 0) t.context.e = ctx_e;
    if (ctx_degree >= 0) t.context.degree = ctx_degree;
    if (ctx_trdeg >= 0) t.context.trdeg = ctx_trdeg;
    if (ctx_p >= 2) t.context.prime = static_cast<unsigned>(ctx_p);
    t.context.perfect_hull_in_completion = ctx_phic;
    cfg.tasks.push_back(std::move(t));

    const RunOutcome outcome = valdist::run_experiment(cfg);
    std::cout << outcome.reports.at(0).json;
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const valdist::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
