#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ffbias/experiment.hpp"

namespace {

void write_out(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f)
    ffbias::raise(ffbias::errc::invalid_argument, "cannot open output file " + path);
  f << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ffbias - exact fiber censuses, bias, rank and singular-locus "
               "measurements over finite fields"};
  app.require_subcommand(1);

  ffbias::exp::Config cfg;
  std::string out_path;
  std::string aggregate_out;

  app.set_config("--config", "", "key = value config file; flags override it");
  app.add_option("--field", cfg.field, "base field spec p^m or p^m:n")
      ->capture_default_str();
  app.add_option("--nvars", cfg.nvars, "number of variables")->capture_default_str();
  app.add_option("--poly", cfg.poly, "polynomial text, e.g. 'x0*x1 + 2'");
  app.add_option("--seed", cfg.seed, "deterministic seed")->capture_default_str();
  app.add_option("--budget", cfg.budget, "max point evaluations per sweep")
      ->capture_default_str();
  app.add_option("--workers", cfg.workers, "worker threads")
      ->envname("FFBIAS_WORKERS")
      ->capture_default_str();
  app.add_option("--nmax", cfg.nmax, "largest extension level to compute")
      ->capture_default_str();
  app.add_option("--c", cfg.c_values, "c values to test (comma separated)")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--t-ext", cfg.t_ext_degree,
                 "extension degree the shifts t are swept over")
      ->capture_default_str();
  app.add_option("--rank-budget", cfg.rank_budget, "randomized witness attempts")
      ->capture_default_str();
  app.add_option("--rank-ext", cfg.rank_ext_degree,
                 "largest extension degree for rank witnesses")
      ->capture_default_str();
  app.add_option("--out", out_path, "output file (default stdout)");

  auto* cmd_census = app.add_subcommand("census", "exact fiber census at one level");
  cmd_census->add_option("--n", cfg.level_n, "extension level (default: field spec)");
  auto* cmd_bias = app.add_subcommand("bias", "per-level bias measures and estimate");
  auto* cmd_rank = app.add_subcommand("rank", "certified rank interval with witness");
  auto* cmd_singular =
      app.add_subcommand("singular", "singular locus counts and codimension");
  auto* cmd_good = app.add_subcommand("good", "c-goodness sweep over sampled shifts");
  auto* cmd_lemma3 = app.add_subcommand(
      "verify-lemma3", "deviation bound shape check (uses the first --c value)");
  auto* cmd_derived =
      app.add_subcommand("derived-bound", "bias estimate against 2/(c-2)");
  auto* cmd_ensemble =
      app.add_subcommand("ensemble", "seeded random-polynomial pipeline, CSV rows");
  cmd_ensemble->add_option("--size", cfg.ensemble_size, "number of rows")
      ->capture_default_str();
  cmd_ensemble->add_option("--degree", cfg.degree, "sampled polynomial degree")
      ->capture_default_str();
  cmd_ensemble->add_option("--aggregate-out", aggregate_out,
                           "file for the aggregate JSON");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    using namespace ffbias::exp;
    if (cmd_ensemble->parsed()) {
      EnsembleOutput eo = run_ensemble(cfg);
      write_out(out_path, eo.csv);
      if (!aggregate_out.empty())
        write_out(aggregate_out, eo.aggregate_json);
      else if (!out_path.empty())
        std::cout << eo.aggregate_json;
      else
        std::cerr << eo.aggregate_json;
      return 0;
    }
    std::string result;
    if (cmd_census->parsed())
      result = run_census(cfg);
    else if (cmd_bias->parsed())
      result = run_bias(cfg);
    else if (cmd_rank->parsed())
      result = run_rank(cfg);
    else if (cmd_singular->parsed())
      result = run_singular(cfg);
    else if (cmd_good->parsed())
      result = run_good(cfg);
    else if (cmd_lemma3->parsed())
      result = run_verify_lemma3(cfg, cfg.c_values.empty() ? 2 : cfg.c_values.front());
    else if (cmd_derived->parsed())
      result = run_derived_bound(cfg);
    write_out(out_path, result);
    return 0;
  } catch (const ffbias::error& e) {
    std::cerr << e.what() << "\n";
    return ffbias::is_usage_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
