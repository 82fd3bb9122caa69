// Batch verification CLI: `verify` runs check suites against catalog cases,
// `list` prints the catalog, `load` validates a user case file.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parahyper/runner.hpp"

using namespace parahyper;

int main(int argc, char** argv) {
  CLI::App app{"numerical verification of para-hyperhermitian structures, mixed 3-structures, "
               "and their tangent-bundle, product, cone, and circle-bundle constructions"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run check suites against catalog cases");
  std::vector<std::string> cases, suites, tol_overrides;
  double fd_step = 1e-4;
  int fd_order = 2;
  int samples = 20;
  std::string seed_text;
  double margin = 0.1;
  int jobs = 1;
  bool heavy = false;
  std::string format = "text", out_path;
  verify->add_option("--case", cases, "glob on case ids (repeatable)");
  verify->add_option("--suite", suites,
                     "suite to run (repeatable): axioms, averaging, nijenhuis, lifts, "
                     "constructions, einstein");
  verify->add_option("--fd-step", fd_step, "finite-difference base step (default 1e-4)");
  verify->add_option("--fd-order", fd_order, "central stencil order")
      ->check(CLI::IsMember({2, 4}));
  verify->add_option("--samples", samples, "sample points per check (default 20)");
  verify->add_option("--seed", seed_text, "sample seed (default: PARAHYPER_SEED or 1)");
  verify->add_option("--margin", margin, "fraction of each box edge excluded from sampling");
  verify->add_option("--tol", tol_overrides, "tolerance override NAME=VALUE (repeatable)");
  verify->add_option("--jobs", jobs, "number of parallel suite executions");
  verify->add_flag("--heavy", heavy, "include cases gated behind the heavy flag");
  verify->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  verify->add_option("--out", out_path, "write the report to this path instead of stdout");

  app.add_subcommand("list", "list catalog cases");

  auto* load = app.add_subcommand("load", "parse and validate a user case file");
  std::string load_path;
  load->add_option("path", load_path, "case file (format: parahyper-case v1)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list")) {
      std::cout << list_cases(builtin_catalog());
      return 0;
    }
    if (app.got_subcommand("load")) {
      CatalogEntry e = load_user_case(load_path);
      std::cout << "ok: '" << e.id << "' (dim " << e.chart->dim()
                << ") satisfies the mixed 3-structure axioms\n";
      return 0;
    }

    RunConfig cfg;
    cfg.case_globs = cases;
    cfg.suites = suites;
    cfg.scheme.step = fd_step;
    cfg.scheme.order = fd_order;
    cfg.plan.count = samples;
    cfg.plan.margin = margin;
    cfg.jobs = jobs;
    cfg.heavy = heavy;
    cfg.format = format;
    if (!seed_text.empty()) {
      cfg.plan.seed = std::strtoull(seed_text.c_str(), nullptr, 10);
    } else if (const char* env = std::getenv("PARAHYPER_SEED")) {
      cfg.plan.seed = std::strtoull(env, nullptr, 10);
    } else {
      cfg.plan.seed = 1;
    }
    for (const std::string& ov : tol_overrides) {
      size_t eq = ov.find('=');
      if (eq == std::string::npos) throw InvalidConfig("--tol expects NAME=VALUE, got " + ov);
      cfg.tol.set(ov.substr(0, eq), std::stod(ov.substr(eq + 1)));
    }

    Catalog cat = builtin_catalog();
    RunResult result = run(cat, cfg);
    std::string rendered = format == "json" ? to_json(result, cfg) : to_text(result, cfg);
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      if (!f) throw InvalidConfig("cannot write to " + out_path);
      f << rendered;
    } else {
      std::cout << rendered;
    }
    return result.exit_code();
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const ValidationFailed& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
