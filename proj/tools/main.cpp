#include <iostream>
#include <string>
#include <utility>

#include "CLI11.hpp"

#include "hardyops/cli.hpp"

int main(int argc, char** argv)
{
   using namespace hardyops::cli;

   CLI::App app{"hardyops: weighted composition isometries and tri-circular projections"};
   app.require_subcommand(1);

   RunConfig cfg;
   std::size_t grid = 0;
   double tol = 0.0;
   std::string out;
   std::string csv;
   std::string op;
   std::string series;

   const auto add_common = [&](CLI::App* sub) {
      sub->add_option("--op", op, "operator JSON file");
      sub->add_option("--series", series, "series JSON file");
      sub->add_option("--p", cfg.p, "exponent p, a number >= 1 or inf")->capture_default_str();
      sub->add_option("--grid", grid, "boundary grid size (command-specific default)");
      sub->add_option("--samples", cfg.samples, "number of random probe polynomials")->capture_default_str();
      sub->add_option("--seed", cfg.seed, "probe RNG seed")->capture_default_str();
      sub->add_option("--tol", tol, "pass/fail tolerance (command-specific default)");
      sub->add_option("--out", out, "write the JSON report here instead of stdout");
      sub->add_option("--csv", csv, "write per-sample residuals as CSV");
   };

   const std::pair<const char*, const char*> commands[] = {
      {"norm", "H^p norm of a series (--series, --p)"},
      {"isometry-verify", "check ||Tf||_p = ||f||_p on random polynomials (--op)"},
      {"gtcp-build", "build and verify P, Q, R from an isometry of order three (--op)"},
      {"gtcp-classify", "decide which tri-circular family an operator realizes (--op)"},
      {"falsify", "probe for a Lagrange polynomial obstruction (--op)"},
      {"automorphism-check", "test a disc automorphism against H0 and the Neil algebra (--op)"},
   };
   for (const auto& [name, help] : commands) {
      add_common(app.add_subcommand(name, help));
   }

   try {
      app.parse(argc, argv);
   } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
   } catch (const CLI::ParseError& e) {
      std::cout << nlohmann::json{{"error", e.what()}, {"kind", "ParseError"}}.dump(2) << "\n";
      return 2;
   }

   cfg.command = *parse_command(app.get_subcommands().front()->get_name());
   const auto* sub = app.get_subcommands().front();
   if (sub->count("--grid")) cfg.grid = grid;
   if (sub->count("--tol")) cfg.tol = tol;
   if (sub->count("--out")) cfg.out = out;
   if (sub->count("--csv")) cfg.csv = csv;
   if (sub->count("--op")) cfg.op_path = op;
   if (sub->count("--series")) cfg.series_path = series;

   const RunResult result = run(cfg);
   write_outputs(result, cfg, std::cout);
   return result.exit_code;
}
