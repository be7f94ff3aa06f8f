#pragma once

// Command pipelines behind the hardyops executable. run() never throws on
// bad input: it returns exit code 2 and an {"error": ...} object instead.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hardyops/errors.hpp"
#include "hardyops/hardy.hpp"
#include "hardyops/json_io.hpp"
#include "hardyops/operators.hpp"
#include "hardyops/projections.hpp"
#include "hardyops/report.hpp"
#include "hardyops/samples.hpp"

namespace hardyops::cli {

using json = nlohmann::json;

enum class Command { norm, isometry_verify, gtcp_build, gtcp_classify, falsify, automorphism_check };

inline std::optional<Command> parse_command(const std::string& s)
{
   if (s == "norm") return Command::norm;
   if (s == "isometry-verify") return Command::isometry_verify;
   if (s == "gtcp-build") return Command::gtcp_build;
   if (s == "gtcp-classify") return Command::gtcp_classify;
   if (s == "falsify") return Command::falsify;
   if (s == "automorphism-check") return Command::automorphism_check;
   return std::nullopt;
}

inline std::string to_string(Command c)
{
   switch (c) {
   case Command::norm: return "norm";
   case Command::isometry_verify: return "isometry-verify";
   case Command::gtcp_build: return "gtcp-build";
   case Command::gtcp_classify: return "gtcp-classify";
   case Command::falsify: return "falsify";
   case Command::automorphism_check: return "automorphism-check";
   }
   return "?";
}

struct RunConfig {
   Command command = Command::norm;
   std::optional<std::string> op_path;
   std::optional<std::string> series_path;
   std::string p = "inf";
   std::optional<std::size_t> grid;
   std::size_t samples = 20;
   std::uint64_t seed = 0;
   std::optional<double> tol;
   std::optional<std::string> out;
   std::optional<std::string> csv;
};

struct RunResult {
   int exit_code = 0;
   json report;
   std::vector<ResidualRow> rows;
};

inline constexpr double kIdentityTol = 1e-8;
inline constexpr double kNormTol = 1e-6;
inline constexpr std::size_t kSampleDegree = 16;
// Per-axis boundary grid sizes used when --grid is absent.
inline constexpr std::size_t kGrid1D = 1024;
inline constexpr std::size_t kGrid2D = 64;

namespace detail {

inline json load_json(const std::optional<std::string>& path, const char* flag)
{
   if (!path) {
      throw error(error_kind::parse_error, std::string("missing required flag ") + flag);
   }
   std::ifstream in(*path);
   if (!in) {
      throw error(error_kind::parse_error, "cannot open " + *path);
   }
   try {
      return json::parse(in);
   } catch (const json::exception& e) {
      throw error(error_kind::parse_error, *path + ": " + e.what());
   }
}

inline PNormSpec parse_p(const std::string& s)
{
   if (s == "inf" || s == "infinity") {
      return PNormSpec::infinity();
   }
   std::size_t used = 0;
   double v = 0.0;
   try {
      v = std::stod(s, &used);
   } catch (const std::exception&) {
      throw error(error_kind::parse_error, "--p: expected a number or inf");
   }
   if (used != s.size()) {
      throw error(error_kind::parse_error, "--p: expected a number or inf");
   }
   return PNormSpec(v);
}

inline void stamp(json& report, const RunConfig& cfg, double tol, std::size_t grid)
{
   report["command"] = to_string(cfg.command);
   report["seed"] = cfg.seed;
   report["tolerance"] = tol;
   report["grid_size"] = grid;
}

inline RunResult finish(json report, bool pass, std::vector<ResidualRow> rows = {})
{
   report["verdict"] = pass ? "pass" : "fail";
   return {pass ? 0 : 1, std::move(report), std::move(rows)};
}

inline RunResult run_norm(const RunConfig& cfg)
{
   const auto series = io::series_from_json(load_json(cfg.series_path, "--series"));
   const PNormSpec p = parse_p(cfg.p);
   const bool bidisc = std::holds_alternative<Series2D>(series);
   const BoundaryGrid grid(cfg.grid.value_or(bidisc ? kGrid2D : kGrid1D));
   const double value = std::visit(
      [&](const auto& f) {
         using T = std::decay_t<decltype(f)>;
         if constexpr (std::is_same_v<T, Series1D>) {
            return hp_norm_1d(f, p, grid);
         } else {
            return hp_norm_2d(f, p, grid);
         }
      },
      series);
   json report{{"check", "norm"}, {"residuals", json::object()}, {"norm", value}, {"p", io::to_json(p)}};
   stamp(report, cfg, cfg.tol.value_or(kNormTol), grid.size());
   return finish(std::move(report), true);
}

inline RunResult run_isometry(const RunConfig& cfg)
{
   const auto spec = io::operator_from_json(load_json(cfg.op_path, "--op"));
   const double tol = cfg.tol.value_or(kNormTol);
   const BoundaryGrid grid(cfg.grid.value_or(spec.is_2d() ? kGrid2D : kGrid1D));
   Report rep = spec.is_2d()
                   ? verify_isometry(spec.op2d(), generate_samples_2d(cfg.seed, cfg.samples, 8, 4), grid, tol)
                   : verify_isometry(spec.op1d(), generate_samples(cfg.seed, cfg.samples, kSampleDegree), grid, tol);
   json report = io::to_json(rep);
   stamp(report, cfg, tol, grid.size());
   return finish(std::move(report), rep.passed(), rep.rows);
}

template <class Atom, class Probes>
RunResult build_and_verify(const RunConfig& cfg, const OperatorExpr<Atom>& t, const EigenPair& pair,
                           const Probes& probes, double tol, std::size_t grid)
{
   json report{{"check", "gtcp_build"},
               {"lambda1", io::complex_to_json(pair.lambda1())},
               {"lambda2", io::complex_to_json(pair.lambda2())}};
   stamp(report, cfg, tol, grid);
   try {
      const auto triple = gtcp_from_isometry(t, pair, probes, tol);
      Report rep = verify_triple(triple, t, probes, tol);
      rep.residuals.insert(triple.residuals.begin(), triple.residuals.end());
      report["residuals"] = rep.residuals;
      report["projections"] = {{"P", io::to_json(triple.p)}, {"Q", io::to_json(triple.q)}, {"R", io::to_json(triple.r)}};
      return finish(std::move(report), rep.passed());
   } catch (const error& e) {
      if (e.kind() != error_kind::annihilation_fails) {
         throw;
      }
      report["residuals"] = {{"annihilation", annihilation_residual(t, pair, probes)}};
      report["reason"] = e.what();
      return finish(std::move(report), false);
   }
}

inline RunResult run_gtcp_build(const RunConfig& cfg)
{
   const auto spec = io::operator_from_json(load_json(cfg.op_path, "--op"));
   const double tol = cfg.tol.value_or(kIdentityTol);
   const EigenPair pair = spec.pair.value_or(EigenPair::cube_roots());
   const std::size_t g = cfg.grid.value_or(32);
   if (spec.is_2d()) {
      const auto probes = make_probes(generate_samples_2d(cfg.seed, cfg.samples, 8, 4), BoundaryGrid(g), BoundaryGrid(8));
      return build_and_verify(cfg, Expr2D::atom(spec.op2d()), pair, probes, tol, g * 8);
   }
   const auto probes = make_probes(generate_samples(cfg.seed, cfg.samples, kSampleDegree), BoundaryGrid(g));
   return build_and_verify(cfg, Expr1D::atom(spec.op1d()), pair, probes, tol, g);
}

inline RunResult run_classify(const RunConfig& cfg)
{
   const auto spec = io::operator_from_json(load_json(cfg.op_path, "--op"));
   ClassifyOptions opt;
   opt.sample_count = cfg.samples;
   opt.seed = cfg.seed;
   opt.grid_size = cfg.grid.value_or(32);
   opt.tol = cfg.tol.value_or(kIdentityTol);
   try {
      const ClassificationReport rep = spec.is_2d() ? classify_2d(spec.op2d(), opt) : classify_1d(spec.op1d(), opt);
      json report = io::to_json(rep);
      stamp(report, cfg, opt.tol, rep.grid_size);
      return finish(std::move(report), rep.passed());
   } catch (const error& e) {
      if (e.kind() != error_kind::no_family_matches) {
         throw;
      }
      json report{{"family", "NoFamilyMatches"}, {"residuals", json::object()}, {"reason", e.what()}};
      stamp(report, cfg, opt.tol, opt.grid_size);
      return finish(std::move(report), false);
   }
}

inline RunResult run_falsify(const RunConfig& cfg)
{
   const auto spec = io::operator_from_json(load_json(cfg.op_path, "--op"));
   const double tol = cfg.tol.value_or(kIdentityTol);
   const EigenPair pair = spec.pair.value_or(EigenPair::cube_roots());
   const auto f = lagrange_falsifier(WeightedCompositionOp1D(spec.alpha.value_or(1.0), spec.tau, spec.p), pair);
   json report{{"check", "lagrange_falsifier"},
               {"residual", f.residual},
               {"z0", io::complex_to_json(f.z0)},
               {"residuals", {{"|residual-1|", std::abs(f.residual - 1.0)}}}};
   stamp(report, cfg, tol, 0);
   return finish(std::move(report), std::abs(f.residual - 1.0) < tol);
}

inline RunResult run_automorphism(const RunConfig& cfg)
{
   const auto spec = io::operator_from_json(load_json(cfg.op_path, "--op"));
   const double tol = cfg.tol.value_or(1e-10);
   const BoundaryGrid grid(cfg.grid.value_or(1024));
   const complex_t alpha = spec.alpha.value_or(1.0);
   json residuals = json::object();
   std::vector<ResidualRow> rows;
   bool pass = true;
   if (spec.tau.is_rotation()) {
      const double theta = spec.tau.theta();
      const auto h0 = generate_samples(cfg.seed, cfg.samples, 8, Subalgebra::h0());
      const auto neil = generate_samples(cfg.seed, cfg.samples, 8, Subalgebra::neil());
      for (const Report& r : {rotation_automorphism_check(theta, h0, Subalgebra::h0(), tol, grid),
                              rotation_automorphism_check(theta, neil, Subalgebra::neil(), tol, grid),
                              isometry_form_check_neil(alpha, theta, neil, tol, grid)}) {
         for (const auto& [name, value] : r.residuals) {
            residuals[r.check + "." + name] = value;
         }
         for (auto row : r.rows) {
            row.check = r.check + "." + row.check;
            rows.push_back(std::move(row));
         }
         pass = pass && r.passed();
      }
   } else {
      for (const auto& cls : {Subalgebra::h0(), Subalgebra::neil()}) {
         const auto f = falsify_composition_automorphism(spec.tau, cls);
         residuals[cls.name() + "_violation"] = f.violation;
         pass = pass && f.violation < tol;
      }
   }
   json report{{"check", "automorphism"}, {"residuals", residuals}};
   stamp(report, cfg, tol, grid.size());
   return finish(std::move(report), pass, std::move(rows));
}

} // namespace detail

inline RunResult run(const RunConfig& cfg)
{
   try {
      if (cfg.grid && *cfg.grid < 8) {
         throw error(error_kind::invalid_argument, "--grid must be >= 8");
      }
      if (cfg.tol && !(*cfg.tol > 0.0)) {
         throw error(error_kind::invalid_argument, "--tol must be > 0");
      }
      if (cfg.samples < 1) {
         throw error(error_kind::invalid_argument, "--samples must be >= 1");
      }
      switch (cfg.command) {
      case Command::norm: return detail::run_norm(cfg);
      case Command::isometry_verify: return detail::run_isometry(cfg);
      case Command::gtcp_build: return detail::run_gtcp_build(cfg);
      case Command::gtcp_classify: return detail::run_classify(cfg);
      case Command::falsify: return detail::run_falsify(cfg);
      case Command::automorphism_check: return detail::run_automorphism(cfg);
      }
      throw error(error_kind::invalid_argument, "unknown command");
   } catch (const error& e) {
      return {2, json{{"error", e.what()}, {"kind", std::string(to_string(e.kind()))}}, {}};
   } catch (const json::exception& e) {
      return {2, json{{"error", e.what()}, {"kind", "ParseError"}}, {}};
   }
}

inline std::string csv_table(const std::vector<ResidualRow>& rows)
{
   std::ostringstream os;
   os << "check,sample_index,residual\n";
   os << std::setprecision(17);
   for (const auto& r : rows) {
      os << r.check << ',' << r.sample_index << ',' << r.residual << '\n';
   }
   return os.str();
}

/// Writes the report to --out (or `fallback`) and the CSV table to --csv when requested.
inline void write_outputs(const RunResult& result, const RunConfig& cfg, std::ostream& fallback)
{
   const std::string text = result.report.dump(2) + "\n";
   if (cfg.out) {
      std::ofstream(*cfg.out) << text;
   } else {
      fallback << text;
   }
   if (cfg.csv && result.exit_code != 2) {
      std::ofstream(*cfg.csv) << csv_table(result.rows);
   }
}

} // namespace hardyops::cli
