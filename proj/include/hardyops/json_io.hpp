#pragma once

// JSON forms of series, automorphisms, operator specs, operator
// expressions and reports.
//
//   series     {"degree": N, "coeffs": [[re, im], ...]}
//              {"bidegree": [N, M], "coeffs": [[[re, im], ...], ...]}
//   tau        {"theta": t, "a": [re, im]}
//   operator   {"alpha": [re, im] | "calibrated", "tau": {...}, "p": number | "inf",
//               "sigma": {"c": [re, im], "k": int}}           (sigma: 2D only)
//   expression ["id"] | ["atom"] | ["sum", e1, e2] | ["scale", [re, im], e]
//              | ["compose", outer, inner] | ["pow", e, n]

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hardyops/errors.hpp"
#include "hardyops/hardy.hpp"
#include "hardyops/moebius.hpp"
#include "hardyops/operators.hpp"
#include "hardyops/projections.hpp"
#include "hardyops/report.hpp"
#include "hardyops/series.hpp"

namespace hardyops::io {

using json = nlohmann::json;

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw error(error_kind::parse_error, what); }

inline const json& field(const json& j, const char* key)
{
   if (!j.is_object() || !j.contains(key)) {
      fail(std::string("missing field \"") + key + "\"");
   }
   return j.at(key);
}

inline double number(const json& j, const char* what)
{
   if (!j.is_number()) {
      fail(std::string(what) + ": expected a number");
   }
   return j.get<double>();
}

} // namespace detail

inline json complex_to_json(complex_t c) { return json::array({c.real(), c.imag()}); }

inline complex_t complex_from_json(const json& j)
{
   if (!j.is_array() || j.size() != 2) {
      detail::fail("complex value must be [re, im]");
   }
   return {detail::number(j[0], "re"), detail::number(j[1], "im")};
}

inline json to_json(const Series1D& f)
{
   json coeffs = json::array();
   for (const auto& c : f.coeffs()) {
      coeffs.push_back(complex_to_json(c));
   }
   return {{"degree", f.degree()}, {"coeffs", coeffs}};
}

inline json to_json(const Series2D& f)
{
   const auto [n, m] = f.bidegree();
   json rows = json::array();
   for (std::size_t r = 0; r <= n; ++r) {
      json row = json::array();
      for (std::size_t c = 0; c <= m; ++c) {
         row.push_back(complex_to_json(f.coeff(r, c)));
      }
      rows.push_back(row);
   }
   return {{"bidegree", {n, m}}, {"coeffs", rows}};
}

inline Series1D series1d_from_json(const json& j)
{
   const auto degree = detail::field(j, "degree");
   const auto& coeffs = detail::field(j, "coeffs");
   if (!degree.is_number_unsigned() || !coeffs.is_array()) {
      detail::fail("series: degree must be a nonnegative integer and coeffs an array");
   }
   if (coeffs.size() != degree.get<std::size_t>() + 1) {
      detail::fail("series: expected degree + 1 coefficients");
   }
   std::vector<complex_t> v;
   for (const auto& c : coeffs) {
      v.push_back(complex_from_json(c));
   }
   return Series1D(std::move(v));
}

inline Series2D series2d_from_json(const json& j)
{
   const auto& bideg = detail::field(j, "bidegree");
   const auto& rows = detail::field(j, "coeffs");
   if (!bideg.is_array() || bideg.size() != 2 || !bideg[0].is_number_unsigned() || !bideg[1].is_number_unsigned()) {
      detail::fail("series: bidegree must be [N, M]");
   }
   const auto n = bideg[0].get<std::size_t>();
   const auto m = bideg[1].get<std::size_t>();
   if (!rows.is_array() || rows.size() != n + 1) {
      detail::fail("series: expected N + 1 coefficient rows");
   }
   std::vector<complex_t> v;
   for (const auto& row : rows) {
      if (!row.is_array() || row.size() != m + 1) {
         detail::fail("series: expected M + 1 coefficients per row");
      }
      for (const auto& c : row) {
         v.push_back(complex_from_json(c));
      }
   }
   return Series2D(n, m, std::move(v));
}

inline std::variant<Series1D, Series2D> series_from_json(const json& j)
{
   if (j.is_object() && j.contains("bidegree")) {
      return series2d_from_json(j);
   }
   return series1d_from_json(j);
}

inline json to_json(const DiscAutomorphism& tau) { return {{"theta", tau.theta()}, {"a", complex_to_json(tau.a())}}; }

inline DiscAutomorphism automorphism_from_json(const json& j)
{
   return {detail::number(detail::field(j, "theta"), "theta"), complex_from_json(detail::field(j, "a"))};
}

inline PNormSpec pnorm_from_json(const json& j)
{
   if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "inf" || s == "infinity") {
         return PNormSpec::infinity();
      }
      detail::fail("p: expected a number or \"inf\"");
   }
   return PNormSpec(detail::number(j, "p"));
}

inline json to_json(const PNormSpec& p)
{
   if (p.is_infinite()) {
      return "inf";
   }
   return p.p();
}

// An operator spec as read from disk; alpha may be left to calibration.
struct OperatorSpec {
   std::optional<complex_t> alpha; // nullopt: "calibrated"
   DiscAutomorphism tau;
   PNormSpec p;
   std::optional<UnimodularMonomial> sigma;
   std::optional<EigenPair> pair;

   bool is_2d() const noexcept { return sigma.has_value(); }

   // alpha, calibrating against the order of tau (<= 4) when requested.
   complex_t resolved_alpha() const
   {
      if (alpha) {
         return *alpha;
      }
      const auto order = order_up_to(tau, 4, 1e-9);
      if (!order) {
         throw error(error_kind::not_finite_order, "calibrated alpha requires tau of order <= 4");
      }
      return calibrate_alpha(tau, *order, p);
   }

   WeightedCompositionOp1D op1d() const { return {resolved_alpha(), tau, p}; }
   WeightedCompositionOp2D op2d() const { return {resolved_alpha(), tau, sigma.value_or(UnimodularMonomial{}), p}; }
};

inline OperatorSpec operator_from_json(const json& j)
{
   OperatorSpec spec{std::nullopt, automorphism_from_json(detail::field(j, "tau")),
                     pnorm_from_json(detail::field(j, "p")), std::nullopt, std::nullopt};
   const auto& alpha = detail::field(j, "alpha");
   if (alpha.is_string()) {
      if (alpha.get<std::string>() != "calibrated") {
         detail::fail("alpha: expected [re, im] or \"calibrated\"");
      }
   } else {
      spec.alpha = complex_from_json(alpha);
   }
   if (j.contains("sigma")) {
      const auto& s = j.at("sigma");
      const auto& k = detail::field(s, "k");
      if (!k.is_number_integer()) {
         detail::fail("sigma.k must be an integer");
      }
      spec.sigma = UnimodularMonomial(complex_from_json(detail::field(s, "c")), k.get<int>());
   }
   if (j.contains("pair")) {
      const auto& pr = j.at("pair");
      spec.pair = EigenPair(complex_from_json(detail::field(pr, "lambda1")),
                            complex_from_json(detail::field(pr, "lambda2")));
   }
   return spec;
}

inline json to_json(const OperatorSpec& spec)
{
   json j{{"alpha", spec.alpha ? complex_to_json(*spec.alpha) : json("calibrated")},
          {"tau", to_json(spec.tau)},
          {"p", to_json(spec.p)}};
   if (spec.sigma) {
      j["sigma"] = {{"c", complex_to_json(spec.sigma->c())}, {"k", spec.sigma->k()}};
   }
   if (spec.pair) {
      j["pair"] = {{"lambda1", complex_to_json(spec.pair->lambda1())},
                   {"lambda2", complex_to_json(spec.pair->lambda2())}};
   }
   return j;
}

/// Serializes an expression; every atom is written as ["atom"].
template <class Atom>
json to_json(const OperatorExpr<Atom>& e)
{
   return std::visit(
      hardyops::detail::overloaded{
         [](const expr_node::Identity&) { return json::array({"id"}); },
         [](const expr_node::Leaf<Atom>&) { return json::array({"atom"}); },
         [](const expr_node::Scale<Atom>& s) {
            return json::array({"scale", complex_to_json(s.factor), to_json(s.operand)});
         },
         [](const expr_node::Sum<Atom>& s) { return json::array({"sum", to_json(s.lhs), to_json(s.rhs)}); },
         [](const expr_node::Compose<Atom>& c) {
            return json::array({"compose", to_json(c.outer), to_json(c.inner)});
         },
         [](const expr_node::Power<Atom>& p) { return json::array({"pow", to_json(p.base), p.exponent}); },
      },
      e.node());
}

/// Parses an expression, substituting `atom` for every ["atom"].
template <class Atom>
OperatorExpr<Atom> expr_from_json(const json& j, const Atom& atom)
{
   using E = OperatorExpr<Atom>;
   if (!j.is_array() || j.empty() || !j[0].is_string()) {
      detail::fail("expression: expected [tag, ...]");
   }
   const auto tag = j[0].get<std::string>();
   const auto arity = [&](std::size_t n) {
      if (j.size() != n + 1) {
         detail::fail("expression: \"" + tag + "\" takes " + std::to_string(n) + " arguments");
      }
   };
   if (tag == "id") {
      arity(0);
      return E::identity();
   }
   if (tag == "atom") {
      arity(0);
      return E::atom(atom);
   }
   if (tag == "sum") {
      arity(2);
      return expr_from_json(j[1], atom) + expr_from_json(j[2], atom);
   }
   if (tag == "scale") {
      arity(2);
      return complex_from_json(j[1]) * expr_from_json(j[2], atom);
   }
   if (tag == "compose") {
      arity(2);
      return compose(expr_from_json(j[1], atom), expr_from_json(j[2], atom));
   }
   if (tag == "pow") {
      arity(2);
      if (!j[2].is_number_integer()) {
         detail::fail("expression: pow exponent must be an integer");
      }
      return power(expr_from_json(j[1], atom), j[2].get<int>());
   }
   detail::fail("expression: unknown tag \"" + tag + "\"");
}

inline json to_json(const Report& r)
{
   json j{{"check", r.check},
          {"residuals", r.residuals},
          {"verdict", r.passed() ? "pass" : "fail"},
          {"tolerance", r.tolerance},
          {"grid_size", r.grid_size}};
   if (r.witness) {
      j["witness"] = to_json(*r.witness);
   }
   return j;
}

inline json to_json(const ClassificationReport& r)
{
   json j{{"family", r.tag()},
          {"lambda1", r.pair ? complex_to_json(r.pair->lambda1()) : json(nullptr)},
          {"lambda2", r.pair ? complex_to_json(r.pair->lambda2()) : json(nullptr)},
          {"verified_power", r.verified_power ? json(*r.verified_power) : json(nullptr)},
          {"residuals", r.residuals},
          {"diagnostics", r.diagnostics},
          {"verdict", r.passed() ? "pass" : "fail"},
          {"tolerance", r.tolerance},
          {"grid_size", r.grid_size}};
   if (!r.reason.empty()) {
      j["reason"] = r.reason;
   }
   if (!r.formula.empty()) {
      j["formulas"] = r.formula;
   }
   if (!r.vanishing.empty()) {
      j["vanishing"] = r.vanishing;
   }
   if (r.falsifier_residual) {
      j["falsifier_residual"] = *r.falsifier_residual;
   }
   return j;
}

} // namespace hardyops::io
