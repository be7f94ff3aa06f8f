#pragma once

// Generalized tri-circular projections built from isometries.
//
// For distinct unimodular lambda1, lambda2 != 1, an operator T splits as
// T = P + lambda1 Q + lambda2 R with P + Q + R = I exactly when
// (T - I)(T - lambda1 I)(T - lambda2 I) = 0, and then P, Q, R are fixed
// quadratic polynomials in T. This header builds those triples on matrices
// and on operator expressions, verifies them pointwise, and classifies the
// weighted composition isometries of H^p(D) and H^p(T^2).

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hardyops/errors.hpp"
#include "hardyops/hardy.hpp"
#include "hardyops/moebius.hpp"
#include "hardyops/operators.hpp"
#include "hardyops/report.hpp"
#include "hardyops/samples.hpp"
#include "hardyops/series.hpp"

namespace hardyops {

class EigenPair {
public:
   EigenPair(complex_t lambda1, complex_t lambda2)
      : l1_(lambda1)
      , l2_(lambda2)
   {
      for (const complex_t l : {l1_, l2_}) {
         if (std::abs(std::abs(l) - 1.0) > 1e-12) {
            throw error(error_kind::invalid_argument, "EigenPair: eigenvalues must be unimodular");
         }
         if (std::abs(l - 1.0) <= 1e-9) {
            throw error(error_kind::invalid_argument, "EigenPair: eigenvalues must differ from 1");
         }
      }
      if (std::abs(l1_ - l2_) <= 1e-9) {
         throw error(error_kind::invalid_argument, "EigenPair: eigenvalues must be distinct");
      }
   }

   // (e^{2 pi i/3}, e^{4 pi i/3})
   static EigenPair cube_roots() { return {std::polar(1.0, kTwoPi / 3.0), std::polar(1.0, 2.0 * kTwoPi / 3.0)}; }

   complex_t lambda1() const noexcept { return l1_; }
   complex_t lambda2() const noexcept { return l2_; }
   complex_t a() const noexcept { return l1_ + l2_; }
   complex_t b() const noexcept { return l1_ * l2_; }

private:
   complex_t l1_;
   complex_t l2_;
};

// c0 I + c1 T + c2 T^2
struct TPolynomial {
   complex_t c0{};
   complex_t c1{};
   complex_t c2{};
};

struct ProjectionFormulas {
   TPolynomial p;
   TPolynomial q;
   TPolynomial r;
};

/// P = (T - l1)(T - l2) / ((1 - l1)(1 - l2)), Q = (T - 1)(T - l2) / ((l1 - 1)(l1 - l2)),
/// R = (T - 1)(T - l1) / ((l2 - 1)(l2 - l1)), expanded in powers of T.
inline ProjectionFormulas lemma_formulas(const EigenPair& pair)
{
   const complex_t l1 = pair.lambda1();
   const complex_t l2 = pair.lambda2();
   const auto quotient = [](complex_t r1, complex_t r2, complex_t den) {
      return TPolynomial{r1 * r2 / den, -(r1 + r2) / den, 1.0 / den};
   };
   return {quotient(l1, l2, (1.0 - l1) * (1.0 - l2)), quotient(1.0, l2, (l1 - 1.0) * (l1 - l2)),
           quotient(1.0, l1, (l2 - 1.0) * (l2 - l1))};
}

/// P = (I + T + T^2)/3, Q = (I + l^2 T + l T^2)/3, R = (I + l T + l^2 T^2)/3 with l = e^{2 pi i/3}.
inline ProjectionFormulas order3_formulas()
{
   const complex_t l = std::polar(1.0, kTwoPi / 3.0);
   const complex_t third = 1.0 / 3.0;
   return {{third, third, third}, {third, third * l * l, third * l}, {third, third * l, third * l * l}};
}

enum class Family { order3, order4_pmq_ir, order4_p_iq_mr, order4_p_iq_mir, degenerate };

inline std::string to_string(Family f)
{
   switch (f) {
   case Family::order3: return "Order3";
   case Family::order4_pmq_ir: return "Order4_PmQ_iR";
   case Family::order4_p_iq_mr: return "Order4_P_iQ_mR";
   case Family::order4_p_iq_mir: return "Order4_P_iQ_miR";
   case Family::degenerate: return "Degenerate";
   }
   return "?";
}

struct FamilyCandidate {
   Family family;
   int sign; // +1 or -1: the upper or lower sign in the closed forms
   EigenPair pair;
   ProjectionFormulas formulas;
   std::string description;
};

/// The six closed-form order-4 candidates:
///   T = P - Q +- iR,   T = P +- iQ - R,   T = P +- iQ -+ iR.
inline std::vector<FamilyCandidate> order4_candidates()
{
   const complex_t i{0.0, 1.0};
   std::vector<FamilyCandidate> out;
   for (const int s : {+1, -1}) {
      const complex_t si = static_cast<double>(s) * i;
      const TPolynomial mixed_p{(1.0 - si) / 4.0, 0.5, (1.0 + si) / 4.0};
      const TPolynomial mixed_q{(1.0 + si) / 4.0, -0.5, (1.0 - si) / 4.0};
      const TPolynomial odd{0.5, 0.0, -0.5};
      const TPolynomial even{0.5, 0.0, 0.5};
      const std::string sg = s > 0 ? "+" : "-";
      const std::string gs = s > 0 ? "-" : "+";
      out.push_back({Family::order4_pmq_ir, s, EigenPair(-1.0, si), {mixed_p, mixed_q, odd}, "T = P - Q " + sg + " iR"});
      out.push_back({Family::order4_p_iq_mr, s, EigenPair(si, -1.0), {mixed_p, odd, mixed_q}, "T = P " + sg + " iQ - R"});
      out.push_back({Family::order4_p_iq_mir,
                     s,
                     EigenPair(si, -si),
                     {even, {(1.0 + si) / 4.0, -2.0 * si / 4.0, (-1.0 + si) / 4.0},
                      {(1.0 - si) / 4.0, 2.0 * si / 4.0, (-1.0 - si) / 4.0}},
                     "T = P " + sg + " iQ " + gs + " iR"});
   }
   return out;
}

// ---------------------------------------------------------------------------
// Matrix mode

inline Eigen::MatrixXcd to_matrix(const TPolynomial& poly, const Eigen::MatrixXcd& t)
{
   const auto id = Eigen::MatrixXcd::Identity(t.rows(), t.cols());
   return poly.c0 * id + poly.c1 * t + poly.c2 * (t * t);
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

struct MatrixTriple {
   Eigen::MatrixXcd p;
   Eigen::MatrixXcd q;
   Eigen::MatrixXcd r;
};

inline double annihilation_residual(const Eigen::MatrixXcd& t, const EigenPair& pair)
{
   const auto id = Eigen::MatrixXcd::Identity(t.rows(), t.cols());
   return max_abs((t - id) * (t - pair.lambda1() * id) * (t - pair.lambda2() * id));
}

struct MatrixGtcp {
   MatrixTriple projections;
   double annihilation_residual = 0.0;
};

/// Projections from the quotient formulas; throws AnnihilationFails when the cubic does not vanish on T.
inline MatrixGtcp gtcp_from_isometry(const Eigen::MatrixXcd& t, const EigenPair& pair, double tol = 1e-8)
{
   const double residual = annihilation_residual(t, pair);
   if (!(residual < tol)) {
      throw error(error_kind::annihilation_fails, "gtcp_from_isometry: cubic residual " + std::to_string(residual));
   }
   const auto f = lemma_formulas(pair);
   return {{to_matrix(f.p, t), to_matrix(f.q, t), to_matrix(f.r, t)}, residual};
}

/// Spectral projections of a diagonalizable T with spectrum in {1, lambda1, lambda2}.
///
/// Each eigenspace is the numerical null space of T - mu I (from an SVD);
/// with V = [V_1 | V_l1 | V_l2] and W = V^{-1}, the projection onto the
/// mu-eigenspace is V_mu W_mu. No polynomial in T is used.
inline MatrixTriple eigenprojection_oracle(const Eigen::MatrixXcd& t, const EigenPair& pair, double tol = 1e-8)
{
   const Eigen::Index n = t.rows();
   if (t.cols() != n) {
      throw error(error_kind::invalid_argument, "eigenprojection_oracle: T must be square");
   }
   const auto id = Eigen::MatrixXcd::Identity(n, n);
   const std::array<complex_t, 3> mus{1.0, pair.lambda1(), pair.lambda2()};
   std::array<Eigen::MatrixXcd, 3> bases;
   Eigen::Index total = 0;
   for (std::size_t k = 0; k < 3; ++k) {
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t - mus[k] * id, Eigen::ComputeFullV);
      const auto& s = svd.singularValues();
      const double cutoff = tol * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
      Eigen::Index rank = 0;
      while (rank < s.size() && s(rank) > cutoff) {
         ++rank;
      }
      bases[k] = svd.matrixV().rightCols(n - rank);
      total += n - rank;
   }
   if (total != n) {
      throw error(error_kind::spectrum_mismatch, "eigenprojection_oracle: eigenspaces of {1, l1, l2} span dimension " +
                                                    std::to_string(total) + " of " + std::to_string(n));
   }
   Eigen::MatrixXcd v(n, n);
   v << bases[0], bases[1], bases[2];
   Eigen::FullPivLU<Eigen::MatrixXcd> lu(v);
   if (!lu.isInvertible()) {
      throw error(error_kind::spectrum_mismatch, "eigenprojection_oracle: eigenvector basis is singular");
   }
   const Eigen::MatrixXcd w = lu.inverse();
   MatrixTriple out;
   Eigen::Index offset = 0;
   std::array<Eigen::MatrixXcd*, 3> targets{&out.p, &out.q, &out.r};
   for (std::size_t k = 0; k < 3; ++k) {
      const Eigen::Index dim = bases[k].cols();
      *targets[k] = bases[k] * w.middleRows(offset, dim);
      offset += dim;
   }
   return out;
}

// ---------------------------------------------------------------------------
// Pointwise mode

// Functions and evaluation points over which operator identities are checked.
template <class Point>
struct ProbeSet {
   std::vector<std::function<complex_t(const Point&)>> functions;
   std::vector<Point> points;
};

inline ProbeSet<complex_t> make_probes(const std::vector<Series1D>& samples, const BoundaryGrid& grid)
{
   ProbeSet<complex_t> out;
   for (const auto& s : samples) {
      out.functions.push_back(as_function(s));
   }
   out.points = grid.points();
   return out;
}

inline ProbeSet<BiPoint> make_probes(const std::vector<Series2D>& samples, const BoundaryGrid& grid_z,
                                     const BoundaryGrid& grid_w)
{
   ProbeSet<BiPoint> out;
   for (const auto& s : samples) {
      out.functions.push_back(as_function(s));
   }
   for (const auto& z : grid_z.points()) {
      for (const auto& w : grid_w.points()) {
         out.points.push_back({z, w});
      }
   }
   return out;
}

template <class Atom>
OperatorExpr<Atom> to_expr(const TPolynomial& poly, const OperatorExpr<Atom>& t)
{
   using E = OperatorExpr<Atom>;
   E acc = poly.c0 * E::identity();
   if (poly.c1 != complex_t{}) {
      acc = acc + poly.c1 * t;
   }
   if (poly.c2 != complex_t{}) {
      acc = acc + poly.c2 * power(t, 2);
   }
   return acc;
}

/// max over probe functions and points of |(E f)(x)|.
template <class Atom>
double max_action(const OperatorExpr<Atom>& e, const ProbeSet<typename Atom::point_type>& probes)
{
   double worst = 0.0;
   for (const auto& f : probes.functions) {
      for (const auto& x : probes.points) {
         worst = std::max(worst, std::abs(e.apply(f, x)));
      }
   }
   return worst;
}

template <class Atom>
struct GtcpTriple {
   OperatorExpr<Atom> p;
   OperatorExpr<Atom> q;
   OperatorExpr<Atom> r;
   EigenPair pair;
   std::map<std::string, double> residuals;
};

/// max |(T^3 - (1+a)T^2 + (a+b)T - bI) f| with a = l1 + l2, b = l1 l2.
template <class Atom>
double annihilation_residual(const OperatorExpr<Atom>& t, const EigenPair& pair,
                             const ProbeSet<typename Atom::point_type>& probes)
{
   using E = OperatorExpr<Atom>;
   const complex_t a = pair.a();
   const complex_t b = pair.b();
   const E cubic = power(t, 3) - (1.0 + a) * power(t, 2) + (a + b) * t - b * E::identity();
   return max_action(cubic, probes);
}

template <class Atom>
GtcpTriple<Atom> build_triple(const OperatorExpr<Atom>& t, const ProjectionFormulas& f, const EigenPair& pair)
{
   return {to_expr(f.p, t), to_expr(f.q, t), to_expr(f.r, t), pair, {}};
}

/// Builds P, Q, R by the quotient formulas and records the cubic residual;
/// throws AnnihilationFails when it exceeds tol.
template <class Atom>
GtcpTriple<Atom> gtcp_from_isometry(const OperatorExpr<Atom>& t, const EigenPair& pair,
                                    const ProbeSet<typename Atom::point_type>& probes, double tol = 1e-8)
{
   const double residual = annihilation_residual(t, pair, probes);
   if (!(residual < tol)) {
      throw error(error_kind::annihilation_fails, "gtcp_from_isometry: cubic residual " + std::to_string(residual));
   }
   auto triple = build_triple(t, lemma_formulas(pair), pair);
   triple.residuals["annihilation"] = residual;
   return triple;
}

/// Idempotence, mutual annihilation, completeness and reconstruction residuals.
template <class Atom>
Report verify_triple(const GtcpTriple<Atom>& triple, const OperatorExpr<Atom>& t,
                     const ProbeSet<typename Atom::point_type>& probes, double tol = 1e-8)
{
   using E = OperatorExpr<Atom>;
   const E& p = triple.p;
   const E& q = triple.q;
   const E& r = triple.r;
   Report report;
   report.check = "verify_triple";
   report.tolerance = tol;
   report.grid_size = probes.points.size();
   auto& res = report.residuals;
   res["P^2-P"] = max_action(compose(p, p) - p, probes);
   res["Q^2-Q"] = max_action(compose(q, q) - q, probes);
   res["R^2-R"] = max_action(compose(r, r) - r, probes);
   res["PQ"] = max_action(compose(p, q), probes);
   res["QP"] = max_action(compose(q, p), probes);
   res["PR"] = max_action(compose(p, r), probes);
   res["RP"] = max_action(compose(r, p), probes);
   res["QR"] = max_action(compose(q, r), probes);
   res["RQ"] = max_action(compose(r, q), probes);
   res["P+Q+R-I"] = max_action(p + q + r - E::identity(), probes);
   res["P+l1Q+l2R-T"] = max_action(p + triple.pair.lambda1() * q + triple.pair.lambda2() * r - t, probes);
   return report;
}

// ---------------------------------------------------------------------------
// Lagrange falsifier

struct LagrangeFalsifier {
   complex_t z0;
   std::array<complex_t, 4> orbit;
   double residual = 0.0;
};

/// Evaluates the cubic identity on the Lagrange polynomial L with L(z0) = 1
/// and L = 0 at tau(z0), tau^2(z0), tau^3(z0). Only the -b L(z0) term
/// survives, so the residual is |b| = 1 whenever tau has no order <= 3.
inline LagrangeFalsifier lagrange_falsifier(const WeightedCompositionOp1D& t, const EigenPair& pair)
{
   if (const auto order = order_up_to(t.tau(), 3, 1e-9)) {
      throw error(error_kind::precondition_violated,
                  "lagrange_falsifier: tau has order " + std::to_string(*order) + " <= 3");
   }
   constexpr int kTrials = 256;
   constexpr double kSeparation = 0.05;
   const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
   for (int k = 0; k < kTrials; ++k) {
      const double radius = 0.9 * std::sqrt((k + 0.5) / kTrials);
      const complex_t z0 = std::polar(radius, golden * k);
      std::array<complex_t, 4> orbit{z0, {}, {}, {}};
      for (std::size_t j = 1; j < orbit.size(); ++j) {
         orbit[j] = t.tau()(orbit[j - 1]);
      }
      double min_gap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < orbit.size(); ++i) {
         for (std::size_t j = i + 1; j < orbit.size(); ++j) {
            min_gap = std::min(min_gap, std::abs(orbit[i] - orbit[j]));
         }
      }
      if (min_gap < kSeparation) {
         continue;
      }
      const std::array<complex_t, 4> values{1.0, 0.0, 0.0, 0.0};
      const Series1D lag = lagrange_polynomial(orbit, values);
      const complex_t a = pair.a();
      const complex_t b = pair.b();
      const complex_t lhs = iterated_weight(t, 3, z0) * lag(orbit[3]) -
                            (1.0 + a) * iterated_weight(t, 2, z0) * lag(orbit[2]) +
                            (a + b) * iterated_weight(t, 1, z0) * lag(orbit[1]) - b * lag(orbit[0]);
      return {z0, orbit, std::abs(lhs)};
   }
   throw error(error_kind::orbit_degenerate, "lagrange_falsifier: no z0 with separated orbit in 256 trials");
}

// ---------------------------------------------------------------------------
// Classification

struct ClassifyOptions {
   std::size_t sample_count = 5;
   std::size_t max_degree = 16;   // z-degree of probe polynomials
   std::size_t max_degree_w = 4;  // w-degree of 2D probe polynomials
   std::uint64_t seed = 0;
   std::size_t grid_size = 32;    // boundary points in z
   std::size_t grid_size_w = 8;   // boundary points in w (2D)
   double tol = 1e-8;
   double nonzero_threshold = 1e-6;
   std::size_t matrix_degree = 24;
};

struct ClassificationReport {
   Family family = Family::degenerate;
   std::string reason;
   std::string formula;
   std::optional<int> verified_power;
   std::optional<EigenPair> pair;
   std::map<std::string, double> residuals;   // compared against tolerance
   std::map<std::string, double> diagnostics; // informational
   std::vector<std::string> vanishing;
   std::optional<double> falsifier_residual;
   double tolerance = 0.0;
   std::size_t grid_size = 0;

   std::string tag() const { return to_string(family); }

   bool passed() const
   {
      return family != Family::degenerate &&
             std::all_of(residuals.begin(), residuals.end(), [&](const auto& kv) { return kv.second < tolerance; });
   }
};

namespace detail {

template <class Atom>
std::optional<int> smallest_unit_power(const OperatorExpr<Atom>& t, const ProbeSet<typename Atom::point_type>& probes,
                                       double tol, std::map<std::string, double>& residuals)
{
   using E = OperatorExpr<Atom>;
   for (int n = 1; n <= 4; ++n) {
      const double r = max_action(power(t, n) - E::identity(), probes);
      residuals["T^" + std::to_string(n) + "-I"] = r;
      if (r < tol) {
         return n;
      }
   }
   return std::nullopt;
}

template <class Atom>
std::vector<std::string> vanishing_projections(const GtcpTriple<Atom>& triple,
                                               const ProbeSet<typename Atom::point_type>& probes, double threshold,
                                               std::map<std::string, double>& diagnostics)
{
   std::vector<std::string> out;
   const std::array<std::pair<const char*, const OperatorExpr<Atom>*>, 3> named{
      {{"P", &triple.p}, {"Q", &triple.q}, {"R", &triple.r}}};
   for (const auto& [name, expr] : named) {
      const double action = max_action(*expr, probes);
      diagnostics[std::string(name) + "_action"] = action;
      if (action <= threshold) {
         out.emplace_back(name);
      }
   }
   return out;
}

inline std::string join(const std::vector<std::string>& names)
{
   std::string s;
   for (const auto& n : names) {
      s += (s.empty() ? "" : ", ") + n;
   }
   return s;
}

// T^n = I for n in {1, 2}: the quotient formulas with lambda1 = -1 show which
// projections vanish (Q = R = 0 for T = I, R = 0 for a genuine involution).
template <class Atom>
void classify_low_order(ClassificationReport& rep, const OperatorExpr<Atom>& t,
                        const ProbeSet<typename Atom::point_type>& probes, const ClassifyOptions& opt, int n)
{
   const EigenPair pair(-1.0, complex_t{0.0, 1.0});
   const auto triple = build_triple(t, lemma_formulas(pair), pair);
   rep.diagnostics["annihilation"] = annihilation_residual(t, pair, probes);
   rep.vanishing = vanishing_projections(triple, probes, opt.nonzero_threshold, rep.diagnostics);
   rep.pair = pair;
   rep.family = Family::degenerate;
   const std::string zero = rep.vanishing.empty() ? "none" : join(rep.vanishing);
   if (n == 1) {
      rep.reason = "T = I: every factor T - I annihilates, vanishing projections: " + zero;
   } else {
      rep.reason = "T^2 = I: lambda1 = -1 forces R = 0 (Q = 0 when lambda2 = -1), vanishing projections: " + zero;
   }
}

// T^3 = I: the cube-root formulas; degenerate if any projection vanishes (T = lambda I).
template <class Atom>
void classify_order3(ClassificationReport& rep, const OperatorExpr<Atom>& t,
                     const ProbeSet<typename Atom::point_type>& probes, const ClassifyOptions& opt)
{
   const EigenPair pair = EigenPair::cube_roots();
   const auto triple = build_triple(t, order3_formulas(), pair);
   const Report check = verify_triple(triple, t, probes, opt.tol);
   rep.residuals.insert(check.residuals.begin(), check.residuals.end());
   rep.residuals["annihilation"] = annihilation_residual(t, pair, probes);
   rep.pair = pair;
   rep.formula = "P = (I + T + T^2)/3, Q = (I + l^2 T + l T^2)/3, R = (I + l T + l^2 T^2)/3";
   rep.vanishing = vanishing_projections(triple, probes, opt.nonzero_threshold, rep.diagnostics);
   if (rep.vanishing.empty()) {
      rep.family = Family::order3;
   } else {
      rep.family = Family::degenerate;
      rep.reason = "T^3 = I but T is a scalar multiple of I, vanishing projections: " + join(rep.vanishing);
   }
}

inline void classify_no_order(ClassificationReport& rep, const WeightedCompositionOp1D& op1d, std::optional<int> n)
{
   rep.family = Family::degenerate;
   const auto tau_order = order_up_to(op1d.tau(), 3, 1e-9);
   if (tau_order) {
      rep.reason = "tau has order " + std::to_string(*tau_order) +
                   " but no power T^k, k <= 4, equals I: the spectrum misses 1, so P = 0";
      return;
   }
   rep.falsifier_residual = lagrange_falsifier(op1d, EigenPair::cube_roots()).residual;
   rep.reason = n ? "T^4 = I but tau has no order <= 3: no tri-circular decomposition"
                  : "no finite order <= 4: no tri-circular decomposition";
}

} // namespace detail

/// Classifies the tri-circular projections generated by a 1D isometry.
inline ClassificationReport classify_1d(const WeightedCompositionOp1D& op, const ClassifyOptions& opt = {})
{
   if (op.p().is_two()) {
      throw error(error_kind::p_equals_two, "classify_1d: p = 2 is excluded");
   }
   ClassificationReport rep;
   rep.tolerance = opt.tol;
   rep.grid_size = opt.grid_size;
   const auto samples = generate_samples(opt.seed, opt.sample_count, opt.max_degree);
   const auto probes = make_probes(samples, BoundaryGrid(opt.grid_size));
   const Expr1D t = Expr1D::atom(op);

   rep.verified_power = detail::smallest_unit_power(t, probes, opt.tol, rep.residuals);
   // Only the winning power belongs to the verdict; failed attempts are kept as diagnostics.
   for (auto it = rep.residuals.begin(); it != rep.residuals.end();) {
      if (!rep.verified_power || it->first != "T^" + std::to_string(*rep.verified_power) + "-I") {
         rep.diagnostics[it->first] = it->second;
         it = rep.residuals.erase(it);
      } else {
         ++it;
      }
   }

   const auto n = rep.verified_power;
   if (n && *n <= 2) {
      detail::classify_low_order(rep, t, probes, opt, *n);
   } else if (n && *n == 3) {
      detail::classify_order3(rep, t, probes, opt);
      if (rep.family == Family::order3) {
         // Truncated-matrix cross-check at interior points, informational only.
         const auto p_expr = to_expr(order3_formulas().p, t);
         const auto mat = materialize_matrix(p_expr, opt.matrix_degree);
         const auto low = generate_samples(opt.seed + 1, 3, opt.matrix_degree / 3);
         double worst = 0.0;
         for (const auto& f : low) {
            const Series1D pf = series_from_vector(mat.matrix * coefficient_vector(f, opt.matrix_degree));
            for (int k = 0; k < 16; ++k) {
               const complex_t z = std::polar(0.5, kTwoPi * k / 16.0);
               worst = std::max(worst, std::abs(pf(z) - p_expr.apply(as_function(f), z)));
            }
         }
         rep.diagnostics["matrix_crosscheck"] = worst;
         rep.diagnostics["matrix_truncation"] = mat.truncation_error;
      }
   } else {
      detail::classify_no_order(rep, op, n);
   }
   return rep;
}

/// Classifies the tri-circular projections generated by a 2D isometry.
///
/// For T^4 = I the six closed-form candidates are verified in turn and the
/// first whose projections are nonzero idempotents reproducing T is
/// returned; NoFamilyMatches is thrown when none verifies.
inline ClassificationReport classify_2d(const WeightedCompositionOp2D& op, const ClassifyOptions& opt = {})
{
   if (op.p().is_two()) {
      throw error(error_kind::p_equals_two, "classify_2d: p = 2 is excluded");
   }
   ClassificationReport rep;
   rep.tolerance = opt.tol;
   rep.grid_size = opt.grid_size * opt.grid_size_w;
   const auto samples = generate_samples_2d(opt.seed, opt.sample_count, opt.max_degree, opt.max_degree_w);
   const auto probes = make_probes(samples, BoundaryGrid(opt.grid_size), BoundaryGrid(opt.grid_size_w));
   const Expr2D t = Expr2D::atom(op);

   rep.verified_power = detail::smallest_unit_power(t, probes, opt.tol, rep.residuals);
   for (auto it = rep.residuals.begin(); it != rep.residuals.end();) {
      if (!rep.verified_power || it->first != "T^" + std::to_string(*rep.verified_power) + "-I") {
         rep.diagnostics[it->first] = it->second;
         it = rep.residuals.erase(it);
      } else {
         ++it;
      }
   }

   const auto n = rep.verified_power;
   if (n && *n <= 2) {
      detail::classify_low_order(rep, t, probes, opt, *n);
      return rep;
   }
   if (n && *n == 3) {
      detail::classify_order3(rep, t, probes, opt);
      return rep;
   }
   if (!n) {
      detail::classify_no_order(rep, WeightedCompositionOp1D(op.alpha(), op.tau(), op.p()), n);
      return rep;
   }

   std::ostringstream tried;
   for (const auto& cand : order4_candidates()) {
      const auto triple = build_triple(t, cand.formulas, cand.pair);
      const Report check = verify_triple(triple, t, probes, opt.tol);
      std::map<std::string, double> actions;
      const auto zero = detail::vanishing_projections(triple, probes, opt.nonzero_threshold, actions);
      if (check.passed() && zero.empty()) {
         rep.family = cand.family;
         rep.pair = cand.pair;
         rep.formula = cand.description;
         rep.residuals.insert(check.residuals.begin(), check.residuals.end());
         rep.diagnostics.insert(actions.begin(), actions.end());
         return rep;
      }
      tried << "[" << cand.description << ": max residual " << check.max_residual()
            << (zero.empty() ? "" : ", vanishing " + detail::join(zero)) << "] ";
   }
   throw error(error_kind::no_family_matches, "classify_2d: T^4 = I but no order-4 family verifies: " + tried.str());
}

} // namespace hardyops
