#pragma once

// Weighted composition operators
//     (Tf)(z)    = alpha (tau'(z))^{1/p} f(tau(z))
//     (Tf)(z, w) = alpha (tau'(z))^{1/p} f(tau(z), w sigma(z))
// as pointwise-evaluable objects and as matrices on the monomial basis,
// plus an expression algebra (sums, scalings, compositions, powers) over them.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "hardyops/errors.hpp"
#include "hardyops/hardy.hpp"
#include "hardyops/moebius.hpp"
#include "hardyops/report.hpp"
#include "hardyops/series.hpp"

namespace hardyops {

inline constexpr int kDefaultMaxDepth = 8;

struct BiPoint {
   complex_t z;
   complex_t w;
};

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
   using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline void require_unimodular(complex_t c, const char* who)
{
   if (!(std::abs(std::abs(c) - 1.0) <= 1e-12)) {
      throw error(error_kind::invalid_argument, std::string(who) + ": value must be unimodular");
   }
}

// Principal argument in (-pi, pi].
inline double principal_arg(complex_t c) noexcept
{
   const double t = std::arg(c);
   return t <= -std::numbers::pi ? std::numbers::pi : t;
}

} // namespace detail

/// (tau'(z))^{1/p} on the canonical branch
///     e^{i theta/p} (1 - |a|^2)^{1/p} (1 - conj(a) z)^{-2/p},
/// principal logarithm of (1 - conj(a) z). Identically 1 for p = infinity.
inline complex_t canonical_weight(const DiscAutomorphism& tau, const PNormSpec& p, complex_t z)
{
   if (p.is_infinite()) {
      return 1.0;
   }
   const double e = 1.0 / p.p();
   const complex_t base = 1.0 - std::conj(tau.a()) * z;
   return std::polar(std::pow(1.0 - std::norm(tau.a()), e), tau.theta() * e) * std::exp(-2.0 * e * std::log(base));
}

/// Taylor coefficients at 0 of canonical_weight(tau, p, .).
inline Series1D weight_series(const DiscAutomorphism& tau, const PNormSpec& p, std::size_t degree)
{
   if (p.is_infinite()) {
      return Series1D::constant(1.0, degree);
   }
   const double e = 1.0 / p.p();
   const Series1D base = Series1D{1.0, -std::conj(tau.a())}.truncated(degree);
   const complex_t lead = std::polar(std::pow(1.0 - std::norm(tau.a()), e), tau.theta() * e);
   return lead * exp_series(complex_t{-2.0 * e} * log_series(base));
}

// sigma(z) = c z^k, unimodular on the circle.
class UnimodularMonomial {
public:
   UnimodularMonomial(complex_t c = 1.0, int k = 0)
      : c_(c)
      , k_(k)
   {
      detail::require_unimodular(c, "UnimodularMonomial");
      if (k < 0) {
         throw error(error_kind::invalid_argument, "UnimodularMonomial: k must be >= 0");
      }
   }

   complex_t c() const noexcept { return c_; }
   int k() const noexcept { return k_; }
   complex_t operator()(complex_t z) const noexcept { return c_ * std::pow(z, k_); }

private:
   complex_t c_;
   int k_;
};

struct MaterializedMatrix {
   Eigen::MatrixXcd matrix;
   // Largest coefficient dropped by truncation while building atom columns.
   double truncation_error = 0.0;
};

class WeightedCompositionOp1D {
public:
   using point_type = complex_t;

   WeightedCompositionOp1D(complex_t alpha, DiscAutomorphism tau, PNormSpec p)
      : alpha_(alpha)
      , tau_(tau)
      , p_(p)
   {
      detail::require_unimodular(alpha, "WeightedCompositionOp1D alpha");
   }

   complex_t alpha() const noexcept { return alpha_; }
   const DiscAutomorphism& tau() const noexcept { return tau_; }
   const PNormSpec& p() const noexcept { return p_; }

   complex_t weight(complex_t z) const { return canonical_weight(tau_, p_, z); }

   template <class F>
   complex_t apply(const F& f, complex_t z) const
   {
      return alpha_ * weight(z) * complex_t(f(tau_(z)));
   }

   /// Column j holds the coefficients of T z^j through `degree`.
   MaterializedMatrix matrix(std::size_t degree) const
   {
      const std::size_t work = 2 * degree + 1;
      const Series1D w = weight_series(tau_, p_, work);
      const Series1D ts = to_series(tau_, work);
      const auto dim = static_cast<Eigen::Index>(degree + 1);
      MaterializedMatrix out{Eigen::MatrixXcd::Zero(dim, dim), 0.0};
      Series1D tau_pow = Series1D::constant(1.0, work);
      for (std::size_t j = 0; j <= degree; ++j) {
         const Series1D col = alpha_ * multiply(w, tau_pow, work);
         for (std::size_t r = 0; r <= work; ++r) {
            if (r <= degree) {
               out.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = col.coeff(r);
            } else {
               out.truncation_error = std::max(out.truncation_error, std::abs(col.coeff(r)));
            }
         }
         tau_pow = multiply(tau_pow, ts, work);
      }
      return out;
   }

private:
   complex_t alpha_;
   DiscAutomorphism tau_;
   PNormSpec p_;
};

class WeightedCompositionOp2D {
public:
   using point_type = BiPoint;

   WeightedCompositionOp2D(complex_t alpha, DiscAutomorphism tau, UnimodularMonomial sigma, PNormSpec p)
      : alpha_(alpha)
      , tau_(tau)
      , sigma_(sigma)
      , p_(p)
   {
      detail::require_unimodular(alpha, "WeightedCompositionOp2D alpha");
   }

   complex_t alpha() const noexcept { return alpha_; }
   const DiscAutomorphism& tau() const noexcept { return tau_; }
   const UnimodularMonomial& sigma() const noexcept { return sigma_; }
   const PNormSpec& p() const noexcept { return p_; }

   complex_t weight(complex_t z) const { return canonical_weight(tau_, p_, z); }

   template <class F>
   complex_t apply(const F& f, const BiPoint& x) const
   {
      return alpha_ * weight(x.z) * complex_t(f(BiPoint{tau_(x.z), x.w * sigma_(x.z)}));
   }

   /// Block matrix on z^n w^m, index n * (m_deg + 1) + m. T maps w^l to w^l, so
   /// column (j, l) is alpha c^l W(z) tau(z)^j z^{k l} placed in row block l.
   MaterializedMatrix matrix(std::size_t n_deg, std::size_t m_deg) const
   {
      const std::size_t work = 2 * n_deg + 1;
      const Series1D w = weight_series(tau_, p_, work);
      const Series1D ts = to_series(tau_, work);
      const auto cols = m_deg + 1;
      const auto dim = static_cast<Eigen::Index>((n_deg + 1) * cols);
      MaterializedMatrix out{Eigen::MatrixXcd::Zero(dim, dim), 0.0};
      Series1D tau_pow = Series1D::constant(1.0, work);
      for (std::size_t j = 0; j <= n_deg; ++j) {
         const Series1D base = alpha_ * multiply(w, tau_pow, work);
         for (std::size_t l = 0; l <= m_deg; ++l) {
            const complex_t cl = std::pow(sigma_.c(), static_cast<int>(l));
            const std::size_t shift = static_cast<std::size_t>(sigma_.k()) * l;
            const auto col = static_cast<Eigen::Index>(j * cols + l);
            for (std::size_t r = 0; r <= work + shift; ++r) {
               const complex_t v = r >= shift ? cl * base.coeff(r - shift) : complex_t{};
               if (r <= n_deg) {
                  out.matrix(static_cast<Eigen::Index>(r * cols + l), col) = v;
               } else {
                  out.truncation_error = std::max(out.truncation_error, std::abs(v));
               }
            }
         }
         tau_pow = multiply(tau_pow, ts, work);
      }
      return out;
   }

private:
   complex_t alpha_;
   DiscAutomorphism tau_;
   UnimodularMonomial sigma_;
   PNormSpec p_;
};

template <class Atom>
class OperatorExpr;

namespace expr_node {

struct Identity {};

template <class Atom>
struct Leaf {
   Atom op;
};

template <class Atom>
struct Scale {
   complex_t factor;
   OperatorExpr<Atom> operand;
};

template <class Atom>
struct Sum {
   OperatorExpr<Atom> lhs;
   OperatorExpr<Atom> rhs;
};

// outer o inner: inner is applied first.
template <class Atom>
struct Compose {
   OperatorExpr<Atom> outer;
   OperatorExpr<Atom> inner;
};

template <class Atom>
struct Power {
   OperatorExpr<Atom> base;
   int exponent;
};

} // namespace expr_node

/// Immutable operator expression tree over atoms of one kind.
///
/// Depth counts the longest chain of atom applications (the degree of the
/// expression as a polynomial in its atoms); apply() refuses expressions
/// deeper than its bound.
template <class Atom>
class OperatorExpr {
public:
   using point_type = typename Atom::point_type;
   using function_type = std::function<complex_t(const point_type&)>;
   using node_type = std::variant<expr_node::Identity, expr_node::Leaf<Atom>, expr_node::Scale<Atom>,
                                  expr_node::Sum<Atom>, expr_node::Compose<Atom>, expr_node::Power<Atom>>;

   OperatorExpr()
      : OperatorExpr(expr_node::Identity{}, 0)
   {
   }

   static OperatorExpr identity() { return {}; }
   static OperatorExpr atom(Atom op) { return OperatorExpr(expr_node::Leaf<Atom>{std::move(op)}, 1); }

   int depth() const noexcept { return depth_; }
   const node_type& node() const noexcept { return *node_; }
   bool is_identity() const noexcept { return std::holds_alternative<expr_node::Identity>(*node_); }

   friend OperatorExpr operator+(const OperatorExpr& lhs, const OperatorExpr& rhs)
   {
      return OperatorExpr(expr_node::Sum<Atom>{lhs, rhs}, std::max(lhs.depth_, rhs.depth_));
   }

   friend OperatorExpr operator*(complex_t factor, const OperatorExpr& e)
   {
      return OperatorExpr(expr_node::Scale<Atom>{factor, e}, e.depth_);
   }

   friend OperatorExpr operator-(const OperatorExpr& lhs, const OperatorExpr& rhs)
   {
      return lhs + complex_t{-1.0} * rhs;
   }

   // Left-normalized: compose(a, compose(b, c)) is stored as compose(compose(a, b), c).
   friend OperatorExpr compose(const OperatorExpr& outer, const OperatorExpr& inner)
   {
      if (outer.is_identity()) {
         return inner;
      }
      if (inner.is_identity()) {
         return outer;
      }
      if (const auto* c = std::get_if<expr_node::Compose<Atom>>(inner.node_.get())) {
         return compose(compose(outer, c->outer), c->inner);
      }
      return OperatorExpr(expr_node::Compose<Atom>{outer, inner}, outer.depth_ + inner.depth_);
   }

   friend OperatorExpr power(const OperatorExpr& base, int exponent)
   {
      if (exponent < 0) {
         throw error(error_kind::invalid_argument, "power: exponent must be >= 0");
      }
      if (exponent == 0) {
         return identity();
      }
      if (exponent == 1) {
         return base;
      }
      return OperatorExpr(expr_node::Power<Atom>{base, exponent}, base.depth_ * exponent);
   }

   complex_t apply(const function_type& f, const point_type& x, int max_depth = kDefaultMaxDepth) const
   {
      if (depth_ > max_depth) {
         throw error(error_kind::depth_exceeded, "OperatorExpr::apply: depth " + std::to_string(depth_) +
                                                    " exceeds bound " + std::to_string(max_depth));
      }
      return eval(f, x);
   }

   // The function x |-> (E f)(x).
   function_type bind(function_type f, int max_depth = kDefaultMaxDepth) const
   {
      if (depth_ > max_depth) {
         throw error(error_kind::depth_exceeded, "OperatorExpr::bind: depth exceeds bound");
      }
      return [self = *this, f = std::move(f)](const point_type& x) { return self.eval(f, x); };
   }

private:
   OperatorExpr(node_type node, int depth)
      : node_(std::make_shared<const node_type>(std::move(node)))
      , depth_(depth)
   {
   }

   complex_t eval(const function_type& f, const point_type& x) const
   {
      return std::visit(
         detail::overloaded{
            [&](const expr_node::Identity&) { return f(x); },
            [&](const expr_node::Leaf<Atom>& leaf) { return leaf.op.apply(f, x); },
            [&](const expr_node::Scale<Atom>& s) { return s.factor * s.operand.eval(f, x); },
            [&](const expr_node::Sum<Atom>& s) { return s.lhs.eval(f, x) + s.rhs.eval(f, x); },
            [&](const expr_node::Compose<Atom>& c) {
               const function_type g = [&](const point_type& y) { return c.inner.eval(f, y); };
               return c.outer.eval(g, x);
            },
            [&](const expr_node::Power<Atom>& p) { return eval_power(p.base, p.exponent, f, x); },
         },
         *node_);
   }

   static complex_t eval_power(const OperatorExpr& base, int n, const function_type& f, const point_type& x)
   {
      if (n == 0) {
         return f(x);
      }
      const function_type g = [&](const point_type& y) { return eval_power(base, n - 1, f, y); };
      return base.eval(g, x);
   }

   std::shared_ptr<const node_type> node_;
   int depth_;
};

using Expr1D = OperatorExpr<WeightedCompositionOp1D>;
using Expr2D = OperatorExpr<WeightedCompositionOp2D>;

inline std::function<complex_t(const complex_t&)> as_function(const Series1D& f)
{
   return [f](const complex_t& z) { return f(z); };
}

inline std::function<complex_t(const BiPoint&)> as_function(const Series2D& f)
{
   return [f](const BiPoint& x) { return f(x.z, x.w); };
}

/// alpha^n prod_{k < n} (tau' o tau^k)^{1/p}(z), each factor on the canonical branch.
inline complex_t iterated_weight(const WeightedCompositionOp1D& op, int n, complex_t z)
{
   if (n < 1) {
      throw error(error_kind::invalid_argument, "iterated_weight: n must be >= 1");
   }
   complex_t acc = 1.0;
   for (int k = 0; k < n; ++k) {
      acc *= op.alpha() * op.weight(z);
      z = op.tau()(z);
   }
   return acc;
}

/// Unimodular alpha making T^n = I for an automorphism of exact order n.
///
/// omega = iterated weight at alpha = 1, evaluated at 0, is constant along
/// the closed orbit; the result is the principal n-th root of 1/omega.
inline complex_t calibrate_alpha(const DiscAutomorphism& tau, int n, const PNormSpec& p)
{
   if (n < 1) {
      throw error(error_kind::invalid_argument, "calibrate_alpha: n must be >= 1");
   }
   const auto order = order_up_to(tau, n, 1e-9);
   if (!order || *order != n) {
      throw error(error_kind::not_finite_order, "calibrate_alpha: tau does not have order exactly " + std::to_string(n));
   }
   const complex_t omega = iterated_weight(WeightedCompositionOp1D(1.0, tau, p), n, 0.0);
   return std::polar(1.0, detail::principal_arg(1.0 / omega) / n);
}

namespace detail {

template <class Atom, class AtomMatrix>
Eigen::MatrixXcd materialize(const OperatorExpr<Atom>& e, Eigen::Index dim, const AtomMatrix& atom_matrix,
                             double& truncation_error)
{
   return std::visit(
      overloaded{
         [&](const expr_node::Identity&) -> Eigen::MatrixXcd { return Eigen::MatrixXcd::Identity(dim, dim); },
         [&](const expr_node::Leaf<Atom>& leaf) -> Eigen::MatrixXcd {
            MaterializedMatrix m = atom_matrix(leaf.op);
            truncation_error = std::max(truncation_error, m.truncation_error);
            return std::move(m.matrix);
         },
         [&](const expr_node::Scale<Atom>& s) -> Eigen::MatrixXcd {
            return s.factor * materialize(s.operand, dim, atom_matrix, truncation_error);
         },
         [&](const expr_node::Sum<Atom>& s) -> Eigen::MatrixXcd {
            return materialize(s.lhs, dim, atom_matrix, truncation_error) +
                   materialize(s.rhs, dim, atom_matrix, truncation_error);
         },
         [&](const expr_node::Compose<Atom>& c) -> Eigen::MatrixXcd {
            return materialize(c.outer, dim, atom_matrix, truncation_error) *
                   materialize(c.inner, dim, atom_matrix, truncation_error);
         },
         [&](const expr_node::Power<Atom>& p) -> Eigen::MatrixXcd {
            const Eigen::MatrixXcd base = materialize(p.base, dim, atom_matrix, truncation_error);
            Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(dim, dim);
            for (int k = 0; k < p.exponent; ++k) {
               acc = acc * base;
            }
            return acc;
         },
      },
      e.node());
}

} // namespace detail

/// Matrix of the expression on z^0..z^degree, truncated at `degree`.
inline MaterializedMatrix materialize_matrix(const Expr1D& e, std::size_t degree)
{
   MaterializedMatrix out;
   out.matrix = detail::materialize(
      e, static_cast<Eigen::Index>(degree + 1),
      [&](const WeightedCompositionOp1D& op) { return op.matrix(degree); }, out.truncation_error);
   return out;
}

/// Block matrix of the expression on z^n w^m, 0 <= n <= n_deg, 0 <= m <= m_deg.
inline MaterializedMatrix materialize_matrix(const Expr2D& e, std::size_t n_deg, std::size_t m_deg)
{
   MaterializedMatrix out;
   out.matrix = detail::materialize(
      e, static_cast<Eigen::Index>((n_deg + 1) * (m_deg + 1)),
      [&](const WeightedCompositionOp2D& op) { return op.matrix(n_deg, m_deg); }, out.truncation_error);
   return out;
}

/// Coefficient vector of f padded or truncated to `degree`.
inline Eigen::VectorXcd coefficient_vector(const Series1D& f, std::size_t degree)
{
   Eigen::VectorXcd v(static_cast<Eigen::Index>(degree + 1));
   for (std::size_t k = 0; k <= degree; ++k) {
      v(static_cast<Eigen::Index>(k)) = f.coeff(k);
   }
   return v;
}

inline Series1D series_from_vector(const Eigen::VectorXcd& v)
{
   return Series1D(std::vector<complex_t>(v.data(), v.data() + v.size()));
}

/// max over samples of | ||T f||_p - ||f||_p |, with the norm taken from op.p().
///
/// Works for any atom exposing apply() and p(), so deliberately corrupted
/// operators can be run through the same check.
template <class Op>
Report verify_isometry(const Op& op, const std::vector<Series1D>& samples, const BoundaryGrid& grid, double tol)
{
   Report report;
   report.check = "isometry";
   report.tolerance = tol;
   report.grid_size = grid.size();
   double worst = 0.0;
   for (std::size_t i = 0; i < samples.size(); ++i) {
      const Series1D& f = samples[i];
      const auto tf = [&](complex_t z) { return op.apply(f, z); };
      const double r = std::abs(hp_norm_1d(tf, op.p(), grid) - hp_norm_1d(f, op.p(), grid));
      worst = std::max(worst, r);
      report.rows.push_back({"isometry", i, r});
   }
   report.residuals["isometry"] = worst;
   return report;
}

template <class Op>
Report verify_isometry(const Op& op, const std::vector<Series2D>& samples, const BoundaryGrid& grid, double tol)
{
   Report report;
   report.check = "isometry_2d";
   report.tolerance = tol;
   report.grid_size = grid.size();
   double worst = 0.0;
   for (std::size_t i = 0; i < samples.size(); ++i) {
      const Series2D& f = samples[i];
      const auto fb = [&](const BiPoint& x) { return f(x.z, x.w); };
      const auto tf = [&](complex_t z, complex_t w) { return op.apply(fb, BiPoint{z, w}); };
      const double r = std::abs(hp_norm_2d(tf, op.p(), grid) - hp_norm_2d(f, op.p(), grid));
      worst = std::max(worst, r);
      report.rows.push_back({"isometry_2d", i, r});
   }
   report.residuals["isometry_2d"] = worst;
   return report;
}

} // namespace hardyops
