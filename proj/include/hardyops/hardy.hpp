#pragma once

// Boundary quadrature for H^p norms on the disc and bidisc, inner-function
// and subalgebra tests, finite Blaschke products, and the checks behind the
// rotation-only automorphism results for H^inf_0, the Neil algebra
// {f : f'(0) = 0} and H^inf_{0,...,n}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "hardyops/errors.hpp"
#include "hardyops/moebius.hpp"
#include "hardyops/report.hpp"
#include "hardyops/series.hpp"

namespace hardyops {

template <class F>
concept DiscFunction = std::invocable<const F&, complex_t> &&
                       std::convertible_to<std::invoke_result_t<const F&, complex_t>, complex_t>;

template <class F>
concept BidiscFunction = std::invocable<const F&, complex_t, complex_t> &&
                         std::convertible_to<std::invoke_result_t<const F&, complex_t, complex_t>, complex_t>;

// Exponent of H^p: a real p >= 1 or infinity.
class PNormSpec {
public:
   explicit PNormSpec(double p = std::numeric_limits<double>::infinity())
      : p_(p)
   {
      if (std::isnan(p) || p < 1.0) {
         throw error(error_kind::invalid_argument, "PNormSpec: p must be >= 1 or infinity");
      }
   }

   static PNormSpec infinity() { return PNormSpec(); }

   double p() const noexcept { return p_; }
   bool is_infinite() const noexcept { return std::isinf(p_); }
   bool is_two() const noexcept { return !is_infinite() && std::abs(p_ - 2.0) <= 1e-9; }
   // |f|^p is a trigonometric polynomial exactly when p is an even integer.
   bool is_even_integer() const noexcept
   {
      return !is_infinite() && p_ == std::round(p_) && std::fmod(p_, 2.0) == 0.0;
   }

   std::string to_string() const { return is_infinite() ? "inf" : std::to_string(p_); }

private:
   double p_;
};

// The M-th roots of unity.
class BoundaryGrid {
public:
   explicit BoundaryGrid(std::size_t size = 1024)
   {
      if (size < 8) {
         throw error(error_kind::invalid_argument, "BoundaryGrid: size must be >= 8");
      }
      points_.reserve(size);
      for (std::size_t k = 0; k < size; ++k) {
         points_.push_back(std::polar(1.0, angle_of(k, size)));
      }
   }

   std::size_t size() const noexcept { return points_.size(); }
   const std::vector<complex_t>& points() const noexcept { return points_; }
   double angle(std::size_t k) const noexcept { return angle_of(k, points_.size()); }
   double spacing() const noexcept { return kTwoPi / static_cast<double>(points_.size()); }

private:
   static double angle_of(std::size_t k, std::size_t m) noexcept
   {
      return kTwoPi * static_cast<double>(k) / static_cast<double>(m);
   }

   std::vector<complex_t> points_;
};

namespace detail {

// Grid maximum of |f| followed by a Brent search around the highest grid-local
// maxima, so that the supremum is resolved to rounding rather than to the
// O(spacing^2) accuracy of the raw grid.
template <DiscFunction F>
double boundary_sup(const F& f, const BoundaryGrid& grid)
{
   const std::size_t m = grid.size();
   std::vector<double> mod(m);
   for (std::size_t k = 0; k < m; ++k) {
      mod[k] = std::abs(complex_t(f(grid.points()[k])));
   }
   const double grid_max = *std::max_element(mod.begin(), mod.end());
   if (!(grid_max > 0.0)) {
      return grid_max;
   }

   std::vector<std::size_t> candidates;
   for (std::size_t k = 0; k < m; ++k) {
      const double prev = mod[(k + m - 1) % m];
      const double next = mod[(k + 1) % m];
      if (mod[k] >= prev && mod[k] >= next && mod[k] >= 0.95 * grid_max) {
         candidates.push_back(k);
      }
   }
   constexpr std::size_t kMaxRefinements = 64;
   if (candidates.size() > kMaxRefinements) {
      std::partial_sort(candidates.begin(), candidates.begin() + kMaxRefinements, candidates.end(),
                        [&](std::size_t x, std::size_t y) { return mod[x] > mod[y]; });
      candidates.resize(kMaxRefinements);
   }

   double best = grid_max;
   const double h = grid.spacing();
   const auto neg_mod = [&](double t) { return -std::abs(complex_t(f(std::polar(1.0, t)))); };
   for (const std::size_t k : candidates) {
      const double t = grid.angle(k);
      const auto [t_best, value] =
         boost::math::tools::brent_find_minima(neg_mod, t - h, t + h, std::numeric_limits<double>::digits / 2);
      best = std::max(best, -value);
   }
   return best;
}

// Odd or fractional powers of |f| have kinks smoothed only at the scale of
// the distance from the zeros of f to the circle, and random polynomials keep
// zeros very close to it; the equal-weight rule then converges slowly. Each
// grid cell gets its own rule instead: adaptive Gauss-Kronrod on the circle,
// a fixed tensor Gauss-Legendre rule on the torus.
inline constexpr unsigned kCellNodes1D = 15;
inline constexpr unsigned kCellMaxDepth = 4;
inline constexpr double kCellRelTol = 1e-9;
inline constexpr unsigned kCellNodes2D = 7;

template <DiscFunction F>
double boundary_mean_power(const F& f, double p, const BoundaryGrid& grid)
{
   const auto g = [&](double t) { return std::pow(std::abs(complex_t(f(std::polar(1.0, t)))), p); };
   const double h = grid.spacing();
   double sum = 0.0;
   for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid.angle(k);
      sum += boost::math::quadrature::gauss_kronrod<double, kCellNodes1D>::integrate(g, t, t + h, kCellMaxDepth,
                                                                                   kCellRelTol);
   }
   return sum / kTwoPi;
}

template <BidiscFunction F>
double torus_mean_power(const F& f, double p, const BoundaryGrid& grid_z, const BoundaryGrid& grid_w)
{
   using rule = boost::math::quadrature::gauss<double, kCellNodes2D>;
   // Tensor nodes and weights on [-1, 1], built once from the positive half stored by the rule.
   std::vector<double> nodes;
   std::vector<double> weights;
   const auto& abscissa = rule::abscissa();
   const auto& weight = rule::weights();
   for (std::size_t i = 0; i < abscissa.size(); ++i) {
      nodes.push_back(abscissa[i]);
      weights.push_back(weight[i]);
      if (abscissa[i] != 0.0) {
         nodes.push_back(-abscissa[i]);
         weights.push_back(weight[i]);
      }
   }
   const double hz = grid_z.spacing();
   const double hw = grid_w.spacing();
   std::vector<complex_t> ws;
   std::vector<double> wweights;
   for (std::size_t l = 0; l < grid_w.size(); ++l) {
      for (std::size_t j = 0; j < nodes.size(); ++j) {
         ws.push_back(std::polar(1.0, grid_w.angle(l) + 0.5 * hw * (nodes[j] + 1.0)));
         wweights.push_back(0.5 * hw * weights[j]);
      }
   }
   double sum = 0.0;
   for (std::size_t k = 0; k < grid_z.size(); ++k) {
      for (std::size_t i = 0; i < nodes.size(); ++i) {
         const complex_t z = std::polar(1.0, grid_z.angle(k) + 0.5 * hz * (nodes[i] + 1.0));
         double inner = 0.0;
         for (std::size_t j = 0; j < ws.size(); ++j) {
            inner += wweights[j] * std::pow(std::abs(complex_t(f(z, ws[j]))), p);
         }
         sum += 0.5 * hz * weights[i] * inner;
      }
   }
   return sum / (kTwoPi * kTwoPi);
}

} // namespace detail

/// H^p norm of f on the disc from its boundary values.
///
/// Even integer p uses the equal-weight rule on the grid; for a polynomial of
/// degree d it is exact once M > p*d. Other finite p integrate each grid cell with an
/// adaptive Gauss-Kronrod rule. p = infinity takes the grid maximum of |f| refined by a
/// local search between grid points.
template <DiscFunction F>
double hp_norm_1d(const F& f, const PNormSpec& spec, const BoundaryGrid& grid)
{
   if (spec.is_infinite()) {
      return detail::boundary_sup(f, grid);
   }
   const double p = spec.p();
   if (!spec.is_even_integer()) {
      return std::pow(detail::boundary_mean_power(f, p, grid), 1.0 / p);
   }
   double sum = 0.0;
   for (const auto& z : grid.points()) {
      sum += std::pow(std::abs(complex_t(f(z))), p);
   }
   return std::pow(sum / static_cast<double>(grid.size()), 1.0 / p);
}

/// H^p norm on the torus T^2. The quadrature choice mirrors the disc case;
/// p = infinity is the product-grid maximum.
template <BidiscFunction F>
double hp_norm_2d(const F& f, const PNormSpec& spec, const BoundaryGrid& grid_z, const BoundaryGrid& grid_w)
{
   if (!spec.is_infinite() && !spec.is_even_integer()) {
      return std::pow(detail::torus_mean_power(f, spec.p(), grid_z, grid_w), 1.0 / spec.p());
   }
   double acc = 0.0;
   for (const auto& z : grid_z.points()) {
      for (const auto& w : grid_w.points()) {
         const double v = std::abs(complex_t(f(z, w)));
         acc = spec.is_infinite() ? std::max(acc, v) : acc + std::pow(v, spec.p());
      }
   }
   if (spec.is_infinite()) {
      return acc;
   }
   const double count = static_cast<double>(grid_z.size() * grid_w.size());
   return std::pow(acc / count, 1.0 / spec.p());
}

template <BidiscFunction F>
double hp_norm_2d(const F& f, const PNormSpec& spec, const BoundaryGrid& grid)
{
   return hp_norm_2d(f, spec, grid, grid);
}

struct InnerCheck {
   bool inner = false;
   double max_deviation = 0.0;
};

/// max | |f(e^{it})| - 1 | over the grid, compared against tol.
template <DiscFunction F>
InnerCheck is_inner(const F& f, const BoundaryGrid& grid, double tol = 1e-10)
{
   double dev = 0.0;
   for (const auto& z : grid.points()) {
      dev = std::max(dev, std::abs(std::abs(complex_t(f(z))) - 1.0));
   }
   return {dev < tol, dev};
}

// c * prod_k (z - a_k) / (1 - conj(a_k) z)
class BlaschkeProduct {
public:
   explicit BlaschkeProduct(std::vector<complex_t> zeros, complex_t unimodular_factor = 1.0)
      : zeros_(std::move(zeros))
      , factor_(unimodular_factor)
   {
      for (const auto& a : zeros_) {
         if (!(std::abs(a) < 1.0 - 1e-9)) {
            throw error(error_kind::invalid_argument, "BlaschkeProduct: every zero needs modulus < 1 - 1e-9");
         }
      }
      if (std::abs(std::abs(factor_) - 1.0) > 1e-12) {
         throw error(error_kind::invalid_argument, "BlaschkeProduct: factor must be unimodular");
      }
   }

   const std::vector<complex_t>& zeros() const noexcept { return zeros_; }
   complex_t unimodular_factor() const noexcept { return factor_; }

   complex_t operator()(complex_t z) const noexcept
   {
      complex_t acc = factor_;
      for (const auto& a : zeros_) {
         acc *= (z - a) / (1.0 - std::conj(a) * z);
      }
      return acc;
   }

private:
   std::vector<complex_t> zeros_;
   complex_t factor_;
};

// Subalgebras of H^inf cut out by vanishing Taylor coefficients at 0.
struct Subalgebra {
   enum class Kind { h0, neil, h0n };

   Kind kind = Kind::h0;
   int n = 0; // only for h0n: f^{(j)}(0) = 0 for j = 0..n

   static Subalgebra h0() { return {Kind::h0, 0}; }
   static Subalgebra neil() { return {Kind::neil, 1}; }
   static Subalgebra h0n(int n)
   {
      if (n < 0) {
         throw error(error_kind::invalid_argument, "Subalgebra::h0n: n must be >= 0");
      }
      return {Kind::h0n, n};
   }

   // Derivative orders that must vanish.
   std::vector<int> vanishing_orders() const
   {
      switch (kind) {
      case Kind::h0: return {0};
      case Kind::neil: return {1};
      case Kind::h0n: {
         std::vector<int> v(static_cast<std::size_t>(n) + 1);
         std::iota(v.begin(), v.end(), 0);
         return v;
      }
      }
      return {};
   }

   std::string name() const
   {
      switch (kind) {
      case Kind::h0: return "H0";
      case Kind::neil: return "Neil";
      case Kind::h0n: return "H0n(" + std::to_string(n) + ")";
      }
      return "?";
   }
};

struct Membership {
   bool member = false;
   double witness = 0.0; // largest |f^{(j)}(0)| over the constrained orders
   int witness_order = -1;
};

/// Tests the vanishing derivatives f^{(j)}(0) = j! c_j against tol * j!.
inline Membership membership(const Series1D& f, const Subalgebra& cls, double tol = 1e-12)
{
   if (cls.kind == Subalgebra::Kind::h0n && f.degree() < static_cast<std::size_t>(cls.n)) {
      throw error(error_kind::invalid_argument, "membership: series degree must be >= n for H0n(n)");
   }
   Membership out{true, 0.0, -1};
   double factorial = 1.0;
   int next = 0;
   for (const int j : cls.vanishing_orders()) {
      while (next < j) {
         ++next;
         factorial *= next;
      }
      const double c = std::abs(f.coeff(static_cast<std::size_t>(j)));
      const double derivative = factorial * c;
      if (c >= tol) {
         out.member = false;
      }
      if (out.witness_order < 0 || derivative > out.witness) {
         out.witness = derivative;
         out.witness_order = j;
      }
   }
   return out;
}

/// Coefficients of f(e^{i theta} z).
inline Series1D rotate(const Series1D& f, double theta)
{
   std::vector<complex_t> v(f.coeffs().begin(), f.coeffs().end());
   for (std::size_t j = 0; j < v.size(); ++j) {
      v[j] *= std::polar(1.0, theta * static_cast<double>(j));
   }
   return Series1D(std::move(v));
}

/// Compares T(fg), computed from the full product series, with Tf * Tg on the grid.
inline double multiplicativity_residual(double theta, const Series1D& f, const Series1D& g, const BoundaryGrid& grid)
{
   const Series1D product = rotate(multiply(f, g, f.degree() + g.degree()), theta);
   const Series1D tf = rotate(f, theta);
   const Series1D tg = rotate(g, theta);
   double worst = 0.0;
   for (const auto& z : grid.points()) {
      worst = std::max(worst, std::abs(product(z) - tf(z) * tg(z)));
   }
   return worst;
}

namespace detail {

inline double sup_norm(const Series1D& f, const BoundaryGrid& grid)
{
   return hp_norm_1d(f, PNormSpec::infinity(), grid);
}

// Norm and class residuals for f |-> alpha f(e^{i theta} z) over a sample set.
inline void rotation_form_residuals(Report& report, complex_t alpha, double theta, const std::vector<Series1D>& samples,
                                    const Subalgebra& cls, const BoundaryGrid& grid)
{
   double norm_res = 0.0;
   double class_res = 0.0;
   for (std::size_t i = 0; i < samples.size(); ++i) {
      const Series1D image = alpha * rotate(samples[i], theta);
      const double nr = std::abs(sup_norm(image, grid) - sup_norm(samples[i], grid));
      norm_res = std::max(norm_res, nr);
      report.rows.push_back({"norm_preservation", i, nr});
      if (membership(samples[i], cls, report.tolerance).member) {
         const double cr = membership(image, cls, report.tolerance).witness;
         class_res = std::max(class_res, cr);
         report.rows.push_back({"class_preservation", i, cr});
      }
   }
   report.residuals["norm_preservation"] = norm_res;
   report.residuals["class_preservation"] = class_res;
}

} // namespace detail

/// Checks that f |-> f(e^{i theta} z) is multiplicative, sup-norm preserving and class preserving.
inline Report rotation_automorphism_check(double theta, const std::vector<Series1D>& samples, const Subalgebra& cls,
                                          double tol = 1e-10, const BoundaryGrid& grid = BoundaryGrid(1024))
{
   Report report;
   report.check = "rotation_automorphism_" + cls.name();
   report.tolerance = tol;
   report.grid_size = grid.size();

   double mult = 0.0;
   for (std::size_t i = 0; i < samples.size(); ++i) {
      for (std::size_t j = i; j < samples.size(); ++j) {
         const double r = multiplicativity_residual(theta, samples[i], samples[j], grid);
         mult = std::max(mult, r);
         report.rows.push_back({"multiplicativity", i, r});
      }
   }
   report.residuals["multiplicativity"] = mult;
   detail::rotation_form_residuals(report, 1.0, theta, samples, cls, grid);
   return report;
}

struct CompositionFalsifier {
   Series1D witness;
   double violation = 0.0;
};

/// Exhibits f in the class whose composition f o tau leaves it.
///
/// H0 uses f = z, so the violation is |(f o tau)(0)| = |tau(0)|. Neil uses
/// f = z^2 / 2, so the violation is |(f o tau)'(0)| = |tau(0) tau'(0)|.
inline CompositionFalsifier falsify_composition_automorphism(const DiscAutomorphism& tau, const Subalgebra& cls)
{
   const Series1D tau_series = to_series(tau, 2);
   switch (cls.kind) {
   case Subalgebra::Kind::h0: {
      const Series1D witness = Series1D::monomial(1);
      return {witness, std::abs(compose(witness, tau_series, 2).coeff(0))};
   }
   case Subalgebra::Kind::neil: {
      const Series1D witness = Series1D::monomial(2, 0.5);
      return {witness, std::abs(compose(witness, tau_series, 2).coeff(1))};
   }
   case Subalgebra::Kind::h0n: break;
   }
   throw error(error_kind::invalid_argument, "falsify_composition_automorphism: class must be H0 or Neil");
}

/// Checks that f |-> alpha f(e^{i theta} z) preserves the sup norm and maps Neil samples into the Neil class.
inline Report isometry_form_check_neil(complex_t alpha, double theta, const std::vector<Series1D>& samples,
                                       double tol = 1e-10, const BoundaryGrid& grid = BoundaryGrid(1024))
{
   if (std::abs(std::abs(alpha) - 1.0) > 1e-12) {
      throw error(error_kind::invalid_argument, "isometry_form_check_neil: |alpha| must be 1");
   }
   Report report;
   report.check = "isometry_form_Neil";
   report.tolerance = tol;
   report.grid_size = grid.size();
   detail::rotation_form_residuals(report, alpha, theta, samples, Subalgebra::neil(), grid);
   return report;
}

} // namespace hardyops
