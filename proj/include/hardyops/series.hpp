#pragma once

// Truncated power series in one and two complex variables.
//
// A Series1D of degree N stores c_0..c_N and stands for the polynomial
// sum c_n z^n; a Series2D of bidegree (N, M) stores c_{nm} row-major in the
// first variable. Binary operations truncate to the larger input degree
// unless an explicit output degree is passed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hardyops/errors.hpp"

namespace hardyops {

using complex_t = std::complex<double>;

inline constexpr double kNonvanishingTol = 1e-12;

namespace detail {

inline void require_finite(std::span<const complex_t> coeffs, const char* who)
{
   for (const auto& c : coeffs) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
         throw error(error_kind::invalid_argument, std::string(who) + ": non-finite coefficient");
      }
   }
}

} // namespace detail

class Series1D {
public:
   Series1D()
      : coeffs_{complex_t{0.0}}
   {
   }

   explicit Series1D(std::vector<complex_t> coeffs)
      : coeffs_(std::move(coeffs))
   {
      if (coeffs_.empty()) {
         throw error(error_kind::invalid_argument, "Series1D: empty coefficient sequence");
      }
      detail::require_finite(coeffs_, "Series1D");
   }

   Series1D(std::initializer_list<complex_t> coeffs)
      : Series1D(std::vector<complex_t>(coeffs))
   {
   }

   static Series1D zero(std::size_t degree) { return Series1D(std::vector<complex_t>(degree + 1)); }

   static Series1D constant(complex_t c, std::size_t degree = 0)
   {
      std::vector<complex_t> v(degree + 1);
      v[0] = c;
      return Series1D(std::move(v));
   }

   // c * z^k, stored at degree max(k, degree).
   static Series1D monomial(std::size_t k, complex_t c = 1.0, std::size_t degree = 0)
   {
      std::vector<complex_t> v(std::max(k, degree) + 1);
      v[k] = c;
      return Series1D(std::move(v));
   }

   std::size_t degree() const noexcept { return coeffs_.size() - 1; }
   std::span<const complex_t> coeffs() const noexcept { return coeffs_; }

   // Coefficient k, zero past the stored degree.
   complex_t coeff(std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : complex_t{}; }

   // Pads with zeros or drops trailing coefficients.
   Series1D truncated(std::size_t degree) const
   {
      std::vector<complex_t> v(degree + 1);
      std::copy_n(coeffs_.begin(), std::min(v.size(), coeffs_.size()), v.begin());
      return Series1D(std::move(v));
   }

   // Horner evaluation.
   complex_t operator()(complex_t z) const noexcept
   {
      complex_t acc{};
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
         acc = acc * z + *it;
      }
      return acc;
   }

   friend Series1D operator+(const Series1D& f, const Series1D& g)
   {
      std::vector<complex_t> v(std::max(f.coeffs_.size(), g.coeffs_.size()));
      for (std::size_t k = 0; k < v.size(); ++k) {
         v[k] = f.coeff(k) + g.coeff(k);
      }
      return Series1D(std::move(v));
   }

   friend Series1D operator-(const Series1D& f, const Series1D& g) { return f + complex_t{-1.0} * g; }

   friend Series1D operator*(complex_t s, const Series1D& f)
   {
      std::vector<complex_t> v(f.coeffs_);
      for (auto& c : v) {
         c *= s;
      }
      return Series1D(std::move(v));
   }

   friend bool operator==(const Series1D&, const Series1D&) = default;

private:
   std::vector<complex_t> coeffs_;
};

class Series2D {
public:
   Series2D()
      : Series2D(0, 0)
   {
   }

   Series2D(std::size_t n, std::size_t m)
      : rows_(n + 1)
      , cols_(m + 1)
      , coeffs_(rows_ * cols_)
   {
   }

   // `coeffs` is row-major: index n * (m + 1) + j holds the coefficient of z^n w^j.
   Series2D(std::size_t n, std::size_t m, std::vector<complex_t> coeffs)
      : rows_(n + 1)
      , cols_(m + 1)
      , coeffs_(std::move(coeffs))
   {
      if (coeffs_.size() != rows_ * cols_) {
         throw error(error_kind::invalid_argument, "Series2D: coefficient count does not match bidegree");
      }
      detail::require_finite(coeffs_, "Series2D");
   }

   std::pair<std::size_t, std::size_t> bidegree() const noexcept { return {rows_ - 1, cols_ - 1}; }
   std::span<const complex_t> coeffs() const noexcept { return coeffs_; }

   complex_t coeff(std::size_t n, std::size_t m) const noexcept
   {
      return (n < rows_ && m < cols_) ? coeffs_[n * cols_ + m] : complex_t{};
   }

   void set(std::size_t n, std::size_t m, complex_t c)
   {
      if (n >= rows_ || m >= cols_) {
         throw error(error_kind::invalid_argument, "Series2D::set: index out of range");
      }
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
         throw error(error_kind::invalid_argument, "Series2D::set: non-finite coefficient");
      }
      coeffs_[n * cols_ + m] = c;
   }

   // Nested Horner: outer in z, inner in w.
   complex_t operator()(complex_t z, complex_t w) const noexcept
   {
      complex_t acc{};
      for (std::size_t r = rows_; r-- > 0;) {
         complex_t inner{};
         for (std::size_t c = cols_; c-- > 0;) {
            inner = inner * w + coeffs_[r * cols_ + c];
         }
         acc = acc * z + inner;
      }
      return acc;
   }

   friend bool operator==(const Series2D&, const Series2D&) = default;

private:
   std::size_t rows_;
   std::size_t cols_;
   std::vector<complex_t> coeffs_;
};

inline complex_t evaluate(const Series1D& f, complex_t z) noexcept { return f(z); }
inline complex_t evaluate(const Series2D& f, complex_t z, complex_t w) noexcept { return f(z, w); }

/// Cauchy product truncated at `out_degree`.
inline Series1D multiply(const Series1D& f, const Series1D& g, std::size_t out_degree)
{
   std::vector<complex_t> v(out_degree + 1);
   const auto fc = f.coeffs();
   const auto gc = g.coeffs();
   for (std::size_t i = 0; i < fc.size() && i <= out_degree; ++i) {
      if (fc[i] == complex_t{}) {
         continue;
      }
      for (std::size_t j = 0; j < gc.size() && i + j <= out_degree; ++j) {
         v[i + j] += fc[i] * gc[j];
      }
   }
   return Series1D(std::move(v));
}

/// Cauchy product truncated to max(deg f, deg g).
inline Series1D multiply(const Series1D& f, const Series1D& g)
{
   return multiply(f, g, std::max(f.degree(), g.degree()));
}

/// Coefficients of f(g(z)) through `out_degree`.
///
/// Accumulates sum c_k g^k with every power of g truncated at `out_degree`.
/// When |g(0)| is not small the higher coefficients of f feed every output
/// coefficient, so the result is only as accurate as f's truncation allows.
inline Series1D compose(const Series1D& f, const Series1D& g, std::size_t out_degree)
{
   const auto fc = f.coeffs();
   std::vector<complex_t> acc(out_degree + 1);
   Series1D power = Series1D::constant(1.0, out_degree);
   for (std::size_t k = 0; k < fc.size(); ++k) {
      if (k > 0) {
         power = multiply(power, g, out_degree);
      }
      for (std::size_t n = 0; n <= out_degree; ++n) {
         acc[n] += fc[k] * power.coeff(n);
      }
   }
   return Series1D(std::move(acc));
}

inline Series1D derivative(const Series1D& f)
{
   if (f.degree() == 0) {
      return Series1D::zero(0);
   }
   std::vector<complex_t> v(f.degree());
   for (std::size_t n = 1; n <= f.degree(); ++n) {
      v[n - 1] = static_cast<double>(n) * f.coeff(n);
   }
   return Series1D(std::move(v));
}

/// Formal logarithm; the constant term uses the principal branch, arg in (-pi, pi].
inline Series1D log_series(const Series1D& h, double tol = kNonvanishingTol)
{
   const complex_t h0 = h.coeff(0);
   if (std::abs(h0) <= tol) {
      throw error(error_kind::vanishing_constant_term, "log_series: |h(0)| <= tolerance");
   }
   const std::size_t deg = h.degree();
   std::vector<complex_t> out(deg + 1);
   out[0] = std::log(h0);
   // h * L' = h'  =>  n L_n h_0 = n h_n - sum_{k=1}^{n-1} k L_k h_{n-k}
   for (std::size_t n = 1; n <= deg; ++n) {
      complex_t s = static_cast<double>(n) * h.coeff(n);
      for (std::size_t k = 1; k < n; ++k) {
         s -= static_cast<double>(k) * out[k] * h.coeff(n - k);
      }
      out[n] = s / (static_cast<double>(n) * h0);
   }
   return Series1D(std::move(out));
}

/// Formal exponential.
inline Series1D exp_series(const Series1D& h)
{
   const std::size_t deg = h.degree();
   std::vector<complex_t> out(deg + 1);
   out[0] = std::exp(h.coeff(0));
   // E' = h' E  =>  n E_n = sum_{k=1}^{n} k h_k E_{n-k}
   for (std::size_t n = 1; n <= deg; ++n) {
      complex_t s{};
      for (std::size_t k = 1; k <= n; ++k) {
         s += static_cast<double>(k) * h.coeff(k) * out[n - k];
      }
      out[n] = s / static_cast<double>(n);
   }
   return Series1D(std::move(out));
}

/// h^exponent, principal branch at the constant term.
inline Series1D fractional_power(const Series1D& h, double exponent, double tol = kNonvanishingTol)
{
   return exp_series(complex_t{exponent} * log_series(h, tol));
}

/// Interpolating polynomial of degree < nodes.size().
inline Series1D lagrange_polynomial(std::span<const complex_t> nodes, std::span<const complex_t> values,
                                    double tol = kNonvanishingTol)
{
   if (nodes.empty() || nodes.size() != values.size()) {
      throw error(error_kind::invalid_argument, "lagrange_polynomial: need equally many nodes and values");
   }
   for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
         if (std::abs(nodes[i] - nodes[j]) <= tol) {
            throw error(error_kind::duplicate_nodes, "lagrange_polynomial: nodes " + std::to_string(i) + " and " +
                                                        std::to_string(j) + " coincide");
         }
      }
   }
   const std::size_t deg = nodes.size() - 1;
   Series1D result = Series1D::zero(deg);
   for (std::size_t j = 0; j < nodes.size(); ++j) {
      Series1D basis = Series1D::constant(values[j], deg);
      for (std::size_t k = 0; k < nodes.size(); ++k) {
         if (k == j) {
            continue;
         }
         const complex_t scale = 1.0 / (nodes[j] - nodes[k]);
         basis = multiply(basis, Series1D{-nodes[k] * scale, scale}, deg);
      }
      result = result + basis;
   }
   return result;
}

} // namespace hardyops
