#pragma once

// Automorphisms of the unit disc in the normal form
//     tau(z) = e^{i theta} (z - a) / (1 - conj(a) z),   |a| < 1.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "hardyops/errors.hpp"
#include "hardyops/series.hpp"

namespace hardyops {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Angle reduced to [0, 2 pi).
inline double wrap_angle(double theta) noexcept
{
   double t = std::fmod(theta, kTwoPi);
   if (t < 0.0) {
      t += kTwoPi;
   }
   if (t >= kTwoPi) {
      t = 0.0;
   }
   return t;
}

// Distance between two angles on the circle.
inline double angle_distance(double a, double b) noexcept
{
   const double d = wrap_angle(a - b);
   return std::min(d, kTwoPi - d);
}

class DiscAutomorphism {
public:
   static constexpr double kMaxParameterModulus = 1.0 - 1e-9;
   static constexpr double kPoleTol = 1e-12;

   DiscAutomorphism() = default;

   DiscAutomorphism(double theta, complex_t a)
      : theta_(wrap_angle(theta))
      , a_(a)
   {
      if (!std::isfinite(theta) || !std::isfinite(a.real()) || !std::isfinite(a.imag())) {
         throw error(error_kind::invalid_argument, "DiscAutomorphism: non-finite parameter");
      }
      if (std::abs(a) >= kMaxParameterModulus) {
         throw error(error_kind::invalid_argument, "DiscAutomorphism: |a| must be < 1 - 1e-9");
      }
   }

   static DiscAutomorphism identity() { return {}; }
   static DiscAutomorphism rotation(double theta) { return {theta, 0.0}; }

   double theta() const noexcept { return theta_; }
   complex_t a() const noexcept { return a_; }
   complex_t rotation_factor() const noexcept { return std::polar(1.0, theta_); }

   bool is_rotation() const noexcept { return a_ == complex_t{}; }

   complex_t operator()(complex_t z) const
   {
      const complex_t den = 1.0 - std::conj(a_) * z;
      if (std::abs(den) <= kPoleTol) {
         throw error(error_kind::pole_proximity, "DiscAutomorphism: |1 - conj(a) z| <= 1e-12");
      }
      return rotation_factor() * (z - a_) / den;
   }

   // tau'(z) = e^{i theta} (1 - |a|^2) / (1 - conj(a) z)^2
   complex_t derivative_at(complex_t z) const
   {
      const complex_t den = 1.0 - std::conj(a_) * z;
      if (std::abs(den) <= kPoleTol) {
         throw error(error_kind::pole_proximity, "DiscAutomorphism: |1 - conj(a) z| <= 1e-12");
      }
      return rotation_factor() * (1.0 - std::norm(a_)) / (den * den);
   }

   // tau^{on}(z), n >= 0.
   complex_t iterate(int n, complex_t z) const
   {
      for (int k = 0; k < n; ++k) {
         z = (*this)(z);
      }
      return z;
   }

private:
   double theta_ = 0.0;
   complex_t a_{};
};

inline DiscAutomorphism inverse(const DiscAutomorphism& tau)
{
   // tau^{-1}(w) = e^{-i theta} (w + a e^{i theta}) / (1 + conj(a) e^{-i theta} w)
   return {-tau.theta(), -tau.a() * tau.rotation_factor()};
}

/// tau1 o tau2 in normal form: a' = (tau1 o tau2)^{-1}(0), theta' = arg((tau1 o tau2)'(a') (1 - |a'|^2)).
inline DiscAutomorphism compose(const DiscAutomorphism& tau1, const DiscAutomorphism& tau2)
{
   const complex_t a = inverse(tau2)(tau1.a());
   const complex_t d = tau1.derivative_at(tau2(a)) * tau2.derivative_at(a) * (1.0 - std::norm(a));
   return {std::arg(d), a};
}

/// Pointwise distance from the identity over `count` boundary samples.
inline double identity_deviation(const DiscAutomorphism& tau, int iterations, std::size_t count = 32)
{
   double worst = 0.0;
   for (std::size_t k = 0; k < count; ++k) {
      const complex_t z = std::polar(1.0, kTwoPi * static_cast<double>(k) / static_cast<double>(count));
      worst = std::max(worst, std::abs(tau.iterate(iterations, z) - z));
   }
   return worst;
}

/// Smallest n <= n_max with tau^{on} = id on 32 boundary samples, or nullopt.
inline std::optional<int> order_up_to(const DiscAutomorphism& tau, int n_max, double tol = 1e-9)
{
   if (n_max < 1) {
      throw error(error_kind::invalid_argument, "order_up_to: n_max must be >= 1");
   }
   constexpr std::size_t kSamples = 32;
   std::array<complex_t, kSamples> start{};
   std::array<complex_t, kSamples> cur{};
   for (std::size_t k = 0; k < kSamples; ++k) {
      start[k] = std::polar(1.0, kTwoPi * static_cast<double>(k) / kSamples);
      cur[k] = start[k];
   }
   for (int n = 1; n <= n_max; ++n) {
      double worst = 0.0;
      for (std::size_t k = 0; k < kSamples; ++k) {
         cur[k] = tau(cur[k]);
         worst = std::max(worst, std::abs(cur[k] - start[k]));
      }
      if (worst < tol) {
         return n;
      }
   }
   return std::nullopt;
}

/// The involution phi_a(z) = (a - z) / (1 - conj(a) z).
inline DiscAutomorphism involution(complex_t a) { return {std::numbers::pi, a}; }

/// phi_a o rotation(2 pi / n) o phi_a: fixes a and has order exactly n.
inline DiscAutomorphism elliptic_of_order(int n, complex_t a)
{
   if (n < 1) {
      throw error(error_kind::invalid_order, "elliptic_of_order: n must be >= 1");
   }
   const auto phi = involution(a);
   if (n == 1) {
      return DiscAutomorphism::identity();
   }
   return compose(phi, compose(DiscAutomorphism::rotation(kTwoPi / n), phi));
}

/// Taylor coefficients of tau at 0, from the geometric expansion of (1 - conj(a) z)^{-1}.
inline Series1D to_series(const DiscAutomorphism& tau, std::size_t degree)
{
   const complex_t rot = tau.rotation_factor();
   const complex_t a = tau.a();
   const complex_t abar = std::conj(a);
   std::vector<complex_t> v(degree + 1);
   v[0] = -rot * a;
   complex_t abar_pow = 1.0;
   const double scale = 1.0 - std::norm(a);
   for (std::size_t k = 1; k <= degree; ++k) {
      v[k] = rot * abar_pow * scale;
      abar_pow *= abar;
   }
   return Series1D(std::move(v));
}

} // namespace hardyops
