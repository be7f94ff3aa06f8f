#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "hardyops/errors.hpp"
#include "hardyops/hardy.hpp"
#include "hardyops/series.hpp"

namespace hardyops {

// Uniform doubles in [0, 1) from the top 53 bits of a 64-bit Mersenne
// Twister, so the stream is identical on every standard library.
class SampleRng {
public:
   explicit SampleRng(std::uint64_t seed)
      : engine_(seed)
   {
   }

   double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

   // Uniform in the unit square [0, 1) x [0, 1).
   complex_t unit_square() { return {uniform(), uniform()}; }

private:
   std::mt19937_64 engine_;
};

/// Deterministic random polynomials of degree max_degree with coefficients
/// uniform in the unit square, filtered into `cls` by zeroing the
/// constrained Taylor coefficients.
inline std::vector<Series1D> generate_samples(std::uint64_t seed, std::size_t count, std::size_t max_degree,
                                              std::optional<Subalgebra> cls = std::nullopt)
{
   if (count < 1) {
      throw error(error_kind::invalid_argument, "generate_samples: count must be >= 1");
   }
   SampleRng rng(seed);
   std::vector<Series1D> out;
   out.reserve(count);
   for (std::size_t i = 0; i < count; ++i) {
      std::vector<complex_t> c(max_degree + 1);
      for (auto& v : c) {
         v = rng.unit_square();
      }
      if (cls) {
         for (const int j : cls->vanishing_orders()) {
            if (static_cast<std::size_t>(j) < c.size()) {
               c[static_cast<std::size_t>(j)] = 0.0;
            }
         }
      }
      out.emplace_back(std::move(c));
   }
   return out;
}

inline std::vector<Series2D> generate_samples_2d(std::uint64_t seed, std::size_t count, std::size_t n_deg,
                                                 std::size_t m_deg)
{
   if (count < 1) {
      throw error(error_kind::invalid_argument, "generate_samples_2d: count must be >= 1");
   }
   SampleRng rng(seed);
   std::vector<Series2D> out;
   out.reserve(count);
   for (std::size_t i = 0; i < count; ++i) {
      std::vector<complex_t> c((n_deg + 1) * (m_deg + 1));
      for (auto& v : c) {
         v = rng.unit_square();
      }
      out.emplace_back(n_deg, m_deg, std::move(c));
   }
   return out;
}

} // namespace hardyops
