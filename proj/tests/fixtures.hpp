#pragma once

// Random diagonalizable matrices with spectrum drawn from {1, l1, l2}.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hardyops/moebius.hpp"
#include "hardyops/projections.hpp"
#include "hardyops/samples.hpp"

namespace fixtures {

using hardyops::complex_t;

struct SpectralMatrix {
   Eigen::MatrixXcd t;
   Eigen::MatrixXcd s;
   std::vector<int> labels; // 0: eigenvalue 1, 1: lambda1, 2: lambda2
   double condition = 0.0;
};

inline double condition_number(const Eigen::MatrixXcd& m)
{
   Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
   const auto& s = svd.singularValues();
   return s(0) / s(s.size() - 1);
}

// A pair of distinct unimodular values kept at least 0.3 away from 1 and each other.
inline hardyops::EigenPair random_pair(hardyops::SampleRng& rng)
{
   for (;;) {
      const complex_t l1 = std::polar(1.0, hardyops::kTwoPi * rng.uniform());
      const complex_t l2 = std::polar(1.0, hardyops::kTwoPi * rng.uniform());
      if (std::abs(l1 - 1.0) > 0.3 && std::abs(l2 - 1.0) > 0.3 && std::abs(l1 - l2) > 0.3) {
         return {l1, l2};
      }
   }
}

// S diag(mu) S^{-1} with cond(S) <= max_condition.
inline SpectralMatrix random_spectral_matrix(hardyops::SampleRng& rng, int n, const hardyops::EigenPair& pair,
                                             double max_condition = 100.0)
{
   const complex_t mus[3] = {1.0, pair.lambda1(), pair.lambda2()};
   SpectralMatrix out;
   for (;;) {
      Eigen::MatrixXcd s(n, n);
      for (int r = 0; r < n; ++r) {
         for (int c = 0; c < n; ++c) {
            s(r, c) = rng.unit_square() - complex_t{0.5, 0.5};
         }
      }
      out.condition = condition_number(s);
      if (out.condition <= max_condition) {
         out.s = s;
         break;
      }
   }
   out.labels.resize(static_cast<std::size_t>(n));
   Eigen::VectorXcd d(n);
   for (int k = 0; k < n; ++k) {
      out.labels[static_cast<std::size_t>(k)] = static_cast<int>(3.0 * rng.uniform());
      d(k) = mus[out.labels[static_cast<std::size_t>(k)]];
   }
   out.t = out.s * d.asDiagonal() * out.s.inverse();
   return out;
}

} // namespace fixtures
