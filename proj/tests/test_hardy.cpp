#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hardyops/errors.hpp"
#include "hardyops/hardy.hpp"
#include "hardyops/moebius.hpp"
#include "hardyops/samples.hpp"

using namespace hardyops;

namespace {

constexpr complex_t I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

std::vector<complex_t> random_zeros(SampleRng& rng, std::size_t count, double max_modulus)
{
   std::vector<complex_t> zs(count);
   for (auto& z : zs) {
      z = std::polar(max_modulus * rng.uniform(), kTwoPi * rng.uniform());
   }
   return zs;
}

} // namespace

TEST(PNorm, Validation)
{
   EXPECT_THROW(PNormSpec(0.5), error);
   EXPECT_THROW(PNormSpec(std::nan("")), error);
   EXPECT_TRUE(PNormSpec(2.0).is_two());
   EXPECT_TRUE(PNormSpec::infinity().is_infinite());
   EXPECT_FALSE(PNormSpec(2.1).is_two());
}

TEST(Grid, RootsOfUnity)
{
   EXPECT_THROW(BoundaryGrid(7), error);
   const BoundaryGrid g(16);
   for (std::size_t k = 0; k < g.size(); ++k) {
      EXPECT_LT(std::abs(std::pow(g.points()[k], 16) - 1.0), 1e-13);
      EXPECT_LT(std::abs(g.points()[k] - std::polar(1.0, kTwoPi * k / 16.0)), 1e-15);
   }
}

TEST(Norm1D, Examples)
{
   const BoundaryGrid g(512);
   for (const PNormSpec p : {PNormSpec(1.0), PNormSpec(3.0), PNormSpec::infinity()}) {
      EXPECT_NEAR(hp_norm_1d(Series1D{1.0}, p, g), 1.0, 1e-13);
      EXPECT_NEAR(hp_norm_1d(Series1D::monomial(7), p, g), 1.0, 1e-13);
   }
   EXPECT_NEAR(hp_norm_1d(Series1D{1.0, 1.0}, PNormSpec(4.0), g), std::pow(6.0, 0.25), 1e-10);
}

TEST(Norm1D, SupNormFindsOffGridMaximum)
{
   // |1 + e^{i phi} z| peaks at z = e^{-i phi}; put the peak halfway between grid points.
   const double phi = kTwoPi / 64.0 / 2.0;
   const Series1D f{1.0, std::polar(1.0, phi)};
   EXPECT_NEAR(hp_norm_1d(f, PNormSpec::infinity(), BoundaryGrid(64)), 2.0, 1e-12);
}

TEST(Norm2D, Examples)
{
   const BoundaryGrid g(64);
   Series2D one(0, 0);
   one.set(0, 0, 1.0);
   Series2D mono(3, 2);
   mono.set(3, 2, 1.0);
   for (const PNormSpec p : {PNormSpec(1.0), PNormSpec(4.0), PNormSpec::infinity()}) {
      EXPECT_NEAR(hp_norm_2d(one, p, g), 1.0, 1e-14);
      EXPECT_NEAR(hp_norm_2d(mono, p, g), 1.0, 1e-13);
   }
   Series2D f(1, 1, std::vector<complex_t>{1.0, 1.0, 1.0, 1.0});
   EXPECT_NEAR(hp_norm_2d(f, PNormSpec(4.0), BoundaryGrid(256)), std::sqrt(6.0), 1e-9);
}

TEST(Inner, Examples)
{
   const BoundaryGrid g(1024);
   const auto b = is_inner(BlaschkeProduct({0.5}), g);
   EXPECT_TRUE(b.inner);
   EXPECT_LT(b.max_deviation, 1e-12);

   const auto half = is_inner([](complex_t z) { return z / 2.0; }, g);
   EXPECT_FALSE(half.inner);
   EXPECT_NEAR(half.max_deviation, 0.5, 1e-15);
}

TEST(Inner, BlaschkeValidation)
{
   EXPECT_THROW(BlaschkeProduct({1.0}), error);
   EXPECT_THROW(BlaschkeProduct({0.2}, 2.0), error);
   const BlaschkeProduct b({0.3, -0.4 * I}, I);
   EXPECT_LT(std::abs(b(0.3)), 1e-15);
   EXPECT_LT(std::abs(b(-0.4 * I)), 1e-15);
}

TEST(Inner, BlaschkeComposedWithAutomorphism)
{
   SampleRng rng(17);
   const BoundaryGrid g(1024);
   const BlaschkeProduct b(random_zeros(rng, 5, 0.9), std::polar(1.0, 0.3));
   const DiscAutomorphism tau(2.0, {0.3, -0.5});
   const auto r = is_inner([&](complex_t z) { return b(tau(z)); }, g);
   EXPECT_TRUE(r.inner);
   EXPECT_LT(r.max_deviation, 1e-10);
}

TEST(Membership, Examples)
{
   const Series1D z2 = Series1D::monomial(2);
   EXPECT_TRUE(membership(z2, Subalgebra::h0()).member);
   EXPECT_TRUE(membership(z2, Subalgebra::neil()).member);

   const Series1D z = Series1D::monomial(1);
   EXPECT_TRUE(membership(z, Subalgebra::h0()).member);
   const auto neil = membership(z, Subalgebra::neil());
   EXPECT_FALSE(neil.member);
   EXPECT_DOUBLE_EQ(neil.witness, 1.0);
   EXPECT_EQ(neil.witness_order, 1);

   EXPECT_TRUE(membership(Series1D::monomial(3), Subalgebra::h0n(2)).member);
}

TEST(Membership, WitnessUsesFactorial)
{
   const Series1D f{0.0, 0.0, 0.5, 1.0};
   const auto m = membership(f, Subalgebra::h0n(3));
   EXPECT_FALSE(m.member);
   EXPECT_DOUBLE_EQ(m.witness, 6.0); // 3! * 1
   EXPECT_EQ(m.witness_order, 3);
}

TEST(Membership, H0nNeedsDegree)
{
   EXPECT_THROW((void)membership(Series1D{0.0, 1.0}, Subalgebra::h0n(3)), error);
}

TEST(RotationCheck, IdentityHasZeroResiduals)
{
   const auto samples = generate_samples(1, 5, 8, Subalgebra::h0());
   const Report r = rotation_automorphism_check(0.0, samples, Subalgebra::h0());
   for (const auto& [name, value] : r.residuals) {
      // Multiplicativity compares the Cauchy product against a product of
      // boundary values, so only it carries rounding.
      if (name.find("multiplicativ") != std::string::npos) {
         EXPECT_LT(value, 1e-12) << name;
      } else {
         EXPECT_EQ(value, 0.0) << name;
      }
   }
   EXPECT_TRUE(r.passed());
}

TEST(RotationCheck, NeilSamplesAtThirdTurn)
{
   const std::vector<Series1D> samples{Series1D::monomial(2), Series1D{0.0, 0.0, 0.0, 1.0, 0.0, 1.0}};
   const Report r = rotation_automorphism_check(kTwoPi / 3.0, samples, Subalgebra::neil(), 1e-12);
   EXPECT_TRUE(r.passed()) << r.max_residual();
   EXPECT_LT(multiplicativity_residual(kTwoPi / 3.0, Series1D::monomial(2), Series1D::monomial(3), BoundaryGrid(64)),
             1e-12);
}

TEST(CompositionFalsifier, Examples)
{
   for (const auto& cls : {Subalgebra::h0(), Subalgebra::neil()}) {
      EXPECT_EQ(falsify_composition_automorphism(DiscAutomorphism::identity(), cls).violation, 0.0);
      EXPECT_EQ(falsify_composition_automorphism(DiscAutomorphism::rotation(1.3), cls).violation, 0.0);
   }
   const DiscAutomorphism tau(0.0, 0.5);
   EXPECT_NEAR(falsify_composition_automorphism(tau, Subalgebra::h0()).violation, 0.5, 1e-12);
   const auto neil = falsify_composition_automorphism(tau, Subalgebra::neil());
   EXPECT_EQ(neil.witness, Series1D::monomial(2, 0.5));
   EXPECT_NEAR(neil.violation, std::abs(tau(0.0)) * std::abs(tau.derivative_at(0.0)), 1e-12);
   EXPECT_THROW((void)falsify_composition_automorphism(tau, Subalgebra::h0n(2)), error);
}

TEST(IsometryFormNeil, Examples)
{
   const auto samples = generate_samples(4, 10, 8, Subalgebra::neil());
   const Report id = isometry_form_check_neil(1.0, 0.0, samples);
   EXPECT_EQ(id.max_residual(), 0.0);

   const Report quarter = isometry_form_check_neil(I, kPi / 2.0, {Series1D::monomial(2)}, 1e-12);
   EXPECT_TRUE(quarter.passed()) << quarter.max_residual();

   const Report fifth = isometry_form_check_neil(-1.0, kTwoPi / 5.0, samples, 1e-10);
   EXPECT_TRUE(fifth.passed()) << fifth.max_residual();

   EXPECT_THROW((void)isometry_form_check_neil(1.1, 0.0, samples), error);
}

// ---------------------------------------------------------------------------
// Properties.

TEST(HardyProperties, QuadratureConsistency)
{
   const auto samples = generate_samples(5, 10, 16);
   for (const double p : {1.0, 3.0, 4.0}) {
      for (const auto& f : samples) {
         const double a = hp_norm_1d(f, PNormSpec(p), BoundaryGrid(1024));
         const double b = hp_norm_1d(f, PNormSpec(p), BoundaryGrid(2048));
         EXPECT_NEAR(a, b, 1e-8) << "p=" << p;
      }
   }
}

TEST(HardyProperties, MonotoneInP)
{
   const auto samples = generate_samples(6, 20, 10);
   const BoundaryGrid g(1024);
   for (const auto& f : samples) {
      double prev = 0.0;
      for (const double p : {1.0, 2.0, 3.0, 4.0}) {
         const double n = hp_norm_1d(f, PNormSpec(p), g);
         EXPECT_GE(n, prev - 1e-8);
         prev = n;
      }
      EXPECT_GE(hp_norm_1d(f, PNormSpec::infinity(), g), prev - 1e-8);
   }
}

TEST(HardyProperties, BlaschkeProductsAreInner)
{
   SampleRng rng(8);
   const BoundaryGrid g(1024);
   for (std::size_t n = 1; n <= 10; ++n) {
      const BlaschkeProduct b(random_zeros(rng, n, 0.9), std::polar(1.0, kTwoPi * rng.uniform()));
      const auto r = is_inner(b, g);
      EXPECT_TRUE(r.inner);
      EXPECT_LT(r.max_deviation, 1e-10);
   }
}

TEST(HardyProperties, RotationInvariantNorms)
{
   const auto samples = generate_samples(9, 5, 12);
   const BoundaryGrid g(512);
   for (const auto& f : samples) {
      for (const PNormSpec p : {PNormSpec(1.0), PNormSpec(3.0), PNormSpec::infinity()}) {
         const double base = hp_norm_1d(f, p, g);
         for (int k = 0; k < 12; ++k) {
            const double theta = kTwoPi * k / 12.0 + 0.05;
            EXPECT_NEAR(hp_norm_1d(rotate(f, theta), p, g), base, 1e-10);
         }
      }
   }
}

TEST(HardyProperties, H0FalsifierIsExactlyModulusOfA)
{
   SampleRng rng(10);
   for (int t = 0; t < 50; ++t) {
      const complex_t a = std::polar(0.95 * rng.uniform(), kTwoPi * rng.uniform());
      const DiscAutomorphism tau(kTwoPi * rng.uniform(), a);
      EXPECT_NEAR(falsify_composition_automorphism(tau, Subalgebra::h0()).violation, std::abs(a), 1e-12);
   }
}
