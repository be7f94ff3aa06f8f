#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "hardyops/errors.hpp"
#include "hardyops/moebius.hpp"
#include "hardyops/samples.hpp"

using namespace hardyops;

namespace {

constexpr complex_t I{0.0, 1.0};
constexpr double kPi = std::numbers::pi;

std::vector<complex_t> interior_points(std::size_t count, std::uint64_t seed)
{
   SampleRng rng(seed);
   std::vector<complex_t> out(count);
   for (auto& z : out) {
      z = std::polar(0.95 * rng.uniform(), kTwoPi * rng.uniform());
   }
   return out;
}

double pointwise_gap(const DiscAutomorphism& s, const DiscAutomorphism& t)
{
   double worst = 0.0;
   for (const auto& z : interior_points(16, 9)) {
      worst = std::max(worst, std::abs(s(z) - t(z)));
   }
   return worst;
}

DiscAutomorphism random_automorphism(SampleRng& rng, double max_modulus = 0.8)
{
   return {kTwoPi * rng.uniform(), std::polar(max_modulus * rng.uniform(), kTwoPi * rng.uniform())};
}

} // namespace

TEST(Automorphism, EvaluateExamples)
{
   const complex_t z{0.3, 0.1};
   EXPECT_EQ(DiscAutomorphism::identity()(z), z);
   EXPECT_EQ(DiscAutomorphism(0.0, 0.5)(0.5), complex_t{0.0});
   EXPECT_EQ(DiscAutomorphism::identity().derivative_at(z), complex_t{1.0});
}

TEST(Automorphism, DerivativeMatchesFiniteDifference)
{
   const DiscAutomorphism tau(1.1, {0.4, 0.2});
   const complex_t z{0.1, -0.3};
   const double h = 1e-6;
   const complex_t fd = (tau(z + h) - tau(z - h)) / (2.0 * h);
   EXPECT_LT(std::abs(fd - tau.derivative_at(z)), 1e-8);
}

TEST(Automorphism, RejectsParameterOnCircle)
{
   EXPECT_THROW(DiscAutomorphism(0.0, 1.0), error);
   EXPECT_THROW(DiscAutomorphism(0.0, {0.0, 1.0 - 1e-10}), error);
   EXPECT_THROW(DiscAutomorphism(std::nan(""), 0.0), error);
}

TEST(Automorphism, PoleProximity)
{
   const DiscAutomorphism tau(0.0, 0.5);
   try {
      (void)tau(2.0);
      FAIL() << "expected PoleProximity";
   } catch (const error& e) {
      EXPECT_EQ(e.kind(), error_kind::pole_proximity);
   }
   EXPECT_THROW((void)tau.derivative_at(2.0), error);
}

TEST(Automorphism, ThetaIsWrapped)
{
   EXPECT_NEAR(DiscAutomorphism(-kPi / 2.0, 0.0).theta(), 1.5 * kPi, 1e-15);
   EXPECT_NEAR(DiscAutomorphism(5.0 * kPi, 0.0).theta(), kPi, 1e-14);
}

TEST(Group, RotationsCompose)
{
   const auto r = compose(DiscAutomorphism::rotation(2.0), DiscAutomorphism::rotation(5.0));
   EXPECT_NEAR(angle_distance(r.theta(), 7.0), 0.0, 1e-14);
   EXPECT_LT(std::abs(r.a()), 1e-15);
}

TEST(Group, InverseOfIdentity)
{
   const auto inv = inverse(DiscAutomorphism::identity());
   EXPECT_NEAR(angle_distance(inv.theta(), 0.0), 0.0, 1e-15);
   EXPECT_EQ(inv.a(), complex_t{});
}

TEST(Group, ComposeWithInverseGivesIdentityParameters)
{
   const DiscAutomorphism tau(1.1, {0.4, 0.2});
   for (const auto& c : {compose(tau, inverse(tau)), compose(inverse(tau), tau)}) {
      EXPECT_LT(angle_distance(c.theta(), 0.0), 1e-10);
      EXPECT_LT(std::abs(c.a()), 1e-10);
      EXPECT_LT(pointwise_gap(c, DiscAutomorphism::identity()), 1e-10);
   }
}

TEST(Group, ComposeMatchesPointwise)
{
   SampleRng rng(21);
   for (int t = 0; t < 30; ++t) {
      const auto s = random_automorphism(rng);
      const auto u = random_automorphism(rng);
      const auto c = compose(s, u);
      for (const auto& z : interior_points(16, 4)) {
         EXPECT_LT(std::abs(c(z) - s(u(z))), 1e-10);
      }
   }
}

TEST(Order, Examples)
{
   EXPECT_EQ(order_up_to(DiscAutomorphism::rotation(kTwoPi / 3.0), 6), 3);
   EXPECT_EQ(order_up_to(DiscAutomorphism::identity(), 6), 1);
   EXPECT_EQ(order_up_to(elliptic_of_order(3, 0.4), 6), 3);
   EXPECT_EQ(order_up_to(DiscAutomorphism(1.0, 0.3), 8), std::nullopt);
   EXPECT_EQ(order_up_to(elliptic_of_order(5, 0.3), 4), std::nullopt);
}

TEST(Elliptic, Examples)
{
   const auto one = elliptic_of_order(1, {0.3, 0.3});
   EXPECT_LT(pointwise_gap(one, DiscAutomorphism::identity()), 1e-15);

   const auto half = elliptic_of_order(2, 0.0);
   EXPECT_NEAR(angle_distance(half.theta(), kPi), 0.0, 1e-15);
   EXPECT_LT(std::abs(half(0.3 + 0.2 * I) + (0.3 + 0.2 * I)), 1e-15);

   const auto three = elliptic_of_order(3, 0.4);
   EXPECT_LT(std::abs(three(0.4) - 0.4), 1e-12);
   EXPECT_EQ(order_up_to(three, 3, 1e-9), 3);
}

TEST(Elliptic, InvalidOrder)
{
   try {
      (void)elliptic_of_order(0, 0.1);
      FAIL() << "expected InvalidOrder";
   } catch (const error& e) {
      EXPECT_EQ(e.kind(), error_kind::invalid_order);
   }
}

TEST(ToSeries, Examples)
{
   const Series1D id = to_series(DiscAutomorphism::identity(), 3);
   EXPECT_EQ(id, (Series1D{0.0, 1.0, 0.0, 0.0}));

   const Series1D rot = to_series(DiscAutomorphism::rotation(0.7), 4);
   EXPECT_LT(std::abs(rot.coeff(1) - std::polar(1.0, 0.7)), 1e-15);
   EXPECT_EQ(rot.coeff(0), complex_t{});
   EXPECT_EQ(rot.coeff(2), complex_t{});

   const DiscAutomorphism tau(0.0, 0.5);
   EXPECT_LT(std::abs(to_series(tau, 20)(0.9 * I) - tau(0.9 * I)), 1e-5);
}

TEST(ToSeries, TruncationTailOnClosedDisc)
{
   // Summing the geometric tail: tau(z) - s_N(z) = e^{i theta} (1 - |a|^2) conj(a)^N z^{N+1} / (1 - conj(a) z).
   // Its supremum over the closed disc is |a|^N (1 + |a|), reached at z = a / |a|.
   const DiscAutomorphism tau(0.4, {0.3, -0.2});
   const double r = std::abs(tau.a());
   for (const std::size_t deg : {std::size_t{4}, std::size_t{12}}) {
      const Series1D s = to_series(tau, deg);
      const double sup_bound = std::pow(r, static_cast<double>(deg)) * (1.0 + r);
      for (int k = 0; k < 64; ++k) {
         const complex_t z = std::polar(1.0, kTwoPi * k / 64.0);
         const complex_t tail = std::polar(1.0, tau.theta()) * (1.0 - r * r) *
                                std::pow(std::conj(tau.a()), static_cast<double>(deg)) *
                                std::pow(z, static_cast<double>(deg + 1)) / (1.0 - std::conj(tau.a()) * z);
         EXPECT_LT(std::abs((tau(z) - s(z)) - tail), 1e-14);
         EXPECT_LE(std::abs(tau(z) - s(z)), sup_bound * (1.0 + 1e-12));
      }
      const complex_t peak = tau.a() / r;
      EXPECT_NEAR(std::abs(tau(peak) - s(peak)), sup_bound, 1e-14);
   }
}

// ---------------------------------------------------------------------------
// Properties.

TEST(MoebiusProperties, CirclePreservation)
{
   SampleRng rng(31);
   for (int t = 0; t < 40; ++t) {
      const auto tau = random_automorphism(rng, 0.95);
      for (int k = 0; k < 256; ++k) {
         EXPECT_LT(std::abs(std::abs(tau(std::polar(1.0, kTwoPi * k / 256.0))) - 1.0), 1e-12);
      }
   }
}

TEST(MoebiusProperties, GroupLaws)
{
   SampleRng rng(32);
   const auto id = DiscAutomorphism::identity();
   for (int t = 0; t < 30; ++t) {
      const auto r = random_automorphism(rng);
      const auto s = random_automorphism(rng);
      const auto u = random_automorphism(rng);
      EXPECT_LT(pointwise_gap(compose(compose(r, s), u), compose(r, compose(s, u))), 1e-10);
      EXPECT_LT(pointwise_gap(compose(r, id), r), 1e-10);
      EXPECT_LT(pointwise_gap(compose(id, r), r), 1e-10);
      EXPECT_LT(pointwise_gap(compose(r, inverse(r)), id), 1e-10);
      EXPECT_LT(pointwise_gap(compose(inverse(r), r), id), 1e-10);
   }
}

TEST(MoebiusProperties, EllipticOrderIsExact)
{
   SampleRng rng(33);
   for (int n = 1; n <= 6; ++n) {
      for (int t = 0; t < 5; ++t) {
         const complex_t a = std::polar(0.8 * rng.uniform(), kTwoPi * rng.uniform());
         const auto tau = elliptic_of_order(n, a);
         EXPECT_LT(identity_deviation(tau, n), 1e-9);
         for (int k = 1; k < n; ++k) {
            EXPECT_GT(identity_deviation(tau, k), 0.1) << "n=" << n << " k=" << k;
         }
         EXPECT_LT(std::abs(tau(a) - a), 1e-12);
      }
   }
}

TEST(MoebiusProperties, NormalFormRoundtrip)
{
   SampleRng rng(34);
   for (int t = 0; t < 40; ++t) {
      const auto tau = random_automorphism(rng, 0.9);
      const auto back = compose(tau, DiscAutomorphism::identity());
      EXPECT_LT(angle_distance(back.theta(), tau.theta()), 1e-10);
      EXPECT_LT(std::abs(back.a() - tau.a()), 1e-10);
   }
}
