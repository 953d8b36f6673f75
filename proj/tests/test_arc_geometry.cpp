#include <arcpoly/arc_geometry.hpp>
#include <arcpoly/serialization.hpp>

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace arcpoly;

namespace {

const double test_alphas[] = {pi / 6, pi / 2, 2.5};

} // namespace

TEST(ArcParams, InvariantsHold) {
  for (double a : {0.01, pi / 6, pi / 2, 2.5, 3.1}) {
    ArcParams p(a);
    EXPECT_GT(p.gamma(), 0.0);
    EXPECT_LT(p.gamma(), 1.0);
    EXPECT_GT(p.big_k(), 0.0);
    EXPECT_LT(p.big_k(), std::sqrt(2.0));
    EXPECT_EQ(p.beta().real(), 0.0);
    EXPECT_GT(p.beta_im(), 0.0);
    EXPECT_LT(p.beta_im(), 1.0);
    EXPECT_NEAR(std::abs(map_h(p, 1.0) - p.endpoint_plus()), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(map_h(p, -1.0) - p.endpoint_minus()), 0.0, 1e-14);
  }
}

TEST(ArcParams, RejectsDegenerateOpenings) {
  EXPECT_THROW(ArcParams{0.0}, DomainError);
  EXPECT_THROW(ArcParams{5e-7}, DomainError);
  EXPECT_THROW(ArcParams{pi}, DomainError);
  EXPECT_THROW(ArcParams{-1.0}, DomainError);
}

TEST(ArcParams, JsonRoundTrip) {
  ArcParams p(pi / 3);
  nlohmann::json j = p;
  EXPECT_DOUBLE_EQ(j.at("alpha").get<double>(), pi / 3);
  EXPECT_DOUBLE_EQ(j.at("K").get<double>(), p.big_k());
  EXPECT_DOUBLE_EQ(arc_params_from_json(j).gamma(), p.gamma());
}

TEST(Weight, ValueAtMidpoint) {
  ArcParams p(pi / 2);
  EXPECT_NEAR(weight_w_alpha(p, pi), 0.5, 1e-15);
}

TEST(Weight, BlowsUpMonotonicallyTowardEndpoint) {
  ArcParams p(pi / 2);
  double prev = 0.0;
  for (int k = 1; k <= 9; ++k) {
    const double w = weight_w_alpha(p, p.alpha() + std::pow(10.0, -k));
    EXPECT_GT(w, prev);
    prev = w;
  }
  EXPECT_GT(prev, 1e4);
}

TEST(Weight, RejectsEndpointBand) {
  ArcParams p(pi / 2);
  EXPECT_THROW(weight_w_alpha(p, p.alpha()), DomainError);
  EXPECT_THROW(weight_w_alpha(p, p.alpha() + 1e-11), DomainError);
  EXPECT_THROW(weight_w_alpha(p, 0.1), DomainError);
}

TEST(Weight, NormalizedMassIsOneHalf) {
  for (double a : test_alphas) {
    ArcParams p(a);
    const double mass = oracle::arc_weighted_integral(p, [](double) { return 1.0; });
    EXPECT_NEAR(mass / two_pi, 0.5, 1e-10) << "alpha " << a;
    EXPECT_NEAR(make_quadrature(p).integrate([](double) { return 1.0; }) / two_pi, 0.5, 1e-13);
  }
}

TEST(MapH, ReferenceValues) {
  ArcParams p(pi / 2);
  EXPECT_NEAR(std::abs(map_h(p, 1.0) - cplx(0, 1)), 0.0, 1e-14);
  for (double a : test_alphas) {
    ArcParams q(a);
    EXPECT_NEAR(std::abs(map_h(q, 0.0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(map_h(q, cplx(0, 1)) + 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(map_h(q, cplx(0, -1)) + 1.0), 0.0, 1e-14);
  }
}

TEST(MapH, Poles) {
  ArcParams p(pi / 2);
  EXPECT_THROW(map_h(p, -p.beta()), PoleError);
  EXPECT_THROW(map_h(p, -1.0 / p.beta()), PoleError);
}

TEST(MapH, SymmetryAndUnimodularity) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double a : test_alphas) {
    ArcParams p(a);
    for (int i = 0; i < 2000; ++i) {
      const cplx v(u(rng), u(rng));
      if (std::abs(v) < 1e-3) continue;
      const cplx h1 = map_h(p, v), h2 = map_h(p, 1.0 / v);
      EXPECT_LE(std::abs(h1 - h2), 1e-12 * std::max(1.0, std::abs(h1)));
    }
    for (int i = 0; i < 1000; ++i) {
      const double w = two_pi * i / 1000.0;
      EXPECT_NEAR(std::abs(map_h(p, std::polar(1.0, w))), 1.0, 1e-12);
    }
  }
}

TEST(MapChi, TrivialValues) {
  for (double a : test_alphas) {
    ArcParams p(a);
    EXPECT_NEAR(std::abs(map_chi(p, 0.0, ChiBranch::inner)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(map_chi(p, 0.0, ChiBranch::outer) - 1.0 / p.gamma()), 0.0, 1e-14);
  }
  ArcParams p(pi / 2);
  const cplx expect = std::polar(1.0, pi / 4);
  EXPECT_NEAR(std::abs(map_chi(p, cplx(0, 1), ChiBranch::outer) - expect), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(map_chi(p, cplx(0, 1), ChiBranch::inner) - expect), 0.0, 1e-14);
}

TEST(MapChi, GrowthAtInfinity) {
  for (double a : test_alphas) {
    ArcParams p(a);
    const cplx z = 1e6;
    // chi_outer(z) = (2z + 1 - cos(alpha)) / (2 gamma) + O(1/z)
    EXPECT_NEAR(std::abs(map_chi(p, z, ChiBranch::outer)) / std::abs(z) * p.gamma(), 1.0, 1e-5);
  }
}

TEST(MapChi, BranchIdentities) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (double a : test_alphas) {
    ArcParams p(a);
    for (int i = 0; i < 3000; ++i) {
      const cplx z(u(rng), u(rng));
      const cplx o = map_chi(p, z, ChiBranch::outer), n = map_chi(p, z, ChiBranch::inner);
      const double s = 1.0 + std::abs(z);
      EXPECT_LE(std::abs(o * n - z), 1e-12 * s);
      EXPECT_LE(std::abs(o + n - (z + 1.0) / p.gamma()), 1e-12 * s / p.gamma());
      EXPECT_GE(std::abs(o), 1.0);
      EXPECT_LE(std::abs(n), 1.0);
    }
  }
}

TEST(MapChi, AmbiguousOnArc) {
  ArcParams p(pi / 2);
  EXPECT_THROW(map_chi(p, std::polar(1.0, 2.0), ChiBranch::outer), BranchAmbiguityError);
}

TEST(Lambda, TrivialValues) {
  for (double a : test_alphas) {
    ArcParams p(a);
    EXPECT_NEAR(lambda_of_theta(p, a), 0.0, 1e-7);
    EXPECT_NEAR(lambda_of_theta(p, two_pi - a), pi, 1e-7);
    EXPECT_NEAR(lambda_of_theta(p, pi), pi / 2, 1e-15);
    EXPECT_THROW(lambda_of_theta(p, 0.5 * a), DomainError);
  }
}

TEST(Lambda, OmegaRepresentationAgrees) {
  for (double a : test_alphas) {
    ArcParams p(a);
    for (int i = 1; i < 200; ++i) {
      const double w = pi * i / 200.0;
      const double th = theta_of_omega(p, w);
      EXPECT_NEAR(lambda_of_omega(p, w), lambda_of_theta(p, th), 1e-12);
    }
  }
}

TEST(OmegaOfTheta, MidpointAndRoundTrip) {
  ArcParams p(pi / 2);
  EXPECT_NEAR(omega_of_theta(p, pi), pi / 2, 1e-15);
  for (double a : test_alphas) {
    ArcParams q(a);
    for (int i = 1; i < 1000; ++i) {
      const double th = a + (two_pi - 2 * a) * i / 1000.0;
      const double w = omega_of_theta(q, th);
      EXPECT_GT(w, 0.0);
      EXPECT_LT(w, pi);
      EXPECT_LE(std::abs(map_h(q, std::polar(1.0, w)) - std::polar(1.0, th)), 1e-12);
      const double wl = omega_of_theta(q, th, Sheet::lower);
      EXPECT_LE(std::abs(map_h(q, std::polar(1.0, wl)) - std::polar(1.0, th)), 1e-12);
      EXPECT_NEAR(theta_of_omega(q, w), th, 1e-12);
    }
  }
}

TEST(OmegaOfTheta, DerivativeIsWeight) {
  for (double a : test_alphas) {
    ArcParams p(a);
    for (int i = 1; i <= 100; ++i) {
      const double th = a + (two_pi - 2 * a) * i / 101.0;
      const double fd =
          oracle::central_difference([&](double t) { return omega_of_theta(p, t); }, th, 1e-6);
      EXPECT_NEAR(fd, weight_w_alpha(p, th), 1e-6 * std::max(1.0, weight_w_alpha(p, th)));
      EXPECT_NEAR(dtheta_domega(p, omega_of_theta(p, th)) * weight_w_alpha(p, th), 1.0, 1e-11);
    }
  }
}

TEST(Quadrature, ConstantsAndMoments) {
  for (double a : test_alphas) {
    ArcParams p(a);
    auto q = make_quadrature(p, 512);
    double s = 0.0;
    for (double w : q.weight) s += w;
    EXPECT_NEAR(s, pi, 1e-12);
    const cplx m1 = q.integrate([](double t) { return std::polar(1.0, t); });
    const cplx ref =
        oracle::arc_weighted_integral(p, [](double t) { return std::polar(1.0, t); });
    EXPECT_LE(std::abs(m1 - ref), 1e-10);
  }
  EXPECT_THROW(make_quadrature(ArcParams(1.0), 1), DomainError);
}

TEST(Quadrature, MeasureIdentityForTrigPolynomials) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (double a : test_alphas) {
    ArcParams p(a);
    auto q = make_quadrature(p, 512);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<cplx> c(11);
      for (auto& x : c) x = cplx(g(rng), g(rng));
      auto f = [&](double t) {
        cplx acc = 0.0;
        for (int k = -5; k <= 5; ++k) acc += c[k + 5] * std::polar(1.0, k * t);
        return acc;
      };
      const cplx in_omega = q.integrate(f);
      const cplx in_theta = oracle::arc_weighted_integral(p, f, 1e-13);
      EXPECT_LE(std::abs(in_omega - in_theta), 1e-9);
    }
  }
}

TEST(Quadrature, GradedRuleAndRefine) {
  ArcParams p(pi / 3);
  const double marks[] = {pi, 4.0};
  auto q = make_graded_quadrature(p, marks);
  double s = 0.0;
  for (double w : q.weight) s += w;
  EXPECT_NEAR(s, pi, 1e-12);
  auto r = refine(q);
  EXPECT_GT(r.size(), q.size());
  auto jump = [](double t) { return t < pi ? -1.0 : 1.0; };
  EXPECT_NEAR(q.integrate(jump), 0.0, 1e-12);
  EXPECT_NEAR(r.integrate(jump), 0.0, 1e-12);
}
