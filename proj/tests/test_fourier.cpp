#include <arcpoly/fourier.hpp>

#include <gtest/gtest.h>

using namespace arcpoly;

namespace {

const double test_alphas[] = {pi / 6, pi / 2, 2.5};

std::vector<int> doubling(int lo, int hi) {
  std::vector<int> d;
  for (int n = lo; n <= hi; n *= 2) d.push_back(n);
  return d;
}

} // namespace

TEST(Expand, BasisFunctionsHaveUnitCoefficients) {
  for (double a : test_alphas) {
    ArcParams p(a);
    PolySystem sys(p, 24);
    const QuadratureRule q = make_quadrature(p, 512);
    for (int m : {0, 3, 17}) {
      const auto e = expand(sys, [&](double t) { return psi_onarc(sys, m, t); }, 24, q);
      for (int j = 0; j <= 24; ++j) EXPECT_LT(std::abs(e.coeffs[j] - (j == m ? 1.0 : 0.0)), 1e-8);
      EXPECT_TRUE(e.converged);
    }
  }
}

TEST(Expand, ConstantHasMassCoefficient) {
  ArcParams p(pi / 3);
  PolySystem sys(p, 10);
  const auto e = expand(sys, [](double) { return cplx(1.0); }, 10, make_quadrature(p, 256));
  EXPECT_NEAR(std::abs(e.coeffs[0] - 1.0 / std::sqrt(2.0)), 0.0, 1e-13);
  const auto c = clamp_noise(e.coeffs);
  for (int j = 1; j <= 10; ++j) EXPECT_EQ(c[j], cplx(0.0));
}

TEST(Expand, PolynomialCoefficientsVanishAboveDegree) {
  ArcParams p(2.0);
  PolySystem sys(p, 12);
  const TestFunction f = function_by_id("poly3", p);
  const auto e = expand(sys, f.eval, 12, make_quadrature(p, 256));
  const auto c = clamp_noise(e.coeffs);
  EXPECT_NE(c[3], cplx(0.0));
  for (int j = 4; j <= 12; ++j) EXPECT_EQ(c[j], cplx(0.0)) << j;
}

TEST(Expand, FlagsUnderresolvedQuadrature) {
  ArcParams p(pi / 2);
  PolySystem sys(p, 4);
  const auto e = expand(sys, [](double t) { return std::polar(1.0, 300.0 * t); }, 4, make_quadrature(p, 32));
  EXPECT_FALSE(e.converged);
  EXPECT_FALSE(e.warning.empty());
  EXPECT_GT(e.refinement_delta, coefficient_tolerance);
}

TEST(Expand, GridFunctionInput) {
  ArcParams p(pi / 2);
  PolySystem sys(p, 8);
  const ArcFn f = [](double t) { return std::exp(std::polar(1.0, t)); };
  const QuadratureRule q = make_quadrature(p, 256);
  const auto a = expand(sys, GridFunction::omega_grid(p, 128, f), 8, q);
  const auto b = expand(sys, f, 8, q);
  for (int j = 0; j <= 8; ++j) EXPECT_LT(std::abs(a.coeffs[j] - b.coeffs[j]), 1e-10);
}

TEST(Expand, BesselInequality) {
  ArcParams p(pi / 4);
  PolySystem sys(p, 40);
  const MeasureSpec base = MeasureSpec::base(p);
  for (const auto& f : mixed_family(p, 8, 3)) {
    const QuadratureRule q = make_expansion_rule(p, f.marks, 40);
    const auto e = expand(sys, f.eval, 40, q, false);
    double s = 0.0;
    for (const auto& c : e.coeffs) s += std::norm(c);
    const double n = lp_norm_weighted(q, f.eval, 2.0, base);
    EXPECT_LE(s, n * n / two_pi + 1e-10) << f.id;
  }
}

TEST(PartialSum, ProjectionFixesPolynomials) {
  for (double a : test_alphas) {
    ArcParams p(a);
    PolySystem sys(p, 10);
    const TestFunction f = function_by_id("poly3", p);
    const QuadratureRule q = make_quadrature(p, 256);
    const auto e = expand(sys, f.eval, 10, q);
    for (int n : {3, 6, 10}) {
      const ArcFn r = [&](double t) { return partial_sum(e, n, t) - f(t); };
      for (double ex : {1.5, 2.0, 3.0}) EXPECT_LT(lp_norm_weighted(q, r, ex, MeasureSpec::base(p)), 1e-8);
    }
  }
}

TEST(PartialSum, Nesting) {
  ArcParams p(pi / 2);
  PolySystem sys(p, 20);
  const QuadratureRule q = make_quadrature(p, 512);
  const TestFunction f = analytic_exp();
  const auto e = expand(sys, f.eval, 20, q);
  for (auto [m, n] : {std::pair{12, 5}, std::pair{5, 12}, std::pair{8, 8}}) {
    const ArcFn sm = [&](double t) { return partial_sum(e, m, t); };
    const auto em = expand(sys, sm, 20, q, false);
    for (double t : {1.7, pi, 4.4})
      EXPECT_LT(std::abs(partial_sum(em, n, t) - partial_sum(e, std::min(m, n), t)), 1e-10);
  }
}

TEST(PartialSum, KernelFormMatchesSeries) {
  for (double a : test_alphas) {
    ArcParams p(a);
    PolySystem sys(p, 31);
    const QuadratureRule q = make_quadrature(p, 512);
    const TestFunction f = analytic_exp();
    const auto e = expand(sys, f.eval, 30, q);
    for (int n : {0, 7, 30})
      for (double w : {0.3, 1.4, 2.9}) {
        const ArcNode node = arc_node(p, w);
        EXPECT_LT(std::abs(partial_sum_kernel(sys, f.eval, n, node, q) - partial_sum(e, n, node)), 1e-8);
      }
  }
}

TEST(PartialSum, Linearity) {
  ArcParams p(pi / 3);
  PolySystem sys(p, 16);
  const QuadratureRule q = make_quadrature(p, 512);
  const TestFunction f = analytic_exp(), g = random_trig_polynomial(9);
  const cplx a(0.3, -1.1), b(2.0, 0.4);
  const auto ef = expand(sys, f.eval, 16, q), eg = expand(sys, g.eval, 16, q);
  const auto eh = expand(sys, [&](double t) { return a * f(t) + b * g(t); }, 16, q);
  for (double t : {1.2, 3.0, 5.0})
    EXPECT_LT(std::abs(partial_sum(eh, 16, t) - a * partial_sum(ef, 16, t) - b * partial_sum(eg, 16, t)), 1e-10);
}

TEST(PartialSum, ParsevalForSmoothFunction) {
  ArcParams p(pi / 2);
  PolySystem sys(p, 64);
  const QuadratureRule q = make_quadrature(p, 1024);
  const TestFunction f = smooth_bump(pi, 1.2);
  const auto e = expand(sys, f.eval, 64, q);
  double s = 0.0;
  for (const auto& c : e.coeffs) s += std::norm(c);
  const MeasureSpec base = MeasureSpec::base(p);
  const double nf = lp_norm_weighted(q, f.eval, 2.0, base);
  const double nr = lp_norm_weighted(q, [&](double t) { return f(t) - partial_sum(e, 64, t); }, 2.0, base);
  EXPECT_NEAR(nf * nf / two_pi, s + nr * nr / two_pi, 1e-6);
}

TEST(Kernel, HermitianSymmetry) {
  ArcParams p(2.5);
  PolySystem sys(p, 30);
  for (int n : {1, 10, 30})
    for (double t1 : {2.6, 3.0, 3.5})
      for (double t2 : {2.7, 3.3, 3.7})
        EXPECT_LT(std::abs(cd_kernel(sys, n, t1, t2) - std::conj(cd_kernel(sys, n, t2, t1))), 1e-12);
}

TEST(ConvergenceCurve, AnalyticFunctionDecaysSpectrally) {
  for (double a : test_alphas) {
    ArcParams p(a);
    PolySystem sys(p, 128);
    const int d[] = {8, 128};
    const auto c = convergence_curve(sys, analytic_exp(), 2.0, d);
    EXPECT_LT(c[1].error_pow_p / c[0].error_pow_p, 1e-6);
  }
}

TEST(ConvergenceCurve, JumpFunctionDecreases) {
  ArcParams p(pi / 2);
  PolySystem sys(p, 256);
  const auto d = doubling(4, 256);
  const auto c = convergence_curve(sys, jump_sign(), 3.0, d);
  std::vector<double> e;
  for (const auto& pt : c) {
    e.push_back(pt.error_pow_p);
    EXPECT_NEAR(pt.error, std::pow(pt.error_pow_p, 1.0 / 3.0), 1e-14);
    EXPECT_LT(pt.refinement_delta, 1e-3);
  }
  EXPECT_LE(non_monotone_steps(e), 1);
  EXPECT_LT(e.back(), 0.1 * e.front());
}

TEST(ConvergenceCurve, SingularFunctionInLpDecreases) {
  ArcParams p(pi / 2);
  PolySystem sys(p, 256);
  const TestFunction f = singular_power(0.2);
  // membership in L^3: the norm is stable under refinement
  const QuadratureRule q = make_expansion_rule(p, f.marks, 64);
  const double n1 = lp_norm_weighted(q, f.eval, 3.0, MeasureSpec::base(p));
  const double n2 = lp_norm_weighted(refine(q), f.eval, 3.0, MeasureSpec::base(p));
  EXPECT_LT(std::abs(n1 - n2) / n2, 1e-6);
  const int d[] = {4, 16, 64, 256};
  const auto c = convergence_curve(sys, f, 3.0, d);
  EXPECT_LT(c.back().error_pow_p, c.front().error_pow_p);
}

TEST(ConvergenceCurve, RejectsSmallExponent) {
  ArcParams p(pi / 2);
  PolySystem sys(p, 8);
  const int d[] = {4};
  EXPECT_THROW(convergence_curve(sys, jump_sign(), 1.0, d), DomainError);
}

TEST(OperatorNorm, ContractionAtPTwo) {
  ArcParams p(pi / 3);
  PolySystem sys(p, 64);
  const auto fam = mixed_family(p, 10, 7);
  const auto d = doubling(4, 64);
  const auto s = operator_norm_sequence(sys, 2.0, d, fam);
  for (double r : s.max_ratio) EXPECT_LE(r, 1.0 + 1e-6);
}

TEST(OperatorNorm, StableAtPFour) {
  ArcParams p(pi / 2);
  PolySystem sys(p, 64);
  const auto fam = mixed_family(p, 12, 7);
  const auto d = doubling(4, 64);
  const auto s = operator_norm_sequence(sys, 4.0, d, fam);
  EXPECT_LT(std::abs(s.slope), 0.05);
  EXPECT_EQ(s.ratios.size(), fam.size());
  EXPECT_DOUBLE_EQ(operator_norm_probe(sys, 4.0, 16, fam), s.max_ratio[2]);
}

TEST(OperatorNorm, ZeroNormMemberThrows) {
  ArcParams p(pi / 2);
  PolySystem sys(p, 8);
  const std::vector<TestFunction> fam{analytic_exp(), zero_function()};
  EXPECT_THROW(operator_norm_probe(sys, 2.0, 4, fam), DomainError);
  EXPECT_THROW(operator_norm_probe(sys, 2.0, 4, std::vector<TestFunction>{}), DomainError);
}

TEST(SplitDiagnostics, BothPiecesBounded) {
  ArcParams p(pi / 2);
  PolySystem sys(p, 32);
  const double delta = default_split_delta(p);
  EXPECT_NEAR(delta, 0.3 * (pi - p.alpha()), 1e-15);
  for (const auto& f : {jump_sign(), analytic_exp()}) {
    for (int n : {8, 32}) {
      const auto s = split_diagnostics(sys, f, 2.0, n, delta);
      EXPECT_TRUE(std::isfinite(s.near_ratio));
      EXPECT_TRUE(std::isfinite(s.far_ratio));
      EXPECT_LT(s.near_ratio, 3.0);
      EXPECT_LT(s.far_ratio, 3.0);
    }
  }
  EXPECT_THROW(split_diagnostics(sys, jump_sign(), 2.0, 8, 0.0), DomainError);
}
