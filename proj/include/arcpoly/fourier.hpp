#pragma once

#include <arcpoly/ac_polynomials.hpp>
#include <arcpoly/catalog.hpp>
#include <arcpoly/grid_function.hpp>
#include <arcpoly/measure.hpp>
#include <arcpoly/stats.hpp>
#include <arcpoly/transforms.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace arcpoly {

/// Coefficients c_j = <f, psi_j> = (1/2pi) int f conj(psi_j) w_alpha d theta, j <= degree.
struct FourierExpansion {
  PolySystem sys;
  std::vector<cplx> coeffs;
  int degree = 0;
  QuadratureRule rule;
  /// max_j |c_j - c_j'| with c_j' computed on the refined rule (NaN if not checked)
  double refinement_delta = std::numeric_limits<double>::quiet_NaN();
  bool converged = true;
  std::string warning;
};

/// Coefficient change under refinement above which an expansion is flagged.
inline constexpr double coefficient_tolerance = 1e-8;

namespace detail {

inline std::vector<cplx> coefficients(const PolySystem& sys, std::span<const cplx> fv, int degree,
                                      const QuadratureRule& rule) {
  std::vector<cplx> c(degree + 1, 0.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double mu = rule.weight[i] / two_pi;
    for (int j = 0; j <= degree; ++j)
      c[j] += mu * fv[i] * std::conj(psi_angles(sys, j, rule.theta[i], rule.lambda[i]));
  }
  return c;
}

inline std::vector<cplx> sample(const ArcFn& f, const QuadratureRule& rule) {
  std::vector<cplx> v(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) v[i] = f(rule.theta[i]);
  return v;
}

} // namespace detail

inline FourierExpansion expand(const PolySystem& sys, const ArcFn& f, int degree,
                               const QuadratureRule& rule, bool check_refinement = true) {
  sys.check(degree);
  FourierExpansion e{sys, {}, degree, rule};
  e.coeffs = detail::coefficients(sys, detail::sample(f, rule), degree, rule);
  if (check_refinement) {
    const QuadratureRule fine = refine(rule);
    const auto c2 = detail::coefficients(sys, detail::sample(f, fine), degree, fine);
    double d = 0.0;
    for (int j = 0; j <= degree; ++j) d = std::max(d, std::abs(c2[j] - e.coeffs[j]));
    e.refinement_delta = d;
    e.converged = d < coefficient_tolerance;
    if (!e.converged)
      e.warning = "quadrature insufficient: coefficients moved by " + fmt_num(d) +
                  " under refinement";
  }
  return e;
}

inline FourierExpansion expand(const PolySystem& sys, const GridFunction& f, int degree,
                               const QuadratureRule& rule, bool check_refinement = true) {
  return expand(sys, f.as_theta_function(sys.params()), degree, rule, check_refinement);
}

/// Zeroes coefficients below `floor` (for exactness comparisons).
inline std::vector<cplx> clamp_noise(std::vector<cplx> c, double floor = 1e-13) {
  for (auto& x : c)
    if (std::abs(x) < floor) x = 0.0;
  return c;
}

/// S_n(f, e^{i theta}) = sum_{j <= n} c_j psi_j(e^{i theta}).
inline cplx partial_sum(const FourierExpansion& e, int n, const ArcNode& node) {
  if (n < 0 || n > e.degree) throw DomainError("partial_sum: n exceeds the expansion degree");
  cplx acc = 0.0;
  for (int j = 0; j <= n; ++j) acc += e.coeffs[j] * detail::psi_angles(e.sys, j, node.theta, node.lambda);
  return acc;
}

inline cplx partial_sum(const FourierExpansion& e, int n, double theta) {
  return partial_sum(e, n, ArcNode{0.0, theta, lambda_of_theta(e.sys.params(), theta)});
}

/// S_n f(e^{i tau}) = (1/2pi) int f(e^{i theta}) conj(K_n(tau, theta)) w_alpha d theta,
/// with the kernel in Christoffel-Darboux form.
inline cplx partial_sum_kernel(const PolySystem& sys, const ArcFn& f, int n, const ArcNode& tau,
                               const QuadratureRule& rule) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    acc += rule.weight[i] * f(rule.theta[i]) * std::conj(cd_kernel(sys, n, tau, rule.node(i)));
  return acc / two_pi;
}

/// Rule adapted to the marks of f with at least max(512, 8 max_degree) nodes.
inline QuadratureRule make_expansion_rule(const ArcParams& p, std::span<const double> marks,
                                          int max_degree) {
  return make_adapted_quadrature(p, marks, std::max(512, 8 * max_degree));
}

struct ConvergencePoint {
  int n;
  double error_pow_p;      ///< E_n = int |f - S_n f|^p w_alpha d theta
  double error;            ///< E_n^{1/p}
  double refinement_delta; ///< |E_n - E_n(refined rule)| / E_n
};

namespace detail {

// E_n for every requested n, streaming over degrees
inline std::vector<double> error_sequence(const PolySystem& sys, std::span<const cplx> fv, double p,
                                          std::span<const int> degrees, const QuadratureRule& rule,
                                          const MeasureSpec* measure = nullptr) {
  const int n_max = *std::max_element(degrees.begin(), degrees.end());
  std::vector<cplx> s(rule.size(), 0.0), psi(rule.size());
  std::vector<double> out(degrees.size(), 0.0);
  for (int j = 0; j <= n_max; ++j) {
    cplx c = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      psi[i] = psi_angles(sys, j, rule.theta[i], rule.lambda[i]);
      c += rule.weight[i] / two_pi * fv[i] * std::conj(psi[i]);
    }
    for (std::size_t i = 0; i < rule.size(); ++i) s[i] += c * psi[i];
    for (std::size_t d = 0; d < degrees.size(); ++d) {
      if (degrees[d] != j) continue;
      double acc = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        const double k = measure ? measure->k(rule.theta[i]) : 1.0;
        acc += rule.weight[i] * k * std::pow(std::abs(fv[i] - s[i]), p);
      }
      out[d] = acc;
    }
  }
  return out;
}

} // namespace detail

/// E_n = ||f - S_n f||^p_{p, w_alpha} for each n in `degrees`, with the change
/// under one refinement of `rule` reported per point.
inline std::vector<ConvergencePoint> convergence_curve(const PolySystem& sys, const ArcFn& f, double p,
                                                       std::span<const int> degrees,
                                                       const QuadratureRule& rule) {
  require_exponent(p);
  if (degrees.empty()) throw DomainError("convergence_curve: no degrees requested");
  for (int n : degrees) sys.check(n);
  const auto e1 = detail::error_sequence(sys, detail::sample(f, rule), p, degrees, rule);
  const QuadratureRule fine = refine(rule);
  const auto e2 = detail::error_sequence(sys, detail::sample(f, fine), p, degrees, fine);
  std::vector<ConvergencePoint> out;
  for (std::size_t d = 0; d < degrees.size(); ++d)
    out.push_back({degrees[d], e1[d], std::pow(e1[d], 1.0 / p),
                   e1[d] > 0.0 ? std::abs(e1[d] - e2[d]) / e1[d] : 0.0});
  return out;
}

inline std::vector<ConvergencePoint> convergence_curve(const PolySystem& sys, const TestFunction& f,
                                                       double p, std::span<const int> degrees) {
  const int n_max = *std::max_element(degrees.begin(), degrees.end());
  return convergence_curve(sys, f.eval, p, degrees, make_expansion_rule(sys.params(), f.marks, n_max));
}

/// ||S_n f||_{p,w} / ||f||_{p,w} for each n in `degrees` and each family member.
struct OperatorNormSequence {
  std::vector<int> degrees;
  std::vector<std::vector<double>> ratios; ///< [member][degree index]
  std::vector<double> max_ratio;           ///< max over the family, per degree
  double slope = 0.0;                      ///< log-log slope of max_ratio against n
};

inline OperatorNormSequence operator_norm_sequence(const PolySystem& sys, double p,
                                                   std::span<const int> degrees,
                                                   std::span<const TestFunction> family,
                                                   int min_nodes = 512) {
  require_exponent(p);
  if (family.empty()) throw DomainError("operator_norm_probe: empty family");
  if (degrees.empty()) throw DomainError("operator_norm_probe: no degrees requested");
  const int n_max = *std::max_element(degrees.begin(), degrees.end());
  sys.check(n_max);
  OperatorNormSequence out;
  out.degrees.assign(degrees.begin(), degrees.end());
  out.max_ratio.assign(degrees.size(), 0.0);
  const MeasureSpec base = MeasureSpec::base(sys.params());
  for (const auto& f : family) {
    const QuadratureRule rule =
        make_adapted_quadrature(sys.params(), f.marks, std::max(min_nodes, 8 * n_max));
    const auto fv = detail::sample(f.eval, rule);
    const double norm_f = lp_norm_weighted(rule, fv, p, base);
    if (norm_f == 0.0) throw DomainError("operator_norm_probe: family member '" + f.id + "' has zero norm");
    std::vector<cplx> s(rule.size(), 0.0), psi(rule.size());
    std::vector<double> row(degrees.size(), 0.0);
    for (int j = 0; j <= n_max; ++j) {
      cplx c = 0.0;
      for (std::size_t i = 0; i < rule.size(); ++i) {
        psi[i] = detail::psi_angles(sys, j, rule.theta[i], rule.lambda[i]);
        c += rule.weight[i] / two_pi * fv[i] * std::conj(psi[i]);
      }
      for (std::size_t i = 0; i < rule.size(); ++i) s[i] += c * psi[i];
      for (std::size_t d = 0; d < degrees.size(); ++d)
        if (degrees[d] == j) row[d] = lp_norm_weighted(rule, s, p, base) / norm_f;
    }
    for (std::size_t d = 0; d < degrees.size(); ++d) out.max_ratio[d] = std::max(out.max_ratio[d], row[d]);
    out.ratios.push_back(std::move(row));
  }
  if (degrees.size() >= 2) {
    std::vector<double> x(degrees.begin(), degrees.end());
    out.slope = loglog_slope(x, out.max_ratio);
  }
  return out;
}

/// max over the family of ||S_n f||_{p,w} / ||f||_{p,w}.
inline double operator_norm_probe(const PolySystem& sys, double p, int n,
                                  std::span<const TestFunction> family, int min_nodes = 512) {
  const int d[] = {n};
  return operator_norm_sequence(sys, p, d, family, min_nodes).max_ratio[0];
}

/// The two pieces of S_n f on (alpha, pi) obtained by splitting the theta
/// integral at pi + delta, each normalized by ||f||_{p,w}:
/// near = ||(1/2pi) int_alpha^{pi+delta} f K_n(theta, .) w d theta||_{L^p((alpha, pi), w)} / ||f||,
/// far  = the same over (pi + delta, 2pi - alpha).
struct SplitDiagnostics {
  double delta;
  double near_ratio;
  double far_ratio;
};

inline double default_split_delta(const ArcParams& p) { return 0.3 * (pi - p.alpha()); }

inline SplitDiagnostics split_diagnostics(const PolySystem& sys, const TestFunction& f, double p, int n,
                                          double delta, int n_nodes = 512) {
  require_exponent(p);
  const ArcParams& ap = sys.params();
  if (!(delta > 0.0 && delta < pi - ap.alpha()))
    throw DomainError("split_diagnostics: delta must lie in (0, pi - alpha)");
  sys.check(n);
  std::vector<double> marks = f.marks;
  marks.push_back(pi);
  marks.push_back(pi + delta);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  const QuadratureRule rule = make_adapted_quadrature(ap, marks, std::max(n_nodes, 8 * n));
  const auto fv = detail::sample(f.eval, rule);
  const MeasureSpec base = MeasureSpec::base(ap);
  const double norm_f = lp_norm_weighted(rule, fv, p, base);
  if (norm_f == 0.0) throw DomainError("split_diagnostics: f has zero norm");
  double near_acc = 0.0, far_acc = 0.0;
  for (std::size_t t = 0; t < rule.size(); ++t) {
    if (!(rule.theta[t] < pi)) continue;
    cplx near = 0.0, far = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const cplx term = rule.weight[i] * fv[i] * cd_kernel(sys, n, rule.node(i), rule.node(t));
      (rule.theta[i] < pi + delta ? near : far) += term;
    }
    near_acc += rule.weight[t] * std::pow(std::abs(near / two_pi), p);
    far_acc += rule.weight[t] * std::pow(std::abs(far / two_pi), p);
  }
  return {delta, std::pow(near_acc, 1.0 / p) / norm_f, std::pow(far_acc, 1.0 / p) / norm_f};
}

} // namespace arcpoly
