#pragma once

#include <arcpoly/errors.hpp>
#include <arcpoly/quadrature.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace arcpoly {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Smallest distance of alpha from 0 and from pi accepted by ArcParams.
inline constexpr double alpha_margin = 1e-6;
/// Half-width (radians) of the excluded band around each arc endpoint.
inline constexpr double endpoint_band = 1e-10;

/// Constants determined by the arc opening alpha.
///
/// The arc is {e^{i theta} : alpha < theta < 2 pi - alpha}, symmetric about
/// theta = pi. beta = i tan((pi - alpha) / 4) parametrizes the conformal map
/// from the unit disk onto the complement of the arc; gamma = cos(alpha / 2) is
/// the transfinite diameter and K = sqrt(2 sin(alpha/2) / (1 + sin(alpha/2)))
/// the normalization of the closed-form orthonormal polynomials.
class ArcParams {
public:
  explicit ArcParams(double alpha) : alpha_(alpha) {
    if (!(alpha > alpha_margin && alpha < pi - alpha_margin))
      throw DomainError("ArcParams: alpha must lie in (1e-6, pi - 1e-6), got " +
                        fmt_num(alpha));
    beta_im_ = std::tan((pi - alpha) / 4.0);
    sin_half_ = std::sin(alpha / 2.0);
    gamma_ = std::cos(alpha / 2.0);
    tan_half_ = std::tan(alpha / 2.0);
    big_k_ = std::sqrt(2.0 * sin_half_ / (1.0 + sin_half_));
  }

  double alpha() const noexcept { return alpha_; }
  cplx beta() const noexcept { return {0.0, beta_im_}; }
  double beta_im() const noexcept { return beta_im_; }
  double gamma() const noexcept { return gamma_; }
  double big_k() const noexcept { return big_k_; }
  double sin_half() const noexcept { return sin_half_; }
  double tan_half() const noexcept { return tan_half_; }

  /// e^{i alpha}, the endpoint approached as theta -> alpha+.
  cplx endpoint_plus() const { return std::polar(1.0, alpha_); }
  /// e^{-i alpha} = e^{i (2 pi - alpha)}.
  cplx endpoint_minus() const { return std::polar(1.0, -alpha_); }

  double theta_min() const noexcept { return alpha_; }
  double theta_max() const noexcept { return two_pi - alpha_; }

  bool in_closed_arc(double theta) const noexcept {
    return theta >= alpha_ && theta <= two_pi - alpha_;
  }
  /// Strictly inside the arc and outside the endpoint exclusion band.
  bool in_guarded_arc(double theta) const noexcept {
    return theta > alpha_ + endpoint_band && theta < two_pi - alpha_ - endpoint_band;
  }

private:
  double alpha_;
  double beta_im_;
  double sin_half_;
  double gamma_;
  double tan_half_;
  double big_k_;
};

/// cos^2(alpha/2) - cos^2(theta/2), in product form to keep relative
/// accuracy near the endpoints.
inline double endpoint_radicand(const ArcParams& p, double theta) {
  return std::sin(0.5 * (theta - p.alpha())) * std::sin(0.5 * (theta + p.alpha()));
}

/// The Akhiezer-Chebyshev density
/// sin(alpha/2) / (2 sin(theta/2) sqrt(cos^2(alpha/2) - cos^2(theta/2))).
inline double weight_w_alpha(const ArcParams& p, double theta) {
  if (!p.in_guarded_arc(theta))
    throw DomainError("weight_w_alpha: theta outside the guarded open arc; "
                      "integrate in the omega variable instead");
  const double rad = endpoint_radicand(p, theta);
  if (!(rad > 0.0))
    throw DomainError("weight_w_alpha: radicand underflow near an endpoint");
  return p.sin_half() / (2.0 * std::sin(0.5 * theta) * std::sqrt(rad));
}

/// h(v) = (v - beta)(beta v - 1) / ((v + beta)(beta v + 1)); maps the unit
/// disk onto the complement of the arc and the unit circle onto the arc (twice).
inline cplx map_h(const ArcParams& p, cplx v) {
  const cplx b = p.beta();
  const cplx d1 = v + b;
  const cplx d2 = b * v + 1.0;
  const double scale = 1.0 + std::abs(v);
  if (std::abs(d1) <= 1e-14 * scale || std::abs(d2) <= 1e-14 * scale)
    throw PoleError("map_h: v is a pole (-beta or -1/beta)");
  return (v - b) * (b * v - 1.0) / (d1 * d2);
}

enum class ChiBranch { outer, inner };

/// Branches (z + 1 +- sqrt(V(z))) / (2 cos(alpha/2)) with
/// V(z) = z^2 - 2 z cos(alpha) + 1. The outer branch maps the complement of
/// the arc onto |v| > 1 and the inner branch onto |v| < 1.
///
/// The root with the larger |z + 1 +- sqrt V| is formed directly and the other
/// one from chi_outer * chi_inner = z, which avoids cancellation near z = 0.
inline cplx map_chi(const ArcParams& p, cplx z, ChiBranch branch) {
  const double g = p.gamma();
  const cplx v = z * z - 2.0 * z * std::cos(p.alpha()) + 1.0;
  const double scale = 1.0 + std::norm(z);
  if (std::abs(v) <= 1e-13 * scale) return (z + 1.0) / (2.0 * g); // endpoint: roots coincide

  const cplx s = std::sqrt(v);
  const cplx zp1 = z + 1.0;
  const cplx big = (std::real(std::conj(zp1) * s) >= 0.0) ? (zp1 + s) : (zp1 - s);
  const cplx outer = big / (2.0 * g);
  const cplx inner = z / outer;

  const double tol = 1e-12;
  if (std::abs(std::abs(outer) - 1.0) < tol && std::abs(std::abs(inner) - 1.0) < tol)
    throw BranchAmbiguityError("map_chi: z lies on the arc to working precision; "
                               "use the on-arc (lambda) representation");
  return branch == ChiBranch::outer ? outer : inner;
}

/// lambda in [0, pi] with cos(lambda) = cos(theta/2) / cos(alpha/2).
inline double lambda_of_theta(const ArcParams& p, double theta) {
  if (!p.in_closed_arc(theta)) throw DomainError("lambda_of_theta: theta outside the arc");
  double c = std::cos(0.5 * theta) / p.gamma();
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

/// The same angle expressed through the conformal variable:
/// tan(lambda) = sin(alpha/2) tan(omega) on the upper sheet omega in [0, pi].
/// Exact at the endpoints, where lambda_of_theta suffers from the flat arccos.
inline double lambda_of_omega(const ArcParams& p, double omega) {
  return std::atan2(p.sin_half() * std::sin(omega), std::cos(omega));
}

/// theta in [alpha, 2 pi - alpha] with h(e^{i omega}) = e^{i theta}.
inline double theta_of_omega(const ArcParams& p, double omega) {
  return 2.0 * std::atan2(p.tan_half(), std::cos(omega));
}

/// d theta / d omega = 1 / w_alpha(theta(omega)); vanishes at omega = 0, pi.
inline double dtheta_domega(const ArcParams& p, double omega) {
  const double t = p.tan_half();
  const double c = std::cos(omega);
  return 2.0 * t * std::sin(omega) / (c * c + t * t);
}

enum class Sheet { upper, lower };

/// Solves h(e^{i omega}) = e^{i theta}; upper sheet in (0, pi), lower in (pi, 2 pi).
inline double omega_of_theta(const ArcParams& p, double theta, Sheet sheet = Sheet::upper) {
  if (!p.in_guarded_arc(theta)) throw DomainError("omega_of_theta: theta outside the guarded arc");
  const double r = p.tan_half() / std::tan(0.5 * theta);
  const double im = std::sqrt(std::max(0.0, 1.0 - r * r));
  const double w = std::atan2(im, r);
  return sheet == Sheet::upper ? w : two_pi - w;
}

/// A point of the arc carried in both variables.
struct ArcNode {
  double omega;
  double theta;
  double lambda;
};

inline ArcNode arc_node(const ArcParams& p, double omega) {
  return {omega, theta_of_omega(p, omega), lambda_of_omega(p, omega)};
}

/// Quadrature realizing  int f(theta) w_alpha(theta) d theta  as
/// sum_j weight_j f(theta_j), built in the omega variable where the endpoint
/// singularity of w_alpha is absorbed by the Jacobian.
struct QuadratureRule {
  explicit QuadratureRule(const ArcParams& p) : params(p) {}

  ArcParams params;
  std::vector<double> omega;
  std::vector<double> theta;
  std::vector<double> lambda;
  std::vector<double> weight;

  // recipe, kept so the rule can be refined
  bool graded = false;
  int nominal_nodes = 0;
  std::vector<double> marked_thetas;
  GradedRuleOptions options{};

  std::size_t size() const noexcept { return omega.size(); }
  ArcNode node(std::size_t j) const { return {omega[j], theta[j], lambda[j]}; }

  /// sum_j weight_j f(theta_j), i.e. the integral of f against w_alpha d theta.
  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R acc{};
    for (std::size_t j = 0; j < size(); ++j) acc += weight[j] * f(theta[j]);
    return acc;
  }
};

namespace detail {
inline QuadratureRule rule_from_omega(const ArcParams& p, const Rule1D& r) {
  QuadratureRule q(p);
  q.omega = r.nodes;
  q.weight = r.weights;
  q.theta.resize(r.size());
  q.lambda.resize(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    q.theta[j] = theta_of_omega(p, r.nodes[j]);
    q.lambda[j] = lambda_of_omega(p, r.nodes[j]);
  }
  return q;
}
} // namespace detail

/// Gauss-Legendre in omega on (0, pi) with n_nodes points.
inline QuadratureRule make_quadrature(const ArcParams& p, int n_nodes = 512) {
  if (n_nodes < 2) throw DomainError("make_quadrature: need at least 2 nodes");
  QuadratureRule q = detail::rule_from_omega(p, gauss_legendre(n_nodes, 0.0, pi));
  q.nominal_nodes = n_nodes;
  return q;
}

/// Composite rule in omega, cut and geometrically graded at the omega-images of
/// `marked_thetas` (jumps, integrable singularities, support edges).
inline QuadratureRule make_graded_quadrature(const ArcParams& p,
                                             std::span<const double> marked_thetas,
                                             const GradedRuleOptions& opts = {}) {
  std::vector<double> marks;
  for (double t : marked_thetas) {
    if (!p.in_guarded_arc(t)) throw DomainError("make_graded_quadrature: mark outside the arc");
    marks.push_back(omega_of_theta(p, t));
  }
  QuadratureRule q = detail::rule_from_omega(p, graded_rule(0.0, pi, marks, opts));
  q.graded = true;
  q.nominal_nodes = static_cast<int>(q.size());
  q.marked_thetas.assign(marked_thetas.begin(), marked_thetas.end());
  q.options = opts;
  return q;
}

/// Gauss-Legendre with n_nodes points when there are no marks; otherwise a
/// graded rule with about n_nodes points on the smooth stretches plus the
/// geometric refinement at each mark.
inline QuadratureRule make_adapted_quadrature(const ArcParams& p, std::span<const double> marked_thetas,
                                              int n_nodes) {
  if (marked_thetas.empty()) return make_quadrature(p, n_nodes);
  GradedRuleOptions o;
  const int stretches = static_cast<int>(marked_thetas.size()) + 1;
  o.base_panels = std::max(2, (n_nodes + o.nodes_per_panel * stretches - 1) / (o.nodes_per_panel * stretches));
  return make_graded_quadrature(p, marked_thetas, o);
}

/// Same recipe with twice the nodes (per panel, for graded rules).
inline QuadratureRule refine(const QuadratureRule& q) {
  if (!q.graded) return make_quadrature(q.params, 2 * q.nominal_nodes);
  GradedRuleOptions o = q.options;
  o.nodes_per_panel *= 2;
  return make_graded_quadrature(q.params, q.marked_thetas, o);
}

} // namespace arcpoly
