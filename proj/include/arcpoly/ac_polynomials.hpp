#pragma once

#include <arcpoly/arc_geometry.hpp>
#include <arcpoly/errors.hpp>

#include <Eigen/Core>

#include <cmath>
#include <complex>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace arcpoly {

/// Closed-form orthonormal polynomials psi_n for the Akhiezer-Chebyshev weight
/// of one arc, under <f, g> = (1/2pi) int f conj(g) w_alpha d theta.
///
/// Every evaluator checks n against max_degree. Leading coefficients
/// 1 / (K cos^n(alpha/2)) are tabulated up to max_degree + 1 so that
/// Christoffel-Darboux closed forms of order max_degree are available.
class PolySystem {
public:
  PolySystem(const ArcParams& params, int max_degree) : params_(params), max_degree_(max_degree) {
    if (max_degree < 0) throw DomainError("PolySystem: max_degree must be nonnegative");
    const cplx b = params.beta();
    const cplx d = 1.0 + b * b;
    c_prev_ = cplx(0.0, 1.0) * b / d;
    c_curr_ = 1.0 / d;
    leading_.resize(max_degree + 2);
    leading_[0] = std::sqrt(2.0);
    for (int n = 1; n <= max_degree + 1; ++n)
      leading_[n] = 1.0 / (params.big_k() * std::pow(params.gamma(), n));
  }

  const ArcParams& params() const noexcept { return params_; }
  int max_degree() const noexcept { return max_degree_; }
  std::span<const double> leading_coeffs() const noexcept { return leading_; }
  double leading_coeff(int n) const {
    check(n, max_degree_ + 1);
    return leading_[n];
  }

  /// i beta / (1 + beta^2), multiplying the order n-1 Chebyshev-type term.
  cplx coeff_prev() const noexcept { return c_prev_; }
  /// 1 / (1 + beta^2), multiplying the order n term.
  cplx coeff_curr() const noexcept { return c_curr_; }

  void check(int n, int limit) const {
    if (n < 0 || n > limit)
      throw DomainError("PolySystem: degree " + std::to_string(n) + " outside [0, " +
                        std::to_string(limit) + "]");
  }
  void check(int n) const { check(n, max_degree_); }

private:
  ArcParams params_;
  int max_degree_;
  cplx c_prev_;
  cplx c_curr_;
  std::vector<double> leading_;
};

namespace detail {

inline cplx ipow(cplx z, int n) {
  cplx result = 1.0;
  while (n > 0) {
    if (n & 1) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

/// psi_n(e^{i theta}) given both theta and lambda.
inline cplx psi_angles(const PolySystem& sys, int n, double theta, double lambda) {
  if (n == 0) return std::sqrt(2.0);
  const double k2 = 2.0 * sys.params().big_k();
  const cplx inner = sys.coeff_prev() * std::polar(1.0, -0.5 * theta) * std::cos((n - 1) * lambda) +
                     sys.coeff_curr() * std::cos(n * lambda);
  return k2 * std::polar(1.0, 0.5 * n * theta) * inner;
}

inline cplx psi_star_angles(const PolySystem& sys, int n, double theta, double lambda) {
  if (n == 0) return std::sqrt(2.0);
  const double k2 = 2.0 * sys.params().big_k();
  const cplx inner = sys.coeff_prev() * std::polar(1.0, 0.5 * theta) * std::cos((n - 1) * lambda) +
                     sys.coeff_curr() * std::cos(n * lambda);
  return k2 * std::polar(1.0, 0.5 * n * theta) * inner;
}

} // namespace detail

/// psi_0 = sqrt(2): the weight has total mass 1/2 under the (1/2pi) normalization.
inline cplx psi_zero(const PolySystem&) { return std::sqrt(2.0); }

/// A complex number held as log-modulus and phase, for values beyond double range.
struct LogPolar {
  double log_abs;
  double phase;
  cplx value() const {
    if (log_abs > 709.0) throw OverflowError("LogPolar: modulus exceeds double range");
    return std::polar(std::exp(log_abs), phase);
  }
};

/// psi_n(z) off the arc, in log-modulus/phase form; never overflows.
inline LogPolar psi_offarc_log(const PolySystem& sys, int n, cplx z) {
  sys.check(n);
  if (n == 0) return {0.5 * std::log(2.0), 0.0};
  const ArcParams& p = sys.params();
  const cplx outer = map_chi(p, z, ChiBranch::outer);
  const cplx inner = map_chi(p, z, ChiBranch::inner);
  const cplx r = inner / outer;
  const cplx rn1 = detail::ipow(r, n - 1);
  const cplx bracket = sys.coeff_prev() * (1.0 + rn1) + sys.coeff_curr() * outer * (1.0 + rn1 * r);
  const double log_abs = std::log(p.big_k()) + (n - 1) * std::log(std::abs(outer)) +
                         std::log(std::abs(bracket));
  const double phase = std::remainder((n - 1) * std::arg(outer) + std::arg(bracket), two_pi);
  return {log_abs, phase};
}

/// psi_n(z) = K [ i beta/(1+beta^2) (chi1^{n-1} + chi2^{n-1})
///              + 1/(1+beta^2) (chi1^n + chi2^n) ] for z off the closed arc.
/// Switches to log accumulation once n log|chi_outer| > 600 and throws
/// OverflowError if the value itself is not representable.
inline cplx psi_offarc(const PolySystem& sys, int n, cplx z) {
  sys.check(n);
  if (n == 0) return psi_zero(sys);
  const ArcParams& p = sys.params();
  const cplx outer = map_chi(p, z, ChiBranch::outer);
  if (n * std::log(std::abs(outer)) > 600.0) return psi_offarc_log(sys, n, z).value();
  const cplx inner = map_chi(p, z, ChiBranch::inner);
  const cplx o1 = detail::ipow(outer, n - 1), i1 = detail::ipow(inner, n - 1);
  return p.big_k() * (sys.coeff_prev() * (o1 + i1) + sys.coeff_curr() * (o1 * outer + i1 * inner));
}

/// psi_n(e^{i theta}) = 2K e^{i n theta/2} [ i beta/(1+beta^2) e^{-i theta/2} cos((n-1) lambda)
///                                        + 1/(1+beta^2) cos(n lambda) ].
inline cplx psi_onarc(const PolySystem& sys, int n, double theta) {
  sys.check(n);
  return detail::psi_angles(sys, n, theta, lambda_of_theta(sys.params(), theta));
}

inline cplx psi_onarc(const PolySystem& sys, int n, const ArcNode& node) {
  sys.check(n);
  return detail::psi_angles(sys, n, node.theta, node.lambda);
}

/// Reversed polynomial psi_n^*(z) = z^n conj(psi_n(1 / conj z)) on the arc.
inline cplx psi_star_onarc(const PolySystem& sys, int n, double theta) {
  sys.check(n);
  return detail::psi_star_angles(sys, n, theta, lambda_of_theta(sys.params(), theta));
}

inline cplx psi_star_onarc(const PolySystem& sys, int n, const ArcNode& node) {
  sys.check(n);
  return detail::psi_star_angles(sys, n, node.theta, node.lambda);
}

enum class Endpoint { plus, minus };

/// Upsilon = psi_n^*(e^{i alpha}) / psi_n(e^{i alpha})
///         = (i beta e^{i alpha/2} + 1) / (i beta e^{-i alpha/2} + 1),  for every n >= 1.
inline cplx upsilon_ratio(const PolySystem& sys) {
  const ArcParams& p = sys.params();
  const cplx ib = cplx(0.0, 1.0) * p.beta();
  return (ib * std::polar(1.0, 0.5 * p.alpha()) + 1.0) /
         (ib * std::polar(1.0, -0.5 * p.alpha()) + 1.0);
}

/// psi_n^* / psi_n at the chosen endpoint. At e^{-i alpha} (lambda = pi) it is
/// the conjugate of Upsilon, again independent of n.
inline cplx endpoint_ratio(const PolySystem& sys, Endpoint e) {
  const cplx u = upsilon_ratio(sys);
  return e == Endpoint::plus ? u : std::conj(u);
}

/// Para-orthogonal polynomial Lambda_n^{(+-alpha)} = psi_n^* - (psi_n^*/psi_n)(e^{+-i alpha}) psi_n,
/// vanishing at the chosen endpoint.
inline cplx para_orthogonal(const PolySystem& sys, int n, const ArcNode& node, Endpoint e) {
  if (n < 1) throw DomainError("para_orthogonal: n must be positive");
  sys.check(n, sys.max_degree() + 1);
  return detail::psi_star_angles(sys, n, node.theta, node.lambda) -
         endpoint_ratio(sys, e) * detail::psi_angles(sys, n, node.theta, node.lambda);
}

inline cplx para_orthogonal(const PolySystem& sys, int n, double theta, Endpoint e) {
  const ArcParams& p = sys.params();
  return para_orthogonal(sys, n, ArcNode{0.0, theta, lambda_of_theta(p, theta)}, e);
}

/// |1 - e^{-i theta} e^{i tau}| below which cd_kernel sums directly.
inline constexpr double cd_diagonal_tolerance = 1e-6;

/// K_n(theta, tau) = sum_{j=0}^n conj(psi_j(e^{i theta})) psi_j(e^{i tau}) by direct summation.
inline cplx cd_kernel_direct(const PolySystem& sys, int n, const ArcNode& th, const ArcNode& ta) {
  sys.check(n);
  cplx acc = 0.0;
  for (int j = 0; j <= n; ++j)
    acc += std::conj(detail::psi_angles(sys, j, th.theta, th.lambda)) *
           detail::psi_angles(sys, j, ta.theta, ta.lambda);
  return acc;
}

/// K_n(theta, tau) through the Christoffel-Darboux closed form
/// [conj(psi*_{n+1}(theta)) psi*_{n+1}(tau) - conj(psi_{n+1}(theta)) psi_{n+1}(tau)]
/// / (1 - e^{-i theta} e^{i tau}), with direct summation near the diagonal.
inline cplx cd_kernel(const PolySystem& sys, int n, const ArcNode& th, const ArcNode& ta) {
  sys.check(n);
  const cplx denom = 1.0 - std::polar(1.0, ta.theta - th.theta);
  if (std::abs(denom) < cd_diagonal_tolerance) return cd_kernel_direct(sys, n, th, ta);
  const int m = n + 1;
  const cplx ps_t = detail::psi_star_angles(sys, m, th.theta, th.lambda);
  const cplx ps_u = detail::psi_star_angles(sys, m, ta.theta, ta.lambda);
  const cplx p_t = detail::psi_angles(sys, m, th.theta, th.lambda);
  const cplx p_u = detail::psi_angles(sys, m, ta.theta, ta.lambda);
  return (std::conj(ps_t) * ps_u - std::conj(p_t) * p_u) / denom;
}

inline cplx cd_kernel(const PolySystem& sys, int n, double theta, double tau) {
  const ArcParams& p = sys.params();
  return cd_kernel(sys, n, ArcNode{0.0, theta, lambda_of_theta(p, theta)},
                   ArcNode{0.0, tau, lambda_of_theta(p, tau)});
}

/// The two summands of
/// (1 - e^{-i theta} e^{i tau}) K_n(theta, tau)
///   = conj(psi*_{n+1}(theta)) Lambda_{n+1}(tau) + psi_{n+1}(tau) Upsilon conj(Lambda_{n+1}(theta)),
/// with Lambda the para-orthogonal polynomial vanishing at e^{i alpha}.
inline std::pair<cplx, cplx> diagonal_decomposition(const PolySystem& sys, int n,
                                                    const ArcNode& th, const ArcNode& ta) {
  sys.check(n);
  const int m = n + 1;
  const cplx u = upsilon_ratio(sys);
  const cplx first = std::conj(detail::psi_star_angles(sys, m, th.theta, th.lambda)) *
                     para_orthogonal(sys, m, ta, Endpoint::plus);
  const cplx second = detail::psi_angles(sys, m, ta.theta, ta.lambda) * u *
                      std::conj(para_orthogonal(sys, m, th, Endpoint::plus));
  return {first, second};
}

inline std::pair<cplx, cplx> diagonal_decomposition(const PolySystem& sys, int n, double theta,
                                                    double tau) {
  const ArcParams& p = sys.params();
  return diagonal_decomposition(sys, n, ArcNode{0.0, theta, lambda_of_theta(p, theta)},
                                ArcNode{0.0, tau, lambda_of_theta(p, tau)});
}

/// Monomial coefficients (ascending powers) of psi_n, from
/// s_{j+1} = s_j (z+1)/cos(alpha/2) - z s_{j-1}, s_0 = 2, s_1 = (z+1)/cos(alpha/2),
/// where s_j = chi1^j + chi2^j. Coefficients grow like (2/gamma)^n, so Horner
/// evaluation on the arc is only accurate for small n.
inline std::vector<cplx> psi_coefficients(const PolySystem& sys, int n) {
  sys.check(n);
  if (n == 0) return {psi_zero(sys)};
  const double ig = 1.0 / sys.params().gamma();
  std::vector<std::vector<double>> s{{2.0}, {ig, ig}};
  for (int j = 1; j < n; ++j) {
    const auto& a = s[j];
    const auto& b = s[j - 1];
    std::vector<double> next(j + 2, 0.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
      next[k] += a[k] * ig;
      next[k + 1] += a[k] * ig;
    }
    for (std::size_t k = 0; k < b.size(); ++k) next[k + 1] -= b[k];
    s.push_back(std::move(next));
  }
  std::vector<cplx> c(n + 1, 0.0);
  const double big_k = sys.params().big_k();
  for (int k = 0; k <= n - 1; ++k) c[k] += big_k * sys.coeff_prev() * s[n - 1][k];
  for (int k = 0; k <= n; ++k) c[k] += big_k * sys.coeff_curr() * s[n][k];
  return c;
}

inline cplx horner(std::span<const cplx> coeffs, cplx z) {
  cplx acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

/// Dense values psi_n(e^{i theta_j}): row n - n_min, column j.
inline Eigen::MatrixXcd psi_matrix(const PolySystem& sys, std::span<const double> thetas,
                                   int n_min, int n_max) {
  if (n_min < 0 || n_max < n_min) throw DomainError("psi_matrix: bad degree range");
  sys.check(n_max);
  const ArcParams& p = sys.params();
  Eigen::MatrixXcd m(n_max - n_min + 1, static_cast<Eigen::Index>(thetas.size()));
  for (std::size_t j = 0; j < thetas.size(); ++j) {
    const double lam = lambda_of_theta(p, thetas[j]);
    for (int n = n_min; n <= n_max; ++n)
      m(n - n_min, static_cast<Eigen::Index>(j)) = detail::psi_angles(sys, n, thetas[j], lam);
  }
  return m;
}

/// psi_0..psi_{n_max} at the nodes of a rule (row = degree).
inline Eigen::MatrixXcd psi_matrix(const PolySystem& sys, const QuadratureRule& rule, int n_max) {
  sys.check(n_max);
  Eigen::MatrixXcd m(n_max + 1, static_cast<Eigen::Index>(rule.size()));
  for (std::size_t j = 0; j < rule.size(); ++j)
    for (int n = 0; n <= n_max; ++n)
      m(n, static_cast<Eigen::Index>(j)) = detail::psi_angles(sys, n, rule.theta[j], rule.lambda[j]);
  return m;
}

/// CSV with columns n, theta, re, im (one row per matrix entry).
inline void write_psi_csv(std::ostream& os, std::span<const double> thetas, int n_min,
                          const Eigen::MatrixXcd& values) {
  os << "n,theta,re,im\n";
  char buf[128];
  for (Eigen::Index r = 0; r < values.rows(); ++r)
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", static_cast<int>(n_min + r),
                    thetas[static_cast<std::size_t>(c)], values(r, c).real(), values(r, c).imag());
      os << buf;
    }
}

} // namespace arcpoly
