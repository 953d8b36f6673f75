#pragma once

#include <arcpoly/arc_geometry.hpp>
#include <arcpoly/errors.hpp>
#include <arcpoly/grid_function.hpp>
#include <arcpoly/measure.hpp>
#include <arcpoly/quadrature.hpp>

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace arcpoly {

using ArcFn = std::function<cplx(double)>;

// ---------------------------------------------------------------------------
// principal-value schemes

enum class PVMethod { singularity_subtraction, symmetric_exclusion, omega_substitution };

inline const char* to_string(PVMethod m) {
  switch (m) {
  case PVMethod::singularity_subtraction: return "singularity-subtraction";
  case PVMethod::symmetric_exclusion: return "symmetric-exclusion";
  case PVMethod::omega_substitution: return "omega-substitution";
  }
  return "?";
}

inline PVMethod pv_method_from_string(const std::string& s) {
  if (s == "singularity-subtraction" || s == "subtraction") return PVMethod::singularity_subtraction;
  if (s == "symmetric-exclusion" || s == "exclusion") return PVMethod::symmetric_exclusion;
  if (s == "omega-substitution" || s == "omega") return PVMethod::omega_substitution;
  throw DomainError("unknown PV scheme '" + s + "'");
}

/// How a principal value over the arc is realized.
///
/// singularity_subtraction: subtract g(tau) times the kernel, integrate the
///   removable remainder in omega, add the closed-form PV of the kernel.
/// symmetric_exclusion: integrate outside (tau - eps, tau + eps) for
///   eps, eps/2, ..., eps/16 and extrapolate in odd powers of eps; the check
///   repeats this starting from eps/2.
/// omega_substitution: write the integral in omega, where the kernel becomes
///   1/(cos t - cos s) up to a smooth factor, and use PV int_0^pi dt/(cos t - cos s) = 0.
struct PVScheme {
  PVMethod method = PVMethod::singularity_subtraction;
  double epsilon = 0.1;    ///< initial exclusion half-width (symmetric_exclusion)
  int nodes = 32;          ///< Gauss-Legendre points per panel
  double tolerance = 1e-8; ///< allowed change under refinement, relative to max(1, |value|)
  bool check = true;       ///< refine once and compare

  void validate() const {
    if (method == PVMethod::symmetric_exclusion && !(epsilon > 0.0))
      throw DomainError("PVScheme: epsilon must be positive");
    if (nodes < 4) throw DomainError("PVScheme: need at least 4 nodes per panel");
    if (!(tolerance > 0.0)) throw DomainError("PVScheme: tolerance must be positive");
  }
};

/// PV int_alpha^{2pi-alpha} d theta / (e^{i tau} - e^{i theta})
///   = e^{-i tau} [ (pi - alpha) - i log( sin((tau - alpha)/2) / sin((tau + alpha)/2) ) ].
inline cplx pv_kernel_integral(const ArcParams& p, double tau) {
  if (!p.in_guarded_arc(tau)) throw DomainError("pv_kernel_integral: tau outside the arc");
  const double a = p.alpha();
  const double l = std::log(std::sin(0.5 * (tau - a)) / std::sin(0.5 * (tau + a)));
  return std::polar(1.0, -tau) * cplx(pi - a, -l);
}

/// h(e^{it}) - h(e^{is}) written through the cotangent factorization
/// 8 (beta + 1/beta) e^{i(s+t)} / D * sin s / (cot((t+s)/2) - cot((t-s)/2)),
/// D = (e^{it}+beta)(e^{is}+beta)(e^{it}+1/beta)(e^{is}+1/beta).
inline cplx h_difference_factorized(const ArcParams& p, double t, double s) {
  const cplx b = p.beta(), ib = 1.0 / b;
  const cplx et = std::polar(1.0, t), es = std::polar(1.0, s);
  const cplx d = (et + b) * (es + b) * (et + ib) * (es + ib);
  const double cot_sum = 1.0 / std::tan(0.5 * (t + s)), cot_diff = 1.0 / std::tan(0.5 * (t - s));
  return 8.0 * (b + ib) * std::polar(1.0, s + t) / d * (std::sin(s) / (cot_sum - cot_diff));
}

/// The same difference as 4 (beta + 1/beta) e^{i(s+t)} (cos t - cos s) / D.
inline cplx h_difference_cosine_form(const ArcParams& p, double t, double s) {
  const cplx b = p.beta(), ib = 1.0 / b;
  const cplx et = std::polar(1.0, t), es = std::polar(1.0, s);
  const cplx d = (et + b) * (es + b) * (et + ib) * (es + ib);
  return 4.0 * (b + ib) * std::polar(1.0, s + t) * (std::cos(t) - std::cos(s)) / d;
}

/// t(u) = 2 arctan(sqrt u) and dt/du = 1 / (sqrt(u) (1 + u)), the change of
/// variables sqrt(u) = tan(t/2) taking (0, pi) to (0, infinity).
inline double tan_half_angle(double u) { return 2.0 * std::atan(std::sqrt(u)); }
inline double tan_half_jacobian(double u) { return 1.0 / (std::sqrt(u) * (1.0 + u)); }

namespace detail {

struct ArcPV {
  const ArcParams& p;
  const ArcFn& f;
  bool weighted;                  // density f w_alpha instead of f
  std::vector<double> marks_w;   // omega images of the marks of f

  // integrand density in the omega variable
  cplx density(double t) const {
    const cplx v = f(theta_of_omega(p, t));
    return weighted ? v : v * dtheta_domega(p, t);
  }
  // value at tau of the theta density, so that density(t) ~ g dtheta/domega near s
  cplx g_at(double tau) const { return weighted ? f(tau) * weight_w_alpha(p, tau) : f(tau); }
};

inline GradedRuleOptions panel_options(int nodes) {
  GradedRuleOptions o;
  o.base_panels = 2;
  o.nodes_per_panel = nodes;
  return o;
}

inline cplx subtraction_once(const ArcPV& a, double tau, double s, int nodes) {
  std::vector<double> cuts = a.marks_w;
  cuts.push_back(s);
  const Rule1D r = composite_rule(0.0, pi, cuts, a.marks_w, panel_options(nodes));
  const cplx g = a.g_at(tau);
  const cplx et = std::polar(1.0, tau);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double t = r.nodes[j];
    const double th = theta_of_omega(a.p, t);
    const cplx den = et - std::polar(1.0, th);
    if (den == 0.0) continue; // node within rounding of tau; the integrand is bounded there
    acc += r.weights[j] * (a.density(t) - g * dtheta_domega(a.p, t)) / den;
  }
  return acc + g * pv_kernel_integral(a.p, tau);
}

inline cplx omega_once(const ArcPV& a, double s, int nodes) {
  std::vector<double> cuts = a.marks_w;
  cuts.push_back(s);
  const Rule1D r = composite_rule(0.0, pi, cuts, a.marks_w, panel_options(nodes));
  const cplx b = a.p.beta(), ib = 1.0 / b;
  const cplx es = std::polar(1.0, s);
  const cplx scale = 4.0 * (b + ib);
  // 1/(h(e^{is}) - h(e^{it})) = -D / (4 (beta + 1/beta) e^{i(s+t)} (cos t - cos s))
  auto big_g = [&](double t) {
    const cplx et = std::polar(1.0, t);
    const cplx d = (et + b) * (es + b) * (et + ib) * (es + ib);
    return -a.density(t) * d / (scale * et * es);
  };
  const cplx gs = big_g(s);
  const double cs = std::cos(s);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double t = r.nodes[j];
    const double den = std::cos(t) - cs;
    if (den == 0.0) continue;
    acc += r.weights[j] * (big_g(t) - gs) / den;
  }
  return acc;
}

inline cplx exclusion_once(const ArcPV& a, double tau, double eps, int nodes) {
  const double lo = omega_of_theta(a.p, tau - eps), hi = omega_of_theta(a.p, tau + eps);
  const cplx et = std::polar(1.0, tau);
  cplx acc = 0.0;
  for (auto [l, r] : {std::pair{0.0, lo}, std::pair{hi, pi}}) {
    std::vector<double> graded;
    for (double m : a.marks_w)
      if (m > l && m < r) graded.push_back(m);
    graded.push_back(l == 0.0 ? r : l);
    const Rule1D rule = composite_rule(l, r, graded, graded, panel_options(nodes));
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double t = rule.nodes[j];
      acc += rule.weights[j] * a.density(t) / (et - std::polar(1.0, theta_of_omega(a.p, t)));
    }
  }
  return acc;
}

// Richardson extrapolation in odd powers of eps over eps / 2^k, k < levels.
inline cplx exclusion_extrapolated(const ArcPV& a, double tau, double eps0, int nodes, int levels) {
  std::vector<cplx> t(levels);
  for (int k = 0; k < levels; ++k) t[k] = exclusion_once(a, tau, std::ldexp(eps0, -k), nodes);
  for (int m = 1; m < levels; ++m) {
    const double f = std::ldexp(1.0, 2 * m - 1); // 2^{power eliminated}
    for (int k = levels - 1; k >= m; --k) t[k] = (f * t[k] - t[k - 1]) / (f - 1.0);
  }
  return t[levels - 1];
}

inline double exclusion_start(const ArcPV& a, double tau, double eps) {
  double e = std::min(eps, 0.25 * std::min(tau - a.p.alpha(), two_pi - a.p.alpha() - tau));
  for (double m : a.marks_w) {
    const double d = std::abs(theta_of_omega(a.p, m) - tau);
    if (d > 1e-12) e = std::min(e, 0.5 * d);
  }
  return e;
}

inline void check_agreement(cplx coarse, cplx fine, const PVScheme& scheme, double tau) {
  if (std::abs(coarse - fine) > scheme.tolerance * std::max(1.0, std::abs(fine)))
    throw ConvergenceError(std::string("PV (") + to_string(scheme.method) + ") at tau = " +
                           fmt_num(tau) + ": refinement changed the value by " +
                           fmt_num(std::abs(coarse - fine)));
}

// PV int over the arc of density(theta)/(e^{i tau} - e^{i theta}), without 1/(2 pi)
inline cplx arc_pv(const ArcPV& a, double tau, const PVScheme& scheme) {
  scheme.validate();
  if (!a.p.in_guarded_arc(tau)) throw DomainError("hilbert transform: tau outside the guarded arc");
  const double s = omega_of_theta(a.p, tau);
  switch (scheme.method) {
  case PVMethod::singularity_subtraction: {
    const cplx v = subtraction_once(a, tau, s, scheme.nodes);
    if (scheme.check) check_agreement(v, subtraction_once(a, tau, s, 2 * scheme.nodes), scheme, tau);
    return v;
  }
  case PVMethod::omega_substitution: {
    const cplx v = omega_once(a, s, scheme.nodes);
    if (scheme.check) check_agreement(v, omega_once(a, s, 2 * scheme.nodes), scheme, tau);
    return v;
  }
  case PVMethod::symmetric_exclusion: {
    const double e0 = exclusion_start(a, tau, scheme.epsilon);
    const cplx v = exclusion_extrapolated(a, tau, e0, scheme.nodes, 5);
    if (!scheme.check) return v;
    const cplx fine = exclusion_extrapolated(a, tau, 0.5 * e0, scheme.nodes, 5);
    check_agreement(v, fine, scheme, tau);
    return fine;
  }
  }
  return {};
}

inline std::vector<double> omega_marks(const ArcParams& p, std::span<const double> marks) {
  std::vector<double> w;
  for (double m : marks)
    if (p.in_guarded_arc(m)) w.push_back(omega_of_theta(p, m));
  return w;
}

} // namespace detail

/// H_1 f (e^{i tau}) = (1/2pi) PV int_alpha^{2pi-alpha} f(e^{i theta}) / (e^{i tau} - e^{i theta}) d theta.
/// `marks` lists angles where f is not smooth.
inline cplx hilbert_arc(const ArcParams& p, const ArcFn& f, double tau, const PVScheme& scheme = {},
                        std::span<const double> marks = {}) {
  const detail::ArcPV a{p, f, false, detail::omega_marks(p, marks)};
  return detail::arc_pv(a, tau, scheme) / two_pi;
}

inline cplx hilbert_arc(const ArcParams& p, const GridFunction& f, double tau,
                        const PVScheme& scheme = {}) {
  return hilbert_arc(p, f.as_theta_function(p), tau, scheme);
}

/// H_2 f = H_1(f w_alpha), evaluated in omega where w_alpha d theta = d omega.
inline cplx hilbert_arc_weighted(const ArcParams& p, const ArcFn& f, double tau,
                                 const PVScheme& scheme = {}, std::span<const double> marks = {}) {
  const detail::ArcPV a{p, f, true, detail::omega_marks(p, marks)};
  return detail::arc_pv(a, tau, scheme) / two_pi;
}

inline cplx hilbert_arc_weighted(const ArcParams& p, const GridFunction& f, double tau,
                                 const PVScheme& scheme = {}) {
  return hilbert_arc_weighted(p, f.as_theta_function(p), tau, scheme);
}

/// Writes tau, Re, Im rows.
inline void write_transform_csv(std::ostream& os, std::span<const double> taus,
                                std::span<const cplx> values) {
  os << "tau,Re,Im\n";
  char buf[96];
  for (std::size_t j = 0; j < taus.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", taus[j], values[j].real(), values[j].imag());
    os << buf;
  }
}

// ---------------------------------------------------------------------------
// conjugate function on the circle

namespace detail {
inline void require_circle_grid(const GridFunction& f, bool pow2) {
  if (f.kind() != DomainKind::full_circle || !f.trigonometric())
    throw GridMismatchError("circle conjugate: need a uniform full-circle grid");
  const std::size_t n = f.size();
  if (pow2 && (n & (n - 1)) != 0)
    throw GridMismatchError("circle conjugate: grid length must be a power of two");
  if (n % 2 != 0) throw GridMismatchError("circle conjugate: grid length must be even");
}
} // namespace detail

/// f~(x) = (1/2pi) PV int_0^{2pi} f(t) cot((x - t)/2) dt through the multiplier
/// -i sgn(k) on discrete Fourier coefficients (Nyquist mode dropped).
inline GridFunction circle_conjugate_multiplier(const GridFunction& f) {
  detail::require_circle_grid(f, true);
  const std::size_t n = f.size();
  Eigen::FFT<double> fft;
  std::vector<cplx> spec;
  fft.fwd(spec, f.values());
  const cplx mi(0.0, -1.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0 || 2 * k == n) spec[k] = 0.0;
    else if (2 * k < n) spec[k] *= mi;
    else spec[k] *= -mi;
  }
  std::vector<cplx> out;
  fft.inv(out, spec);
  return GridFunction(DomainKind::full_circle, f.nodes(), std::move(out));
}

/// The same operator by the alternating trapezoid rule
/// f~(x_m) = (2h / 2pi) sum_{j - m odd} f_j cot((x_m - x_j)/2), which is exact
/// for trigonometric polynomials of degree below n/2.
inline GridFunction circle_conjugate_quadrature(const GridFunction& f) {
  detail::require_circle_grid(f, false);
  const std::size_t n = f.size();
  const double h = two_pi / static_cast<double>(n);
  const auto& x = f.nodes();
  const auto& v = f.values();
  std::vector<cplx> out(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    cplx acc = 0.0;
    for (std::size_t j = (m + 1) % 2; j < n; j += 2) acc += v[j] / std::tan(0.5 * (x[m] - x[j]));
    out[m] = acc * (2.0 * h / two_pi);
  }
  return GridFunction(DomainKind::full_circle, f.nodes(), std::move(out));
}

inline GridFunction circle_conjugate(const GridFunction& f) { return circle_conjugate_multiplier(f); }

/// Conjugate of an even 2pi-periodic f at x in (0, 2pi) from values on (0, pi):
/// (1/2pi) PV int_0^pi f(t) (cot((x+t)/2) - cot((t-x)/2)) dt, with the singular
/// part subtracted using PV int_0^pi cot((t-x)/2) dt = 2 log cot(x/2).
inline cplx circle_conjugate_even(const ArcFn& f, double x, int nodes = 48,
                                  std::span<const double> marks = {}) {
  if (!(x > 0.0 && x < two_pi) || std::abs(x - pi) < 1e-15) {
    if (std::abs(x - pi) < 1e-15) return 0.0; // odd about pi
    throw DomainError("circle_conjugate_even: x outside (0, 2pi)");
  }
  if (x > pi) return -circle_conjugate_even(f, two_pi - x, nodes, marks);
  std::vector<double> cuts(marks.begin(), marks.end());
  cuts.push_back(x);
  std::vector<double> graded(marks.begin(), marks.end());
  graded.push_back(0.0);
  graded.push_back(pi);
  const Rule1D r = composite_rule(0.0, pi, cuts, graded, detail::panel_options(nodes));
  const cplx fx = f(x);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double t = r.nodes[j];
    if (t == x) continue;
    const cplx ft = f(t);
    acc += r.weights[j] * (ft / std::tan(0.5 * (x + t)) - (ft - fx) / std::tan(0.5 * (t - x)));
  }
  acc -= fx * 2.0 * std::log(1.0 / std::tan(0.5 * x));
  return acc / two_pi;
}

// ---------------------------------------------------------------------------
// weighted norms

inline constexpr double min_lp_exponent = 1.05;

inline void require_exponent(double p) {
  if (!(p >= min_lp_exponent) || !std::isfinite(p))
    throw DomainError("L^p norms need p >= 1.05 (got " + fmt_num(p) + ")");
}

/// (int |f|^p k w_alpha d theta)^{1/p}, as sum_j rule.weight_j k(theta_j) |f(theta_j)|^p.
inline double lp_norm_weighted(const QuadratureRule& rule, const ArcFn& f, double p,
                               const MeasureSpec& mu) {
  require_exponent(p);
  double acc = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double v = std::abs(f(rule.theta[j]));
    if (!std::isfinite(v)) throw DomainError("lp_norm_weighted: non-finite value of f");
    acc += rule.weight[j] * mu.k(rule.theta[j]) * std::pow(v, p);
  }
  return std::pow(acc, 1.0 / p);
}

/// Norm from values already sampled at the rule's nodes.
inline double lp_norm_weighted(const QuadratureRule& rule, std::span<const cplx> values, double p,
                               const MeasureSpec& mu) {
  require_exponent(p);
  if (values.size() != rule.size()) throw GridMismatchError("lp_norm_weighted: size mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double v = std::abs(values[j]);
    if (!std::isfinite(v)) throw DomainError("lp_norm_weighted: non-finite value");
    acc += rule.weight[j] * mu.k(rule.theta[j]) * std::pow(v, p);
  }
  return std::pow(acc, 1.0 / p);
}

/// Norm of sampled data. Uniform midpoint omega grids use the midpoint rule on
/// the samples themselves; other grids are interpolated onto a Gauss-Legendre
/// omega rule with `n_nodes` points.
inline double lp_norm_weighted(const ArcParams& p, const GridFunction& f, double exponent,
                               const MeasureSpec& mu, int n_nodes = 1024) {
  require_exponent(exponent);
  if (f.kind() == DomainKind::omega_interval && f.trigonometric()) {
    const double h = pi / static_cast<double>(f.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
      acc += h * mu.k(theta_of_omega(p, f.nodes()[j])) * std::pow(std::abs(f.values()[j]), exponent);
    return std::pow(acc, 1.0 / exponent);
  }
  return lp_norm_weighted(make_quadrature(p, n_nodes), f.as_theta_function(p), exponent, mu);
}

/// ||H_1 f||_{p, w} / ||f||_{p, w} with H_1 f sampled at the nodes of `rule`.
inline double riesz_ratio(const ArcParams& p, const ArcFn& f, double exponent,
                          const QuadratureRule& rule, const PVScheme& scheme = {},
                          std::span<const double> marks = {}) {
  const MeasureSpec base = MeasureSpec::base(p);
  const double denom = lp_norm_weighted(rule, f, exponent, base);
  if (denom == 0.0) throw DomainError("riesz_ratio: f has zero norm");
  std::vector<cplx> h(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) h[j] = hilbert_arc(p, f, rule.theta[j], scheme, marks);
  return lp_norm_weighted(rule, h, exponent, base) / denom;
}

// ---------------------------------------------------------------------------
// Muckenhoupt's two-weight inequality on the line

/// Exponents of  int |W_{r,s}(x) int f(y)/(x-y) dy|^p dx <= C int |f(y) W_{R,S}(y)|^p dy,
/// W_{a,b}(x) = |x|^a (1 + |x|)^{b-a}.
struct MuckenhouptParams {
  double p, r, s, big_r, big_s;

  /// The exponents arising from the arc transform after sqrt(u) = tan(t/2):
  /// s = -3/(2p), S = 1 - 3/(2p), r = R = -1/(2p).
  static MuckenhouptParams arc_transfer(double p) {
    return {p, -0.5 / p, -1.5 / p, -0.5 / p, 1.0 - 1.5 / p};
  }

  void validate() const {
    auto fail = [](const char* what) { throw DomainError(std::string("muckenhoupt: ") + what); };
    if (!(p > 1.0) || !std::isfinite(p)) fail("need 1 < p < infinity");
    if (!(r > -1.0 / p)) fail("need r > -1/p");
    if (!(s < 1.0 - 1.0 / p)) fail("need s < 1 - 1/p");
    if (!(big_r < 1.0 - 1.0 / p)) fail("need R < 1 - 1/p");
    if (!(big_s > -1.0 / p)) fail("need S > -1/p");
    if (!(r >= big_r)) fail("need r >= R");
    if (!(s <= big_s)) fail("need s <= S");
  }
};

struct MuckenhouptResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double truncation = 0.0;
  double lhs_tail = 0.0; ///< estimate of the lhs mass outside (-T, T)
  double rhs_tail = 0.0; ///< rhs mass of f beyond T
  bool tail_warning = false;

  double ratio() const { return rhs > 0.0 ? lhs / rhs : 0.0; }
};

/// Both sides of the inequality for f supported on (0, infinity), truncated to
/// (0, T): the inner PV over (0, T) by subtraction, the outer integral over (-T, T).
/// `breakpoints` lists interior points where f is not smooth.
inline MuckenhouptResult muckenhoupt_check(const ArcFn& f, std::span<const double> breakpoints,
                                           const MuckenhouptParams& mp, double T = 200.0,
                                           int nodes = 24) {
  mp.validate();
  if (!(T > 0.0)) throw DomainError("muckenhoupt: truncation must be positive");
  GradedRuleOptions opts;
  opts.base_panels = 1;
  opts.nodes_per_panel = nodes;
  opts.levels = 20;

  std::vector<double> dyadic;
  for (double d = 0.5; d < T; d *= 2.0) dyadic.push_back(d);
  std::vector<double> inner_graded(breakpoints.begin(), breakpoints.end());
  inner_graded.push_back(0.0);
  inner_graded.push_back(T);

  auto weight = [](double x, double a, double b) {
    const double ax = std::abs(x);
    return std::pow(ax, a) * std::pow(1.0 + ax, b - a);
  };

  // H(x) = PV int_0^T f(y) / (x - y) dy
  auto inner = [&](double x) {
    std::vector<double> cuts = dyadic, graded = inner_graded;
    cuts.insert(cuts.end(), breakpoints.begin(), breakpoints.end());
    const bool inside = x > 0.0 && x < T;
    if (inside) graded.push_back(x);
    const Rule1D r = composite_rule(0.0, T, cuts, graded, opts);
    const cplx fx = inside ? f(x) : cplx(0.0);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double y = r.nodes[j];
      if (y == x) continue; // only when x sits within rounding of a cut
      acc += r.weights[j] * (f(y) - fx) / (x - y);
    }
    if (inside) acc += fx * std::log(x / (T - x));
    return acc;
  };

  MuckenhouptResult out;
  out.truncation = T;

  std::vector<double> outer_cuts;
  for (double d : dyadic) {
    outer_cuts.push_back(d);
    outer_cuts.push_back(-d);
  }
  outer_cuts.insert(outer_cuts.end(), breakpoints.begin(), breakpoints.end());
  std::vector<double> outer_graded(breakpoints.begin(), breakpoints.end());
  outer_graded.push_back(0.0);
  outer_graded.push_back(T);
  const Rule1D outer = composite_rule(-T, T, outer_cuts, outer_graded, opts);
  for (std::size_t j = 0; j < outer.size(); ++j) {
    const double x = outer.nodes[j];
    out.lhs += outer.weights[j] * std::pow(std::abs(weight(x, mp.r, mp.s) * inner(x)), mp.p);
  }

  std::vector<double> rhs_graded = inner_graded;
  const Rule1D rr = composite_rule(0.0, T, dyadic, rhs_graded, opts);
  cplx mass = 0.0;
  for (std::size_t j = 0; j < rr.size(); ++j) {
    const double y = rr.nodes[j];
    const cplx fy = f(y);
    mass += rr.weights[j] * fy;
    out.rhs += rr.weights[j] * std::pow(std::abs(fy * weight(y, mp.big_r, mp.big_s)), mp.p);
  }

  // |x| > T: H(x) ~ mass / x and W_{r,s}(x) <= |x|^s, so the tail is at most
  // 2 |mass|^p T^{1 - (1 - s) p} / ((1 - s) p - 1)
  const double e = (1.0 - mp.s) * mp.p - 1.0;
  out.lhs_tail = 2.0 * std::pow(std::abs(mass), mp.p) * std::pow(T, -e) / e;
  // rhs beyond T through y = T / v, v in (0, 1)
  const Rule1D tail = composite_rule(0.0, 1.0, {}, std::vector<double>{0.0}, opts);
  for (std::size_t j = 0; j < tail.size(); ++j) {
    const double v = tail.nodes[j], y = T / v;
    out.rhs_tail += tail.weights[j] * (T / (v * v)) *
                    std::pow(std::abs(f(y) * weight(y, mp.big_r, mp.big_s)), mp.p);
  }
  out.tail_warning = out.lhs_tail > 1e-2 * out.lhs || out.rhs_tail > 1e-2 * out.rhs;
  return out;
}

} // namespace arcpoly
