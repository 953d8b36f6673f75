#pragma once

#include <arcpoly/ac_polynomials.hpp>
#include <arcpoly/catalog.hpp>
#include <arcpoly/errors.hpp>
#include <arcpoly/measure.hpp>
#include <arcpoly/stats.hpp>
#include <arcpoly/transforms.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace arcpoly {

/// Limit on the condition estimate of the orthogonalization.
inline constexpr double condition_limit = 1e12;

/// Orthonormal polynomials phi_n for k w_alpha d theta / (2 pi) on the arc,
/// discretized by a quadrature rule.
///
/// Built by Arnoldi iteration: phi_n is z phi_{n-1} orthogonalized twice
/// against phi_0..phi_{n-1} (classical Gram-Schmidt with reorthogonalization)
/// and normalized. Values at the rule's nodes are stored; values elsewhere
/// follow from the Hessenberg recurrence
///   H(n, n-1) phi_n(z) = z phi_{n-1}(z) - sum_{j < n} H(j, n-1) phi_j(z).
/// The leading coefficient kappa_n = kappa_{n-1} / H(n, n-1) is positive.
class PerturbedBasis {
public:
  PerturbedBasis(const MeasureSpec& measure, int max_degree, QuadratureRule rule)
      : measure_(measure), rule_(std::move(rule)), max_degree_(max_degree) {
    if (max_degree < 0) throw DomainError("PerturbedBasis: max_degree must be nonnegative");
    const int need = 8 * std::max(max_degree, 1);
    if (static_cast<int>(rule_.size()) < need)
      throw DomainError("PerturbedBasis: quadrature has " + std::to_string(rule_.size()) +
                        " nodes, need at least 8 * max_degree = " + std::to_string(need));
    build();
  }

  const MeasureSpec& measure() const noexcept { return measure_; }
  const QuadratureRule& rule() const noexcept { return rule_; }
  int max_degree() const noexcept { return max_degree_; }
  std::span<const double> leading_coeffs() const noexcept { return kappa_; }
  /// max over n of 1 / ||r_n||^2 with r_n the orthogonalized z phi_{n-1}.
  double condition_estimate() const noexcept { return condition_; }
  /// Discrete measure weights mu_i = rule.weight_i k(theta_i) / (2 pi).
  std::span<const double> measure_weights() const noexcept { return mu_; }
  /// Values phi_n(theta_i): row n, column i.
  const Eigen::MatrixXcd& node_values() const noexcept { return values_; }
  const Eigen::MatrixXcd& hessenberg() const noexcept { return hess_; }

  /// max |<phi_j, phi_k> - delta_jk| in the discrete inner product.
  double gram_residual() const {
    Eigen::MatrixXcd scaled = values_;
    for (Eigen::Index i = 0; i < scaled.cols(); ++i) scaled.col(i) *= std::sqrt(mu_[i]);
    const Eigen::MatrixXcd g = scaled.conjugate() * scaled.transpose();
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  }

  /// Gram residual on another rule, with phi evaluated off the build nodes.
  double gram_residual_on(const QuadratureRule& other, int n) const {
    Eigen::MatrixXcd scaled(n + 1, static_cast<Eigen::Index>(other.size()));
    for (std::size_t i = 0; i < other.size(); ++i) {
      const auto v = values_at(other.theta[i], n);
      const double w = std::sqrt(other.weight[i] * measure_.k(other.theta[i]) / two_pi);
      for (int j = 0; j <= n; ++j) scaled(j, static_cast<Eigen::Index>(i)) = w * v[j];
    }
    const Eigen::MatrixXcd g = scaled.conjugate() * scaled.transpose();
    return (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  }

  /// phi_0(z), ..., phi_n(z) at z = e^{i theta}.
  std::vector<cplx> values_at(double theta, int n) const {
    if (n < 0 || n > max_degree_) throw DomainError("PerturbedBasis: degree out of range");
    const cplx z = std::polar(1.0, theta);
    std::vector<cplx> v(n + 1);
    v[0] = kappa_[0];
    for (int k = 1; k <= n; ++k) {
      cplx acc = z * v[k - 1];
      for (int j = 0; j < k; ++j) acc -= hess_(j, k - 1) * v[j];
      v[k] = acc / hess_(k, k - 1);
    }
    return v;
  }

  cplx phi(int n, double theta) const { return values_at(theta, n)[n]; }

private:
  void build() {
    const Eigen::Index m = static_cast<Eigen::Index>(rule_.size());
    const int N = max_degree_;
    mu_.resize(m);
    Eigen::VectorXd sq(m);
    Eigen::VectorXcd z(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      mu_[i] = rule_.weight[i] * measure_.k(rule_.theta[i]) / two_pi;
      sq[i] = std::sqrt(mu_[i]);
      z[i] = std::polar(1.0, rule_.theta[i]);
    }
    // work with q_n = sqrt(mu) phi_n so the inner product is the Euclidean one
    Eigen::MatrixXcd q(m, N + 1);
    q.col(0) = sq.cast<cplx>();
    const double n0 = q.col(0).norm();
    q.col(0) /= n0;
    kappa_.assign(N + 1, 0.0);
    kappa_[0] = 1.0 / n0;
    hess_ = Eigen::MatrixXcd::Zero(N + 1, std::max(N, 1));
    condition_ = 1.0;
    for (int k = 1; k <= N; ++k) {
      Eigen::VectorXcd v = z.cwiseProduct(q.col(k - 1));
      for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXcd h = q.leftCols(k).adjoint() * v;
        v -= q.leftCols(k) * h;
        hess_.col(k - 1).head(k) += h;
      }
      const double r = v.norm();
      condition_ = std::max(condition_, 1.0 / (r * r));
      if (!(r > 0.0) || condition_ > condition_limit)
        throw IllConditionedError("PerturbedBasis: orthogonalization lost rank at degree " +
                                  std::to_string(k) + " (condition estimate " +
                                  fmt_num(condition_) + ")");
      hess_(k, k - 1) = r;
      q.col(k) = v / r;
      kappa_[k] = kappa_[k - 1] / r;
    }
    values_.resize(N + 1, m);
    for (Eigen::Index i = 0; i < m; ++i) values_.col(i) = q.row(i).transpose() / sq[i];
  }

  MeasureSpec measure_;
  QuadratureRule rule_;
  int max_degree_;
  std::vector<double> mu_;
  std::vector<double> kappa_;
  double condition_ = 1.0;
  Eigen::MatrixXcd hess_;
  Eigen::MatrixXcd values_;
};

inline PerturbedBasis build_perturbed_basis(const MeasureSpec& measure, int max_degree,
                                            const QuadratureRule& rule) {
  return PerturbedBasis(measure, max_degree, rule);
}

/// Basis on a rule adapted to the marks of k and of `extra_marks`, with at
/// least max(n_nodes, 8 max_degree) nodes.
inline PerturbedBasis build_perturbed_basis(const MeasureSpec& measure, int max_degree,
                                            std::span<const double> extra_marks = {},
                                            int n_nodes = 512) {
  std::vector<double> marks = measure.marks();
  marks.insert(marks.end(), extra_marks.begin(), extra_marks.end());
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
  return PerturbedBasis(measure, max_degree,
                        make_adapted_quadrature(measure.params(), marks,
                                                std::max(n_nodes, 8 * std::max(max_degree, 1))));
}

/// sup |phi_n| over a theta grid, for n <= n_max.
struct UniformBoundProbe {
  double sup = 0.0;
  std::vector<double> per_degree; ///< sup over the grid for each n = 0..n_max
  double slope = 0.0;             ///< log-log slope of per_degree against n over n >= 1
};

inline UniformBoundProbe phi_uniform_bound_probe(const PerturbedBasis& basis, int n_max,
                                                 std::span<const double> thetas) {
  if (thetas.empty()) throw DomainError("phi_uniform_bound_probe: empty grid");
  UniformBoundProbe out;
  out.per_degree.assign(n_max + 1, 0.0);
  for (double t : thetas) {
    const auto v = basis.values_at(t, n_max);
    for (int n = 0; n <= n_max; ++n) out.per_degree[n] = std::max(out.per_degree[n], std::abs(v[n]));
  }
  out.sup = *std::max_element(out.per_degree.begin(), out.per_degree.end());
  if (n_max >= 2) {
    std::vector<double> x, y;
    for (int n = 1; n <= n_max; ++n) {
      x.push_back(n);
      y.push_back(out.per_degree[n]);
    }
    out.slope = loglog_slope(x, y);
  }
  return out;
}

/// Uniform interior grid of the arc with `count` points.
inline std::vector<double> uniform_theta_grid(const ArcParams& p, int count) {
  std::vector<double> t(count);
  const double a = p.alpha(), b = two_pi - p.alpha();
  for (int j = 0; j < count; ++j) t[j] = a + (b - a) * (j + 0.5) / count;
  return t;
}

struct WeightedPoint {
  int n;
  double error_pow_p;   ///< E = sum rho_i k_i |f_i - S_n f_i|^p rad_i^{p/2}
  double error;         ///< E^{1/p}
  double cd_crosscheck; ///< max |S_n f (Christoffel-Darboux form) - S_n f| at sample nodes
};

/// sqrt((cos alpha - cos theta) / 2) = gamma sin(lambda), the factor that
/// vanishes like a square root at both endpoints.
inline double damping_factor(const ArcParams& p, double lambda) { return p.gamma() * std::sin(lambda); }

namespace detail {

inline cplx perturbed_kernel_sum(const PerturbedBasis& b, std::span<const cplx> fv, int n,
                                 Eigen::Index t) {
  // K_n(theta, tau) = [conj phi*_{n+1}(theta) phi*_{n+1}(tau) - conj phi_{n+1}(theta) phi_{n+1}(tau)]
  //                   / (1 - conj(z) zeta),  phi*_m(z) = z^m conj(phi_m(z)) on the circle
  const auto& V = b.node_values();
  const auto& rule = b.rule();
  const auto mu = b.measure_weights();
  const int m = n + 1;
  const double tau = rule.theta[t];
  const cplx zeta = std::polar(1.0, tau);
  const cplx ps_tau = std::polar(1.0, m * tau) * std::conj(V(m, t));
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < V.cols(); ++i) {
    const double th = rule.theta[i];
    const cplx z = std::polar(1.0, th);
    const cplx den = 1.0 - std::conj(z) * zeta;
    cplx kern;
    if (std::abs(den) < cd_diagonal_tolerance) {
      kern = 0.0;
      for (int j = 0; j <= n; ++j) kern += std::conj(V(j, i)) * V(j, t);
    } else {
      const cplx ps_th = std::polar(1.0, m * th) * std::conj(V(m, i));
      kern = (std::conj(ps_th) * ps_tau - std::conj(V(m, i)) * V(m, t)) / den;
    }
    acc += mu[i] * fv[i] * kern;
  }
  return acc;
}

} // namespace detail

/// E_n for each n in `degrees`, with S_n taken in the perturbed basis and the
/// error weighted by k and by rad^{p/2}, rad = (cos alpha - cos theta) / 2.
/// f is sampled at the basis' rule, which should resolve the marks of f.
inline std::vector<WeightedPoint> weighted_convergence_curve(const PerturbedBasis& basis, const ArcFn& f,
                                                             double p, std::span<const int> degrees,
                                                             int crosscheck_samples = 5) {
  require_exponent(p);
  if (degrees.empty()) throw DomainError("weighted_convergence_curve: no degrees requested");
  const int n_max = *std::max_element(degrees.begin(), degrees.end());
  if (n_max > basis.max_degree()) throw DomainError("weighted_convergence_curve: degree exceeds the basis");
  const auto& rule = basis.rule();
  const auto& V = basis.node_values();
  const auto mu = basis.measure_weights();
  const Eigen::Index m = V.cols();
  std::vector<cplx> fv(m), s(m, 0.0);
  std::vector<double> damp(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    fv[i] = f(rule.theta[i]);
    damp[i] = std::pow(damping_factor(rule.params, rule.lambda[i]), p);
  }
  std::vector<Eigen::Index> samples;
  for (int k = 0; k < crosscheck_samples; ++k) samples.push_back((2 * k + 1) * m / (2 * crosscheck_samples));

  std::vector<WeightedPoint> out;
  for (int j = 0; j <= n_max; ++j) {
    cplx c = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) c += mu[i] * fv[i] * std::conj(V(j, i));
    for (Eigen::Index i = 0; i < m; ++i) s[i] += c * V(j, i);
    if (std::find(degrees.begin(), degrees.end(), j) == degrees.end()) continue;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < m; ++i)
      acc += rule.weight[i] * basis.measure().k(rule.theta[i]) * std::pow(std::abs(fv[i] - s[i]), p) * damp[i];
    double cross = 0.0;
    if (j < basis.max_degree())
      for (Eigen::Index t : samples)
        cross = std::max(cross, std::abs(detail::perturbed_kernel_sum(basis, fv, j, t) - s[t]));
    else
      cross = std::numeric_limits<double>::quiet_NaN();
    out.push_back({j, acc, std::pow(acc, 1.0 / p), cross});
  }
  return out;
}

/// max over the family of ||H_2 f * sqrt(rad)||_{p,w} / ||f||_{p,w}, where
/// H_2 f = H_1(f w_alpha). Members with zero norm contribute 0.
inline double weighted_hilbert_bound_probe(const ArcParams& params, std::span<const TestFunction> family,
                                           double p, int n_nodes = 128, const PVScheme& scheme = {}) {
  require_exponent(p);
  const MeasureSpec base = MeasureSpec::base(params);
  double best = 0.0;
  for (const auto& f : family) {
    const QuadratureRule rule = make_adapted_quadrature(params, f.marks, n_nodes);
    const double norm_f = lp_norm_weighted(rule, f.eval, p, base);
    if (norm_f == 0.0) continue;
    std::vector<cplx> h(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j)
      h[j] = hilbert_arc_weighted(params, f.eval, rule.theta[j], scheme, f.marks) *
             damping_factor(params, rule.lambda[j]);
    best = std::max(best, lp_norm_weighted(rule, h, p, base) / norm_f);
  }
  return best;
}

} // namespace arcpoly
