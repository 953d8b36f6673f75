#pragma once

#include <arcpoly/arc_geometry.hpp>
#include <arcpoly/errors.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace arcpoly {

enum class DomainKind { theta_arc, omega_interval, full_circle };

inline const char* to_string(DomainKind d) {
  switch (d) {
  case DomainKind::theta_arc: return "theta-arc";
  case DomainKind::omega_interval: return "omega-interval";
  case DomainKind::full_circle: return "full-circle";
  }
  return "?";
}

/// Complex samples on an ordered grid inside one of the three open intervals
/// (alpha, 2 pi - alpha), (0, pi) or (0, 2 pi).
///
/// Between nodes the samples are interpolated: barycentric trigonometric
/// interpolation on uniform full-circle grids, the same on the even extension
/// of uniform midpoint omega grids, and a natural cubic spline otherwise.
class GridFunction {
public:
  GridFunction(DomainKind kind, std::vector<double> nodes, std::vector<cplx> values,
               double alpha = std::nan(""))
    : kind_(kind), nodes_(std::move(nodes)), values_(std::move(values)), alpha_(alpha) {
    validate();
    classify();
    if (!uniform_) build_spline();
    if (uniform_ && kind_ == DomainKind::omega_interval) build_mirror();
  }

  DomainKind kind() const noexcept { return kind_; }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<cplx>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  /// The arc opening the grid refers to (theta_arc grids only).
  double alpha() const noexcept { return alpha_; }

  /// True for x_j = x_0 + j h with the periodic (full circle) or mirrored
  /// (omega midpoint) structure needed by the trigonometric interpolant.
  bool trigonometric() const noexcept { return uniform_; }

  cplx operator()(double x) const {
    if (uniform_) return kind_ == DomainKind::full_circle ? trig_eval(x) : even_trig_eval(x);
    return spline_eval(x);
  }

  /// Samples of f at the midpoint grid x_j = (j + 1/2) 2 pi / n.
  static GridFunction full_circle(int n, const std::function<cplx(double)>& f) {
    std::vector<double> x(n);
    std::vector<cplx> v(n);
    for (int j = 0; j < n; ++j) {
      x[j] = (j + 0.5) * two_pi / n;
      v[j] = f(x[j]);
    }
    return GridFunction(DomainKind::full_circle, std::move(x), std::move(v));
  }

  /// Samples of f(theta(omega)) at omega_j = (j + 1/2) pi / n.
  static GridFunction omega_grid(const ArcParams& p, int n, const std::function<cplx(double)>& f) {
    std::vector<double> x(n);
    std::vector<cplx> v(n);
    for (int j = 0; j < n; ++j) {
      x[j] = (j + 0.5) * pi / n;
      v[j] = f(theta_of_omega(p, x[j]));
    }
    GridFunction g(DomainKind::omega_interval, std::move(x), std::move(v));
    g.alpha_ = p.alpha();
    return g;
  }

  /// Samples of f at n equally spaced interior points of the arc.
  static GridFunction theta_grid(const ArcParams& p, int n, const std::function<cplx(double)>& f) {
    std::vector<double> x(n);
    std::vector<cplx> v(n);
    const double a = p.alpha() + 2 * endpoint_band, b = two_pi - p.alpha() - 2 * endpoint_band;
    for (int j = 0; j < n; ++j) {
      x[j] = a + (b - a) * (j + 0.5) / n;
      v[j] = f(x[j]);
    }
    return GridFunction(DomainKind::theta_arc, std::move(x), std::move(v), p.alpha());
  }

  /// The represented function as a callable of theta, for arc-based grids.
  std::function<cplx(double)> as_theta_function(const ArcParams& p) const {
    if (kind_ == DomainKind::full_circle)
      throw GridMismatchError("GridFunction: full-circle data is not a function on the arc");
    if (kind_ == DomainKind::theta_arc) {
      if (!std::isnan(alpha_) && std::abs(alpha_ - p.alpha()) > 1e-14)
        throw GridMismatchError("GridFunction: grid belongs to a different arc");
      return [self = *this](double t) { return self(t); };
    }
    return [self = *this, p](double t) { return self(omega_of_theta(p, t)); };
  }

private:
  void validate() const {
    if (nodes_.size() != values_.size())
      throw GridMismatchError("GridFunction: nodes and values differ in length");
    if (nodes_.size() < 2) throw GridMismatchError("GridFunction: need at least two nodes");
    double lo = 0.0, hi = 0.0;
    switch (kind_) {
    case DomainKind::theta_arc:
      if (std::isnan(alpha_)) throw GridMismatchError("GridFunction: theta-arc grid needs alpha");
      lo = alpha_;
      hi = two_pi - alpha_;
      break;
    case DomainKind::omega_interval: lo = 0.0; hi = pi; break;
    case DomainKind::full_circle: lo = 0.0; hi = two_pi; break;
    }
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
      if (!(nodes_[j] > lo && nodes_[j] < hi))
        throw GridMismatchError("GridFunction: node outside the open " +
                                std::string(to_string(kind_)) + " interval");
      if (j > 0 && !(nodes_[j] > nodes_[j - 1]))
        throw GridMismatchError("GridFunction: nodes must be strictly increasing");
      if (!std::isfinite(values_[j].real()) || !std::isfinite(values_[j].imag()))
        throw DomainError("GridFunction: non-finite sample value");
    }
  }

  void classify() {
    const std::size_t n = nodes_.size();
    const double h = nodes_[1] - nodes_[0];
    for (std::size_t j = 1; j < n; ++j)
      if (std::abs(nodes_[j] - nodes_[j - 1] - h) > 1e-12) return;
    if (kind_ == DomainKind::full_circle)
      uniform_ = std::abs(h * n - two_pi) < 1e-10 && nodes_[0] < h;
    else if (kind_ == DomainKind::omega_interval)
      uniform_ = std::abs(h * n - pi) < 1e-10 && std::abs(nodes_[0] - 0.5 * h) < 1e-12;
  }

  // barycentric formula for equispaced periodic data (even count: cot, odd: csc)
  static cplx trig_barycentric(const std::vector<double>& x, const std::vector<cplx>& v, double t) {
    const std::size_t n = x.size();
    cplx num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double d = 0.5 * (t - x[j]);
      const double s = std::sin(d);
      if (std::abs(s) < 1e-15) return v[j];
      const double k = ((j % 2) ? -1.0 : 1.0) * ((n % 2) ? 1.0 / s : std::cos(d) / s);
      num += k * v[j];
      den += k;
    }
    return num / den;
  }

  cplx trig_eval(double t) const { return trig_barycentric(nodes_, values_, t); }

  cplx even_trig_eval(double t) const { return trig_barycentric(mirror_nodes_, mirror_values_, t); }

  void build_mirror() {
    const std::size_t n = nodes_.size();
    mirror_nodes_.resize(2 * n);
    mirror_values_.resize(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      mirror_nodes_[j] = nodes_[j];
      mirror_values_[j] = values_[j];
      mirror_nodes_[2 * n - 1 - j] = two_pi - nodes_[j];
      mirror_values_[2 * n - 1 - j] = values_[j];
    }
  }

  void build_spline() {
    // natural cubic spline: second derivatives m_j from a tridiagonal system
    const std::size_t n = nodes_.size();
    m_.assign(n, 0.0);
    if (n < 3) return;
    std::vector<double> c(n, 0.0);
    std::vector<cplx> d(n, 0.0);
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double h0 = nodes_[j] - nodes_[j - 1], h1 = nodes_[j + 1] - nodes_[j];
      const double diag = 2.0 * (h0 + h1) - h0 * c[j - 1];
      const cplx rhs = 6.0 * ((values_[j + 1] - values_[j]) / h1 - (values_[j] - values_[j - 1]) / h0);
      c[j] = h1 / diag;
      d[j] = (rhs - h0 * d[j - 1]) / diag;
    }
    for (std::size_t j = n - 2; j >= 1; --j) m_[j] = d[j] - c[j] * m_[j + 1];
  }

  cplx spline_eval(double t) const {
    // constant continuation outside the sampled range
    if (t <= nodes_.front()) return values_.front();
    if (t >= nodes_.back()) return values_.back();
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const double h = nodes_[j + 1] - nodes_[j];
    const double a = (nodes_[j + 1] - t) / h, b = (t - nodes_[j]) / h;
    return a * values_[j] + b * values_[j + 1] +
           ((a * a * a - a) * m_[j] + (b * b * b - b) * m_[j + 1]) * (h * h / 6.0);
  }

  DomainKind kind_;
  std::vector<double> nodes_;
  std::vector<cplx> values_;
  double alpha_;
  bool uniform_ = false;
  std::vector<cplx> m_;
  std::vector<double> mirror_nodes_;
  std::vector<cplx> mirror_values_;
};

} // namespace arcpoly
