#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace arcpoly {

/// Nodes and weights of a one-dimensional rule on a finite interval.
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R acc{};
    for (std::size_t j = 0; j < nodes.size(); ++j) acc += weights[j] * f(nodes[j]);
    return acc;
  }

  void append(const Rule1D& other) {
    nodes.insert(nodes.end(), other.nodes.begin(), other.nodes.end());
    weights.insert(weights.end(), other.weights.begin(), other.weights.end());
  }
};

/// Gauss-Legendre rule on [-1, 1], nodes in increasing order.
///
/// Newton iteration on the three-term recurrence for P_n, started from the
/// Tricomi asymptotic guess. O(n^2), accurate to a few ulps for n up to ~10^4.
inline Rule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  Rule1D rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  const double nn = n;
  for (int i = 0; i < half; ++i) {
    const double t = std::numbers::pi * (4.0 * (i + 1) - 1.0) / (4.0 * nn + 2.0);
    double x = (1.0 - (nn - 1.0) / (8.0 * nn * nn * nn)) * std::cos(t);
    double dp = 0.0;
    for (int it = 0; it < 20; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = nn * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15) break;
    }
    // one more derivative evaluation at the converged root
    {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = nn * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

/// Gauss-Legendre rule mapped affinely onto [a, b].
inline Rule1D gauss_legendre(int n, double a, double b) {
  Rule1D rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t j = 0; j < rule.size(); ++j) {
    rule.nodes[j] = mid + half * rule.nodes[j];
    rule.weights[j] *= half;
  }
  return rule;
}

/// Layout of a composite rule with geometric refinement toward marked points.
struct GradedRuleOptions {
  int base_panels = 4;      ///< equal panels per smooth stretch
  int nodes_per_panel = 24; ///< Gauss-Legendre points on every panel
  int levels = 14;          ///< geometric sub-panels next to a marked point
  double ratio = 0.2;       ///< length ratio between consecutive sub-panels
};

/// Composite Gauss-Legendre rule on [a, b].
///
/// The interval is first cut at every point of `cuts` lying inside it; each
/// resulting stretch is split into `base_panels` equal panels, and panels that
/// touch a point of `graded` (which may include a or b) are further cut
/// geometrically toward it. Integrands with a jump, an integrable power or log
/// singularity, or a near-singularity at a graded point converge rapidly.
inline Rule1D composite_rule(double a, double b, std::span<const double> cuts,
                             std::span<const double> graded, const GradedRuleOptions& opts = {}) {
  if (!(b > a)) throw std::invalid_argument("composite_rule: empty interval");
  if (opts.base_panels < 1 || opts.nodes_per_panel < 1 || opts.levels < 0 ||
      !(opts.ratio > 0.0 && opts.ratio < 1.0))
    throw std::invalid_argument("composite_rule: bad options");

  // points closer than a few ulps of their magnitude are merged
  auto same = [](double x, double y) { return std::abs(x - y) <= 1e-15 * std::max(std::abs(x), std::abs(y)); };
  auto is_graded = [&](double x) {
    return std::any_of(graded.begin(), graded.end(), [&](double m) { return same(m, x); });
  };

  std::vector<double> pts{a, b};
  for (double m : cuts)
    if (m > a && m < b && !same(m, a) && !same(m, b)) pts.push_back(m);
  for (double m : graded)
    if (m > a && m < b && !same(m, a) && !same(m, b)) pts.push_back(m);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(), same), pts.end());

  const Rule1D ref = gauss_legendre(opts.nodes_per_panel);
  auto emit = [&](Rule1D& out, double l, double r) {
    const double half = 0.5 * (r - l), mid = 0.5 * (r + l);
    for (std::size_t j = 0; j < ref.size(); ++j) {
      const double x = mid + half * ref.nodes[j];
      if (!(x > l && x < r)) continue; // rounded onto an endpoint: panel below resolution
      out.nodes.push_back(x);
      out.weights.push_back(half * ref.weights[j]);
    }
  };

  Rule1D out;
  for (std::size_t c = 0; c + 1 < pts.size(); ++c) {
    const double l = pts[c], r = pts[c + 1];
    const bool left_sing = is_graded(l);
    const bool right_sing = is_graded(r);
    const double width = (r - l) / opts.base_panels;
    for (int p = 0; p < opts.base_panels; ++p) {
      const double pl = l + p * width;
      const double pr = (p + 1 == opts.base_panels) ? r : l + (p + 1) * width;
      const bool gl = left_sing && p == 0;
      const bool gr = right_sing && p + 1 == opts.base_panels;
      if (!gl && !gr) {
        emit(out, pl, pr);
        continue;
      }
      std::vector<double> sub{pl, pr};
      const double len = (gl && gr) ? 0.5 * (pr - pl) : (pr - pl);
      if (gl && gr) sub.push_back(0.5 * (pl + pr));
      double scale = 1.0;
      // sub-panels must stay wide compared with the spacing of doubles near
      // the graded point, or nodes would round onto it
      for (int k = 0; k < opts.levels; ++k) {
        scale *= opts.ratio;
        const double d = len * scale;
        if (gl && d > 1e-11 * std::abs(pl)) sub.push_back(pl + d);
        if (gr && d > 1e-11 * std::abs(pr)) sub.push_back(pr - d);
      }
      std::sort(sub.begin(), sub.end());
      for (std::size_t k = 0; k + 1 < sub.size(); ++k)
        if (sub[k + 1] > sub[k]) emit(out, sub[k], sub[k + 1]);
    }
  }
  return out;
}

/// composite_rule cut and graded at the same points.
inline Rule1D graded_rule(double a, double b, std::span<const double> marks,
                          const GradedRuleOptions& opts = {}) {
  return composite_rule(a, b, marks, marks, opts);
}

} // namespace arcpoly
