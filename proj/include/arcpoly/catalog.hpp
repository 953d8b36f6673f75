#pragma once

// Built-in test functions on the arc, each tagged with the angles where it is
// not smooth so that quadrature can be graded there.

#include <arcpoly/arc_geometry.hpp>
#include <arcpoly/errors.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace arcpoly {

struct TestFunction {
  std::string id;
  std::function<cplx(double)> eval; ///< f(e^{i theta}) as a function of theta
  std::vector<double> marks;        ///< interior angles of non-smoothness
  int poly_degree = -1;             ///< degree if f is an algebraic polynomial, else -1

  cplx operator()(double theta) const { return eval(theta); }
};

/// exp(z) restricted to the arc.
inline TestFunction analytic_exp() {
  return {"analytic", [](double t) { return std::exp(std::polar(1.0, t)); }, {}, -1};
}

/// sign(theta - pi).
inline TestFunction jump_sign() {
  return {"jump", [](double t) { return cplx(t < pi ? -1.0 : (t > pi ? 1.0 : 0.0)); }, {pi}, -1};
}

/// |theta - pi|^{-exponent}; lies in L^p(w_alpha) exactly when p * exponent < 1.
inline TestFunction singular_power(double exponent = 0.2) {
  return {"singular",
          [exponent](double t) {
            const double d = std::abs(t - pi);
            return cplx(d > 0.0 ? std::pow(d, -exponent) : 0.0);
          },
          {pi},
          -1};
}

/// sum_k c_k z^k with the given coefficients (ascending powers).
inline TestFunction algebraic_polynomial(std::vector<cplx> coeffs, std::string id = "poly") {
  const int deg = static_cast<int>(coeffs.size()) - 1;
  return {std::move(id),
          [c = std::move(coeffs)](double t) {
            const cplx z = std::polar(1.0, t);
            cplx acc = 0.0;
            for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
            return acc;
          },
          {},
          deg};
}

/// C-infinity bump exp(1 - 1/(1 - u^2)), u = (theta - center) / half_width.
inline TestFunction smooth_bump(double center, double half_width, std::string id = "bump") {
  return {std::move(id),
          [center, half_width](double t) {
            const double u = (t - center) / half_width;
            if (std::abs(u) >= 1.0) return cplx(0.0);
            return cplx(std::exp(1.0 - 1.0 / (1.0 - u * u)));
          },
          {center - half_width, center + half_width},
          -1};
}

/// Bump of half-width 2^{-k} whose support ends 2^{-k-1} away from e^{i alpha}.
inline TestFunction endpoint_bump(const ArcParams& p, int k) {
  const double w = std::ldexp(1.0, -k);
  return smooth_bump(p.alpha() + 1.5 * w, w, "endpoint-bump-" + std::to_string(k));
}

/// sum_{|k| <= degree} c_k e^{i k theta} with standard normal complex c_k from `seed`.
inline TestFunction random_trig_polynomial(std::uint64_t seed, int degree = 5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> c(2 * degree + 1);
  for (auto& x : c) x = cplx(g(rng), g(rng));
  return {"trig-" + std::to_string(seed),
          [c, degree](double t) {
            cplx acc = 0.0;
            for (int k = -degree; k <= degree; ++k) acc += c[k + degree] * std::polar(1.0, k * t);
            return acc;
          },
          {},
          -1};
}

inline TestFunction constant_one() {
  return {"one", [](double) { return cplx(1.0); }, {}, 0};
}

inline TestFunction zero_function() {
  return {"zero", [](double) { return cplx(0.0); }, {}, 0};
}

/// Looks up the function ids accepted on the command line:
/// analytic, jump, singular, one, zero, poly3, bump, endpoint-bump-<k>, trig-<seed>.
inline TestFunction function_by_id(const std::string& id, const ArcParams& p) {
  if (id == "analytic") return analytic_exp();
  if (id == "jump") return jump_sign();
  if (id == "singular") return singular_power();
  if (id == "one") return constant_one();
  if (id == "zero") return zero_function();
  if (id == "poly3") return algebraic_polynomial({1.0, cplx(0.5, -0.25), 0.0, cplx(-0.3, 0.2)}, "poly3");
  if (id == "bump") return smooth_bump(pi, 0.5 * (pi - p.alpha()));
  const std::string eb = "endpoint-bump-", tr = "trig-";
  if (id.rfind(eb, 0) == 0) return endpoint_bump(p, std::stoi(id.substr(eb.size())));
  if (id.rfind(tr, 0) == 0) return random_trig_polynomial(std::stoull(id.substr(tr.size())));
  throw DomainError("unknown function id '" + id + "'");
}

/// A mixed family of `count` functions (jump, singular, analytic, bumps,
/// polynomials, then seeded trigonometric polynomials).
inline std::vector<TestFunction> mixed_family(const ArcParams& p, int count, std::uint64_t seed) {
  std::vector<TestFunction> fam{jump_sign(),
                                singular_power(),
                                analytic_exp(),
                                smooth_bump(pi, 0.5 * (pi - p.alpha())),
                                smooth_bump(pi + 0.4 * (pi - p.alpha()), 0.2 * (pi - p.alpha()), "bump-off"),
                                endpoint_bump(p, 2),
                                algebraic_polynomial({1.0, cplx(0.5, -0.25), 0.0, cplx(-0.3, 0.2)}, "poly3"),
                                constant_one()};
  for (std::uint64_t s = seed; static_cast<int>(fam.size()) < count; ++s)
    fam.push_back(random_trig_polynomial(s));
  fam.resize(count);
  return fam;
}

} // namespace arcpoly
