#pragma once

#include <arcpoly/arc_geometry.hpp>
#include <arcpoly/errors.hpp>

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace arcpoly {

enum class MeasureKind { base, perturbed };

/// Either w_alpha(theta) d theta or k(theta) w_alpha(theta) d theta with a
/// Lipschitz density k bounded below by k_lower > 0.
///
/// The caller supplies k_lower and the Lipschitz constant; construction checks
/// both against samples of k on a 4096-point interior grid.
class MeasureSpec {
public:
  static constexpr int validation_grid = 4096;

  static MeasureSpec base(const ArcParams& p) { return MeasureSpec(p); }

  static MeasureSpec perturbed(const ArcParams& p, std::function<double(double)> k, double k_lower,
                               double lipschitz_const, std::string id = "custom",
                               std::vector<double> marks = {}) {
    MeasureSpec m(p);
    m.kind_ = MeasureKind::perturbed;
    m.k_ = std::move(k);
    m.k_lower_ = k_lower;
    m.lipschitz_ = lipschitz_const;
    m.id_ = std::move(id);
    m.marks_ = std::move(marks);
    m.validate();
    return m;
  }

  const ArcParams& params() const noexcept { return params_; }
  MeasureKind kind() const noexcept { return kind_; }
  double k_lower() const noexcept { return k_lower_; }
  double lipschitz_const() const noexcept { return lipschitz_; }
  const std::string& id() const noexcept { return id_; }
  /// Angles where k is not smooth.
  const std::vector<double>& marks() const noexcept { return marks_; }

  double k(double theta) const { return kind_ == MeasureKind::base ? 1.0 : k_(theta); }

private:
  explicit MeasureSpec(const ArcParams& p) : params_(p) {}

  void validate() const {
    if (!(k_lower_ > 0.0)) throw DomainError("MeasureSpec: k_lower must be positive");
    if (!(lipschitz_ >= 0.0)) throw DomainError("MeasureSpec: Lipschitz constant must be nonnegative");
    const double a = params_.alpha(), b = two_pi - params_.alpha();
    const int n = validation_grid;
    double prev_t = 0.0, prev_k = 0.0;
    for (int j = 0; j < n; ++j) {
      const double t = a + (b - a) * (j + 0.5) / n;
      const double kv = k_(t);
      if (!std::isfinite(kv)) throw DomainError("MeasureSpec: k is not finite at " + fmt_num(t));
      if (kv < k_lower_ - 1e-9)
        throw DomainError("MeasureSpec: sampled k = " + fmt_num(kv) + " below k_lower at " +
                          fmt_num(t));
      if (j > 0 && std::abs(kv - prev_k) / (t - prev_t) > lipschitz_ * (1.0 + 1e-6) + 1e-12)
        throw DomainError("MeasureSpec: difference quotient exceeds the Lipschitz constant near " +
                          fmt_num(t));
      prev_t = t;
      prev_k = kv;
    }
  }

  ArcParams params_;
  MeasureKind kind_ = MeasureKind::base;
  std::function<double(double)> k_;
  double k_lower_ = 1.0;
  double lipschitz_ = 0.0;
  std::string id_ = "base";
  std::vector<double> marks_;
};

/// The built-in densities: "1", "4", "2+sin", "2+abs".
inline MeasureSpec measure_by_id(const ArcParams& p, const std::string& id) {
  if (id == "base") return MeasureSpec::base(p);
  if (id == "1") return MeasureSpec::perturbed(p, [](double) { return 1.0; }, 1.0, 0.0, id);
  if (id == "4") return MeasureSpec::perturbed(p, [](double) { return 4.0; }, 4.0, 0.0, id);
  if (id == "2+sin") {
    // min of sin over (alpha, 2 pi - alpha): -1 if 3 pi / 2 is inside, else -sin(alpha)
    const double lower = p.alpha() < pi / 2 ? 1.0 : 2.0 - std::sin(p.alpha());
    return MeasureSpec::perturbed(p, [](double t) { return 2.0 + std::sin(t); }, lower, 1.0, id);
  }
  if (id == "2+abs")
    return MeasureSpec::perturbed(p, [](double t) { return 2.0 + std::abs(t - pi); }, 2.0, 1.0, id,
                                  {pi});
  throw DomainError("unknown k id '" + id + "'");
}

} // namespace arcpoly
