// A short tour: orthonormal polynomials on an arc, a Fourier partial sum, the
// arc Hilbert transform and a basis for a perturbed measure.

#include <arcpoly/arcpoly.hpp>

#include <cstdio>

int main() {
  using namespace arcpoly;

  const ArcParams arc(pi / 2);
  std::printf("arc (alpha, 2pi - alpha) with alpha = %.6f\n", arc.alpha());
  std::printf("  gamma = %.6f, K = %.6f, |beta| = %.6f\n", arc.gamma(), arc.big_k(), arc.beta_im());

  // psi_n at the arc midpoint
  PolySystem sys(arc, 64);
  for (int n : {0, 1, 2, 10, 64}) {
    const cplx v = psi_onarc(sys, n, pi);
    std::printf("  psi_%-2d(-1) = % .10f %+.10fi\n", n, v.real(), v.imag());
  }

  // Fourier partial sums of a jump function
  const TestFunction jump = function_by_id("jump", arc);
  const int degrees[] = {4, 16, 64};
  for (const auto& pt : convergence_curve(sys, jump, 2.0, degrees))
    std::printf("  ||f - S_%d f||_2 = %.6e\n", pt.n, pt.error);

  // principal value transform of f = 1 at the midpoint, two schemes
  PVScheme exclusion;
  exclusion.method = PVMethod::symmetric_exclusion;
  const auto one = [](double) { return cplx(1.0); };
  const cplx h1 = hilbert_arc(arc, one, pi);
  const cplx h2 = hilbert_arc(arc, one, pi, exclusion);
  std::printf("  H[1](-1) = % .12f %+.12fi (subtraction)\n", h1.real(), h1.imag());
  std::printf("  H[1](-1) = % .12f %+.12fi (exclusion)\n", h2.real(), h2.imag());

  // orthonormal basis for (2 + sin theta) w_alpha(theta) d theta
  const PerturbedBasis basis = build_perturbed_basis(measure_by_id(arc, "2+sin"), 40);
  std::printf("  perturbed basis: Gram residual %.2e, condition estimate %.2e\n", basis.gram_residual(),
              basis.condition_estimate());
  return 0;
}
