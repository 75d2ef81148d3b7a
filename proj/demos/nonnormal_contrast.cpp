// Real extents of F(A) and G(A) for a nonnormal matrix with spectrum 1..5.
// F(A) reaches well past the eigenvalues; G(A) is exactly [1, 5].

#include <cstdio>

#include "fovlab/fovlab.hpp"

int main() {
  using namespace fovlab;
  const Matrix a = gen_prescribed({1.0, 2.0, 3.0, 4.0, 5.0}, 1e3, 2024);
  const GfovResult g = gfov(a);
  const Polygon f = fov_boundary(a, 512);

  const auto [flo, fhi] = f.real_extent();
  const auto [glo, ghi] = g.polygon.real_extent();
  std::printf("condV          %.3e\n", g.eigSystem.cond());
  std::printf("F(A) real part [%.6f, %.6f]\n", flo, fhi);
  std::printf("G(A) real part [%.6f, %.6f]\n", glo, ghi);
  std::printf("overshoot      %.1f%% of the spectral diameter\n",
              100.0 * std::max(glo - flo, fhi - ghi) / (ghi - glo));
  return 0;
}
