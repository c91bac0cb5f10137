#pragma once
// Roots of low-degree complex polynomials via the companion-matrix
// eigenproblem, with a short Newton polish on the original coefficients.
// Degenerate leading coefficients are trimmed relative to the largest
// coefficient, so a quartic whose top terms vanish (e.g. a parameter limit
// that turns it into a quadratic) is solved at its effective degree.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "nlspec/lapack.hpp"

namespace nlspec {

using cplx = std::complex<double>;

struct RootSolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// p(x) = coeffs[0] + coeffs[1] x + ... (ascending powers)
inline cplx polyval(const std::vector<cplx>& coeffs, cplx x) {
  cplx acc(0.0);
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + coeffs[k];
  return acc;
}

inline cplx polyval_deriv(const std::vector<cplx>& coeffs, cplx x) {
  cplx acc(0.0);
  for (std::size_t k = coeffs.size(); k-- > 1;)
    acc = acc * x + double(k) * coeffs[k];
  return acc;
}

// All roots of the effective-degree polynomial.  Coefficients whose magnitude
// is below rel_trim * max|c| are treated as zero when determining the degree.
inline std::vector<cplx> solve_polynomial(std::vector<cplx> coeffs,
                                          double rel_trim = 1e-13) {
  double cmax = 0.0;
  for (const cplx& c : coeffs) cmax = std::max(cmax, std::abs(c));
  if (cmax == 0.0) throw RootSolveError("solve_polynomial: zero polynomial");
  std::size_t deg = coeffs.size() - 1;
  while (deg > 0 && std::abs(coeffs[deg]) < rel_trim * cmax) --deg;
  if (deg == 0)
    throw RootSolveError("solve_polynomial: constant polynomial has no roots");

  const int n = int(deg);
  std::vector<cplx> a(std::size_t(n) * n, cplx(0.0));
  // companion matrix of the monic polynomial (row-major): subdiagonal ones,
  // last column -c_k / c_deg
  for (int i = 1; i < n; ++i) a[std::size_t(i) * n + (i - 1)] = cplx(1.0);
  for (int i = 0; i < n; ++i)
    a[std::size_t(i) * n + (n - 1)] = -coeffs[std::size_t(i)] / coeffs[deg];
  std::vector<cplx> w(n);
  // LAPACKE validates the eigenvector leading dimensions against n even when
  // the vectors are not requested, so hand it real scratch space
  std::vector<cplx> vscratch(std::size_t(n) * n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_ROW_MAJOR, 'N', 'N', n, a.data(), n, w.data(), vscratch.data(), n,
      vscratch.data(), n);
  if (info != 0)
    throw RootSolveError("solve_polynomial: eigenvalue solve failed, info=" +
                         std::to_string(info));

  // two Newton steps against the untrimmed polynomial sharpen the eigenvalue
  // roots to machine accuracy (guarded against a vanishing derivative)
  for (cplx& r : w) {
    for (int it = 0; it < 2; ++it) {
      const cplx d = polyval_deriv(coeffs, r);
      if (std::abs(d) < 1e-300) break;
      const cplx step = polyval(coeffs, r) / d;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      r -= step;
    }
  }
  return w;
}

}  // namespace nlspec
