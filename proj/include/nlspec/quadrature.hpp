#pragma once
// Gauss-Hermite quadrature against the standard normal weight.
//
// Nodes and weights come from the Golub-Welsch eigenproblem of the Jacobi
// matrix for probabilists' Hermite polynomials (zero diagonal, off-diagonal
// sqrt(k)); the weight attached to node i is the squared first component of
// eigenvector i, since the total weight integral is 1 for N(0,1).

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlspec/lapack.hpp"

namespace nlspec {

struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HermiteRule {
  std::vector<double> node;    // standard-normal abscissae, ascending
  std::vector<double> weight;  // positive, sum to 1
};

inline HermiteRule hermite_rule(int n) {
  if (n < 1) throw std::invalid_argument("hermite_rule: order must be >= 1");
  std::vector<double> diag(n, 0.0), off(n > 1 ? n - 1 : 1, 0.0);
  for (int k = 1; k < n; ++k) off[k - 1] = std::sqrt(double(k));
  std::vector<double> vec(std::size_t(n) * n);
  int info = LAPACKE_dstev(LAPACK_ROW_MAJOR, 'V', n, diag.data(), off.data(),
                           vec.data(), n);
  if (info != 0)
    throw QuadratureError("hermite_rule: dstev failed, info=" +
                          std::to_string(info));
  HermiteRule r;
  r.node = diag;  // eigenvalues, ascending
  r.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = vec[std::size_t(i)];  // row 0, column i
    r.weight[i] = v0 * v0;
  }
  return r;
}

// The doubling ladder 63 -> 127 -> ... -> 1023.  Rules are built once and
// shared; construction is thread-safe via the magic static.
inline const HermiteRule& cached_hermite_rule(int n) {
  static const std::map<int, HermiteRule> rules = [] {
    std::map<int, HermiteRule> m;
    for (int k : {63, 127, 255, 511, 1023}) m.emplace(k, hermite_rule(k));
    return m;
  }();
  auto it = rules.find(n);
  if (it == rules.end())
    throw std::invalid_argument("cached_hermite_rule: unsupported order " +
                                std::to_string(n));
  return it->second;
}

struct QuadResult {
  double value = 0.0;
  double rel_change = 0.0;  // relative change of the last doubling step
  bool converged = false;
};

// E[g(Z)], Z ~ N(0,1).  Doubles the rule order from 63 until successive
// values agree to 1e-12 relative (absolute floor 1), capped at 1023 points.
template <class F>
QuadResult gauss_expect_full(F&& g) {
  QuadResult res;
  double prev = 0.0;
  bool have_prev = false;
  for (int n : {63, 127, 255, 511, 1023}) {
    const HermiteRule& r = cached_hermite_rule(n);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += r.weight[i] * g(r.node[i]);
    if (have_prev) {
      res.rel_change = std::abs(s - prev) / std::max(1.0, std::abs(s));
      if (res.rel_change < 1e-12) {
        res.value = s;
        res.converged = true;
        return res;
      }
    }
    prev = s;
    have_prev = true;
    res.value = s;
  }
  res.converged = false;
  return res;
}

// Throwing variant for callers that require convergence.
template <class F>
double gauss_expect(F&& g, const char* what = "gauss_expect") {
  QuadResult r = gauss_expect_full(g);
  if (!r.converged)
    throw QuadratureError(std::string(what) +
                          ": quadrature not converged, rel change " +
                          std::to_string(r.rel_change));
  return r.value;
}

// ---- Exact Gaussian moments over an interval -------------------------------
//
// I_k(a,b) = integral of x^k phi(x) dx over [a,b], phi the standard normal
// density.  Recurrence: I_0 = Phi(b)-Phi(a), I_1 = phi(a)-phi(b),
// I_k = (k-1) I_{k-2} + a^{k-1} phi(a) - b^{k-1} phi(b).
// Used to integrate piecewise-cubic (tabulated) activations exactly, where
// the Gauss-Hermite ladder cannot reach its 1e-12 gate on a C^1 integrand.

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}
inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Moments I_0..I_kmax on [a,b] (a <= b, either may be infinite).
inline std::vector<double> gaussian_interval_moments(double a, double b,
                                                     int kmax) {
  const double pa = std::isinf(a) ? 0.0 : normal_pdf(a);
  const double pb = std::isinf(b) ? 0.0 : normal_pdf(b);
  std::vector<double> I(kmax + 1);
  I[0] = normal_cdf(b) - normal_cdf(a);
  if (kmax >= 1) I[1] = pa - pb;
  auto powm = [](double x, int k, double px) {
    // x^k * phi(x), with the convention 0 for infinite x (phi underflows)
    return px == 0.0 ? 0.0 : std::pow(x, k) * px;
  };
  for (int k = 2; k <= kmax; ++k)
    I[k] = (k - 1) * I[k - 2] + powm(a, k - 1, pa) - powm(b, k - 1, pb);
  return I;
}

}  // namespace nlspec
