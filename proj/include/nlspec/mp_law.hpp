#pragma once
// The Marchenko-Pastur family: closed-form density, support, atom, Stieltjes
// transform, moments (exact elsewhere, double here), plus an edge-aware
// integrator and a tabulated CDF.  Serves as the analytic reference law for
// the theta2 = 0 regime and for statistical comparisons against samples.
//
// Conventions: shape = (rows)/(columns) aspect of the Gram matrix whose
// spectrum we describe, scale = entry variance.  The bulk density lives on
// [scale (1-sqrt(shape))^2, scale (1+sqrt(shape))^2]; for shape > 1 an atom
// of mass 1 - 1/shape sits at zero.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nlspec/activation.hpp"  // ValidationError

namespace nlspec {

class MarchenkoPastur {
 public:
  MarchenkoPastur(double shape, double scale) : shape_(shape), scale_(scale) {
    if (!(shape > 0.0) || !std::isfinite(shape))
      throw ValidationError("MarchenkoPastur: shape must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw ValidationError("MarchenkoPastur: scale must be positive");
    const double rs = std::sqrt(shape_);
    lo_ = scale_ * (1.0 - rs) * (1.0 - rs);
    hi_ = scale_ * (1.0 + rs) * (1.0 + rs);
  }

  double shape() const { return shape_; }
  double scale() const { return scale_; }
  double support_lo() const { return lo_; }
  double support_hi() const { return hi_; }
  double atom() const { return shape_ > 1.0 ? 1.0 - 1.0 / shape_ : 0.0; }

  // continuous part only; the atom (if any) is reported separately
  double density(double x) const {
    if (x <= lo_ || x >= hi_) return 0.0;
    return std::sqrt((hi_ - x) * (x - lo_)) /
           (2.0 * std::numbers::pi * shape_ * scale_ * x);
  }

  // G(z) = int d mu(t) / (t - z) for Im z != 0, from the quadratic
  //   shape scale z G^2 + (z - scale (1 - shape)) G + 1 = 0
  // taking the branch with Im G > 0 in the upper half-plane.
  std::complex<double> stieltjes(std::complex<double> z) const {
    if (z.imag() == 0.0)
      throw ValidationError("MarchenkoPastur::stieltjes: z must be off-axis");
    const bool flip = z.imag() < 0.0;
    if (flip) z = std::conj(z);
    const std::complex<double> a = shape_ * scale_ * z;
    const std::complex<double> b = z - scale_ * (1.0 - shape_);
    const std::complex<double> disc = std::sqrt(b * b - 4.0 * a);
    std::complex<double> g1 = (-b + disc) / (2.0 * a);
    std::complex<double> g2 = (-b - disc) / (2.0 * a);
    std::complex<double> g = (g1.imag() > g2.imag()) ? g1 : g2;
    return flip ? std::conj(g) : g;
  }

  // int f(x) d mu_cont(x) over the bulk via the substitution
  // x = lo + (hi-lo) sin^2 t, which absorbs both square-root edges and
  // leaves a smooth even-periodic integrand; the caller adds atom terms.
  // The edge roots are cancelled symbolically:
  //   density(x) dx = w^2 s^2 c^2 / (pi shape scale x) dt,
  // which stays finite at t = 0 even when the support touches zero (the
  // square case, where the density itself has an inverse-root pole).
  template <class F>
  double expect(F&& f, int n = 4001) const {
    const double w = hi_ - lo_;
    const double h = (std::numbers::pi / 2.0) / (n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = i * h;
      const double s = std::sin(t), c = std::cos(t);
      const double x = lo_ + w * s * s;
      const double val = transformed_weight(x, s, c) * f(x);
      acc += (i == 0 || i == n - 1) ? 0.5 * val : val;
    }
    return acc * h;
  }

  // weight of the substitution x = lo + w sin^2 t at one node:
  // density(x) dx/dt = w^2 s^2 c^2 / (pi shape scale x).  The s^2 cancels
  // against x when the lower edge sits at zero (shape = 1), which is exactly
  // where the naive product would evaluate 0 * inf.
  double transformed_weight(double x, double s, double c) const {
    const double w = hi_ - lo_;
    if (x == 0.0) return w * c * c / (std::numbers::pi * shape_ * scale_);
    return w * w * s * s * c * c / (std::numbers::pi * shape_ * scale_ * x);
  }

  double moment(int q) const {
    if (q < 1) throw ValidationError("MarchenkoPastur::moment: q >= 1");
    // sum_k N(q,k) shape^k with N evaluated by the multiplicative recurrence
    double acc = 0.0, nar = 1.0;  // N(q,0) = 1
    for (int k = 0; k <= q - 1; ++k) {
      if (k > 0)
        nar *= double(q - k + 1) * double(q - k) / (double(k + 1) * double(k));
      acc += nar * std::pow(shape_, k);
    }
    return std::pow(scale_, q) * acc;
  }

  // CDF including the atom at zero, from a tabulated cumulative integral in
  // the sin^2 substitution variable (smooth, so the trapezoid converges fast).
  struct Cdf {
    double lo, hi, atom;
    std::vector<double> cum;  // cumulative mass at t_i = i h, i = 0..n-1
    double operator()(double x) const {
      if (x < 0.0) return 0.0;
      if (x <= lo) return atom;
      if (x >= hi) return 1.0;
      const int n = int(cum.size());
      const double t = std::asin(std::sqrt((x - lo) / (hi - lo)));
      const double u = t / ((std::numbers::pi / 2.0) / (n - 1));
      const int i = std::min(int(u), n - 2);
      const double frac = u - i;
      return atom + cum[i] + frac * (cum[i + 1] - cum[i]);
    }
  };

  Cdf cdf(int n = 4001) const {
    Cdf c;
    c.lo = lo_;
    c.hi = hi_;
    c.atom = atom();
    c.cum.resize(n);
    const double w = hi_ - lo_;
    const double h = (std::numbers::pi / 2.0) / (n - 1);
    double acc = 0.0;
    double prev = transformed_weight(lo_, 0.0, 1.0);
    c.cum[0] = 0.0;
    for (int i = 1; i < n; ++i) {
      const double t = i * h;
      const double s = std::sin(t), co = std::cos(t);
      const double x = lo_ + w * s * s;
      const double val = transformed_weight(x, s, co);
      acc += 0.5 * (prev + val) * h;
      prev = val;
      c.cum[i] = acc;
    }
    // renormalize the continuous mass to exactly 1 - atom so the CDF tops out
    // at 1 (discretization error is ~1e-10 at the default resolution)
    const double target = 1.0 - c.atom;
    if (acc > 0.0)
      for (double& v : c.cum) v *= target / acc;
    return c;
  }

 private:
  double shape_, scale_, lo_, hi_;
};

}  // namespace nlspec
