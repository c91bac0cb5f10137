#pragma once
// Limiting spectral law of the nonlinear Gram ensemble via its Stieltjes
// transform G(z) = int d mu(t) / (t - z), Im G > 0 in the upper half-plane.
//
// The self-consistent equation couples G to the companion transform
// Gt = -(1 - phi/psi)/z + (phi/psi) G through
//
//   H/z = 1/z + G Gt (theta1 - theta2)/psi + G Gt theta2/(psi - z G Gt theta2),
//   H   = (psi - 1)/psi - z G / psi.
//
// Clearing denominators turns this into a quartic in G whose coefficients are
// quadratic polynomials in z; the quartic degenerates to the Marchenko-Pastur
// quadratic at theta2 = 0 and to a cubic at theta1 = theta2.  Root selection
// is by the transcendental residual plus half-plane positivity, with
// continuation from deep in the upper half-plane to stay on the physical
// branch.  The same coefficient polynomials drive an exact Laurent-series
// moment extraction used to cross-check the combinatorial moment formula.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "nlspec/activation.hpp"  // ValidationError, NumericalError
#include "nlspec/polyroots.hpp"

namespace nlspec {

struct LawParams {
  double theta1 = 1.0;
  double theta2 = 0.0;
  double phi = 1.0;
  double psi = 1.0;

  void validate() const {
    for (double v : {theta1, theta2, phi, psi})
      if (!std::isfinite(v)) throw ValidationError("LawParams: non-finite");
    if (!(theta1 > 0.0))
      throw ValidationError("LawParams: theta1 must be positive");
    if (theta2 < 0.0 || theta2 > theta1 * (1.0 + 1e-9) + 1e-12)
      throw ValidationError("LawParams: need 0 <= theta2 <= theta1");
    if (!(phi > 0.0) || !(psi > 0.0))
      throw ValidationError("LawParams: phi and psi must be positive");
  }

  double atom_at_zero() const { return std::max(0.0, 1.0 - psi / phi); }
};

// ---- Quartic coefficients ----------------------------------------------------

// c[j][t] is the z^t coefficient of the G^j term; the equation is
//   sum_{j,t} c[j][t] z^t G^j = 0.
// Kept generic so the same table feeds complex evaluation and exact rational
// series expansion.
template <class T>
std::array<std::array<T, 3>, 5> equation_coefficient_table(const T& t1,
                                                           const T& t2,
                                                           const T& phi,
                                                           const T& psi) {
  const T z0(0);
  std::array<std::array<T, 3>, 5> c{};
  c[0] = {-psi * psi * psi, z0, z0};
  c[1] = {-psi * (phi * psi * t1 - phi * t2 - psi * psi * t1 + psi * t2),
          -psi * psi * psi, z0};
  c[2] = {phi * phi * t1 * t2 - phi * phi * t2 * t2 -
              T(2) * phi * psi * t1 * t2 + T(2) * phi * psi * t2 * t2 +
              psi * psi * t1 * t2 - psi * psi * t2 * t2,
          -phi * psi * psi * t1 + T(2) * phi * psi * t2 - psi * psi * t2, z0};
  c[3] = {z0,
          T(2) * phi * t2 * (phi * t1 - phi * t2 - psi * t1 + psi * t2),
          phi * psi * t2};
  c[4] = {z0, z0, phi * phi * t2 * (t1 - t2)};
  return c;
}

inline std::array<cplx, 5> equation_coefficients(const LawParams& p, cplx z) {
  const auto tab = equation_coefficient_table<double>(p.theta1, p.theta2,
                                                      p.phi, p.psi);
  std::array<cplx, 5> c;
  for (int j = 0; j < 5; ++j)
    c[j] = tab[j][0] + z * (tab[j][1] + z * tab[j][2]);
  return c;
}

// ---- Transcendental form ----------------------------------------------------

inline cplx companion_transform(cplx G, cplx z, const LawParams& p) {
  const double ratio = p.phi / p.psi;
  return -(1.0 - ratio) / z + ratio * G;
}

// Residual of the self-consistent equation; zero (to rounding) on the
// physical branch, generically nonzero on roots introduced by clearing
// denominators.
inline cplx fixed_point_residual(cplx G, cplx z, const LawParams& p) {
  const cplx Gt = companion_transform(G, z, p);
  const cplx H = (p.psi - 1.0) / p.psi - z * G / p.psi;
  const cplx GGt = G * Gt;
  const cplx lhs = H / z;
  const cplx rhs = 1.0 / z + GGt * (p.theta1 - p.theta2) / p.psi +
                   GGt * p.theta2 / (p.psi - z * GGt * p.theta2);
  return lhs - rhs;
}

// ---- Exact moment extraction --------------------------------------------------

// Power series truncated at a fixed length; index = power of w.
template <class T>
struct TruncatedSeries {
  std::vector<T> c;
  explicit TruncatedSeries(std::size_t n) : c(n) {}

  TruncatedSeries mul(const TruncatedSeries& o) const {
    TruncatedSeries r(c.size());
    for (std::size_t a = 0; a < c.size(); ++a) {
      if (c[a] == T(0)) continue;
      for (std::size_t b = 0; a + b < c.size() && b < o.c.size(); ++b)
        r.c[a + b] += c[a] * o.c[b];
    }
    return r;
  }

  // this += coef * w^shift * s
  void add_scaled(const T& coef, std::size_t shift, const TruncatedSeries& s) {
    for (std::size_t a = 0; a + shift < c.size() && a < s.c.size(); ++a)
      c[a + shift] += coef * s.c[a];
  }
};

namespace detail {

// Residual of the equation as a series in w = 1/z, multiplied through by w^2:
//   sum_{j,t} c[j][t] w^{2-t} G(w)^j,  G(w) = -sum_q m_q w^{q+1}.
template <class T>
TruncatedSeries<T> equation_series(const std::array<std::array<T, 3>, 5>& tab,
                                   const std::vector<T>& m, std::size_t n) {
  TruncatedSeries<T> G(n), pw(n), res(n);
  for (std::size_t q = 0; q < m.size() && q + 1 < n; ++q)
    G.c[q + 1] = -m[q];
  pw.c[0] = T(1);  // G^0
  for (int j = 0; j < 5; ++j) {
    if (j > 0) pw = pw.mul(G);
    for (int t = 0; t < 3; ++t)
      if (!(tab[j][t] == T(0)))
        res.add_scaled(tab[j][t], std::size_t(2 - t), pw);
  }
  return res;
}

}  // namespace detail

// First q_max moments m_1..m_qmax of the law, extracted order by order from
// the equation's Laurent expansion at infinity.  Each order is affine in the
// next unknown moment, so two evaluations solve it; the zeroth moment must
// come out as the total mass 1, which is asserted.  T = double for numeric
// use or an exact rational type for oracle-grade comparisons.
template <class T>
std::vector<T> moments_from_equation(int q_max, const T& theta1,
                                     const T& theta2, const T& phi,
                                     const T& psi) {
  if (q_max < 1 || q_max > 64)
    throw ValidationError("moments_from_equation: q_max must be in [1,64]");
  const auto tab = equation_coefficient_table<T>(theta1, theta2, phi, psi);
  const std::size_t n = std::size_t(q_max) + 3;
  std::vector<T> m;  // m[0] = mass, m[q] = q-th moment
  for (int k = 0; k <= q_max; ++k) {
    const std::size_t ord = std::size_t(k) + 2;
    std::vector<T> trial = m;
    trial.push_back(T(0));
    const TruncatedSeries<T> A = detail::equation_series<T>(tab, trial, n);
    trial.back() = T(1);
    const TruncatedSeries<T> B = detail::equation_series<T>(tab, trial, n);
    const T b = B.c[ord] - A.c[ord];
    if (b == T(0))
      throw NumericalError("moments_from_equation: degenerate order " +
                           std::to_string(k));
    m.push_back(-A.c[ord] / b);
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (std::abs(m[0] - 1.0) > 1e-12)
      throw NumericalError("moments_from_equation: mass normalization lost");
  } else {
    if (!(m[0] == T(1)))
      throw NumericalError("moments_from_equation: mass normalization lost");
  }
  return {m.begin() + 1, m.end()};
}

inline std::vector<double> moments_from_equation(int q_max,
                                                 const LawParams& p) {
  p.validate();
  return moments_from_equation<double>(q_max, p.theta1, p.theta2, p.phi,
                                       p.psi);
}

// ---- Root selection and continuation ----------------------------------------

class StieltjesSolver {
 public:
  explicit StieltjesSolver(const LawParams& p) : p_(p) {
    p_.validate();
    // crude but reliable right-edge bound: moment growth m_8^{1/8}, doubled
    const std::vector<double> mom = moments_from_equation(8, p_);
    support_bound_ =
        2.0 * std::max(mom[0], std::pow(std::abs(mom[7]), 1.0 / 8.0));
  }

  const LawParams& params() const { return p_; }
  double support_bound() const { return support_bound_; }

  // G at a single point.  With a hint, takes the admissible root nearest to
  // it (continuation step); without one, walks in from deep in the upper
  // half-plane where the physical root is the one matching G ~ -1/z.
  cplx solve(cplx z, std::optional<cplx> hint = std::nullopt) const {
    if (z.imag() == 0.0)
      throw ValidationError("StieltjesSolver: z must be off the real axis");
    if (z.imag() < 0.0) return std::conj(solve(std::conj(z), std::nullopt));
    if (hint) return pick(z, *hint);
    return continue_from_far(z);
  }

 private:
  std::vector<cplx> admissible_roots(cplx z) const {
    const auto c = equation_coefficients(p_, z);
    const std::vector<cplx> roots =
        solve_polynomial({c[0], c[1], c[2], c[3], c[4]});
    std::vector<cplx> ok;
    for (cplx r : roots) {
      if (r.imag() < -1e-12) continue;
      const cplx res = fixed_point_residual(r, z, p_);
      if (std::abs(res) < residual_tol_) ok.push_back(r);
    }
    if (ok.empty())
      throw NumericalError("StieltjesSolver: no admissible root at z=(" +
                           std::to_string(z.real()) + "," +
                           std::to_string(z.imag()) + ")");
    return ok;
  }

  cplx pick(cplx z, cplx hint) const {
    const std::vector<cplx> ok = admissible_roots(z);
    cplx best = ok[0];
    double bd = std::abs(ok[0] - hint);
    for (cplx r : ok) {
      const double d = std::abs(r - hint);
      if (d < bd) {
        bd = d;
        best = r;
      }
    }
    return best;
  }

  // the admissible root closest to the -1/z asymptote, with a separation
  // gate so a near-tie is never silently resolved
  std::optional<cplx> asymptotic_pick(cplx z) const {
    const std::vector<cplx> ok = admissible_roots(z);
    cplx g = ok[0];
    double best = 1e300, second = 1e300;
    for (cplx r : ok) {
      const double d = std::abs(r + 1.0 / z);
      if (d < best) {
        second = best;
        best = d;
        g = r;
      } else {
        second = std::min(second, d);
      }
    }
    if (ok.size() == 1 || second > 3.0 * best) return g;
    return std::nullopt;
  }

  cplx continue_from_far(cplx z_target) const {
    // outside the far radius every non-physical branch is O(1/|z|) away from
    // -1/z while the physical one is O(1/|z|^2): select directly
    if (std::abs(z_target) >= 10.0 * (support_bound_ + 1.0)) {
      const std::optional<cplx> direct = asymptotic_pick(z_target);
      if (direct) return *direct;
      throw NumericalError("StieltjesSolver: ambiguous branch at far z");
    }
    // seed where |G + 1/z| separates the physical root by orders of magnitude
    const double re0 = support_bound_ + 1.0;
    double im0 = 10.0;
    cplx g(0.0, 0.0);
    for (;;) {
      const std::optional<cplx> sel = asymptotic_pick(cplx(re0, im0));
      if (sel) {
        g = *sel;
        break;
      }
      im0 *= 10.0;
      if (im0 > 1e4)
        throw NumericalError("StieltjesSolver: ambiguous far-field root");
    }
    // walk to the target: linear in Re, geometric in Im (both ends positive)
    const int steps = 25;
    const double lr0 = std::log(im0), lr1 = std::log(z_target.imag());
    for (int k = 1; k <= steps; ++k) {
      const double t = double(k) / steps;
      const cplx zk(re0 + t * (z_target.real() - re0),
                    std::exp(lr0 + t * (lr1 - lr0)));
      g = pick(zk, g);
    }
    return g;
  }

  LawParams p_;
  double support_bound_ = 0.0;
  double residual_tol_ = 1e-9;
};

inline cplx solve_G(cplx z, const LawParams& p,
                    std::optional<cplx> hint = std::nullopt) {
  return StieltjesSolver(p).solve(z, hint);
}

// ---- Density reconstruction ---------------------------------------------------

struct DensityOptions {
  int n_base = 3000;          // base grid resolution
  double margin = 0.35;       // grid overhang beyond [0, right bound]
  double eta_floor = 1e-4;    // smallest imaginary offset
  int refine_levels = 3;      // curvature-driven midpoint insertion passes
  double curvature_tol = 5e-4;
  double support_tol = 1e-6;  // density level defining the support edges
};

struct DensityResult {
  std::vector<double> x;    // ascending, includes refined points
  std::vector<double> rho;  // continuous part; atom reported separately
  double atom = 0.0;
  double eta = 0.0;
  double support_lo = 0.0;
  double support_hi = 0.0;
  double mass = 0.0;  // trapezoid integral of rho (excludes the atom)
  double mean = 0.0;  // trapezoid integral of x rho
};

namespace detail {

// Im(G + atom/z)/pi at z = x + i eta: Poisson-smoothed continuous density
// with the atom's kernel removed (it is reported as a point mass instead).
inline double smoothed_density(cplx g, double x, double eta, double atom) {
  const cplx z(x, eta);
  return (g + atom / z).imag() / std::numbers::pi;
}

}  // namespace detail

namespace detail {

inline DensityResult density_on_range(const StieltjesSolver& solver,
                                      const DensityOptions& opt, double lo,
                                      double hi) {
  const LawParams& p = solver.params();
  const double atom = p.atom_at_zero();

  DensityResult out;
  out.atom = atom;

  const int n = opt.n_base;
  const double spacing = (hi - lo) / (n - 1);
  const double eta = std::max(opt.eta_floor, 0.5 * spacing);
  out.eta = eta;

  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = lo + i * spacing;

  // two tracks (eta and 2 eta) for Richardson extrapolation of the kernel
  // bias; each sweeps the grid right-to-left with the previous root as hint
  cplx g1 = solver.solve(cplx(hi, eta));
  cplx g2 = solver.solve(cplx(hi, 2.0 * eta));
  std::vector<double> rho(n);
  std::vector<cplx> g1s(n), g2s(n);
  for (int i = n - 1; i >= 0; --i) {
    g1 = solver.solve(cplx(xs[i], eta), g1);
    g2 = solver.solve(cplx(xs[i], 2.0 * eta), g2);
    g1s[i] = g1;
    g2s[i] = g2;
    const double r1 = detail::smoothed_density(g1, xs[i], eta, atom);
    const double r2 = detail::smoothed_density(g2, xs[i], 2.0 * eta, atom);
    rho[i] = std::max(0.0, 2.0 * r1 - r2);
  }

  // refine where the second difference is large (edges, sharp bulk features)
  for (int level = 0; level < opt.refine_levels; ++level) {
    std::vector<double> nx;
    std::vector<double> nr;
    std::vector<cplx> n1, n2;
    bool any = false;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
      nx.push_back(xs[i]);
      nr.push_back(rho[i]);
      n1.push_back(g1s[i]);
      n2.push_back(g2s[i]);
      const bool curv_l =
          i > 0 && std::abs(rho[i + 1] - 2.0 * rho[i] + rho[i - 1]) >
                       opt.curvature_tol;
      const bool curv_r =
          i + 2 < xs.size() &&
          std::abs(rho[i + 2] - 2.0 * rho[i + 1] + rho[i]) > opt.curvature_tol;
      const double gap = xs[i + 1] - xs[i];
      if ((curv_l || curv_r) && gap > eta / 4.0) {
        const double xm = 0.5 * (xs[i] + xs[i + 1]);
        const cplx gm1 = solver.solve(cplx(xm, eta), g1s[i]);
        const cplx gm2 = solver.solve(cplx(xm, 2.0 * eta), g2s[i]);
        const double r1 = detail::smoothed_density(gm1, xm, eta, atom);
        const double r2 = detail::smoothed_density(gm2, xm, 2.0 * eta, atom);
        nx.push_back(xm);
        nr.push_back(std::max(0.0, 2.0 * r1 - r2));
        n1.push_back(gm1);
        n2.push_back(gm2);
        any = true;
      }
    }
    nx.push_back(xs.back());
    nr.push_back(rho.back());
    n1.push_back(g1s.back());
    n2.push_back(g2s.back());
    xs.swap(nx);
    rho.swap(nr);
    g1s.swap(n1);
    g2s.swap(n2);
    if (!any) break;
  }

  // support edges: outermost grid points where the density clears the floor
  std::size_t il = 0, ir = xs.size() - 1;
  while (il < xs.size() && rho[il] < opt.support_tol) ++il;
  while (ir > 0 && rho[ir] < opt.support_tol) --ir;
  if (il >= ir) {
    throw NumericalError("compute_density: no bulk support found");
  }
  out.support_lo = xs[il];
  out.support_hi = xs[ir];

  // trapezoid mass and first moment of the continuous part
  double mass = 0.0, mean = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double h = xs[i + 1] - xs[i];
    mass += 0.5 * h * (rho[i] + rho[i + 1]);
    mean += 0.5 * h * (xs[i] * rho[i] + xs[i + 1] * rho[i + 1]);
  }
  out.mass = mass;
  out.mean = mean;
  out.x = std::move(xs);
  out.rho = std::move(rho);
  return out;
}

}  // namespace detail

inline DensityResult compute_density(const LawParams& p,
                                     const DensityOptions& opt = {}) {
  p.validate();
  if (opt.n_base < 16)
    throw ValidationError("compute_density: n_base too small");
  const StieltjesSolver solver(p);

  // grid with margins; the Poisson kernel at finite eta leaks mass past the
  // edges, and the overhang keeps the trapezoid integral complete.  The
  // moment-based right bound can undershoot for extreme aspect ratios, so if
  // the density has not decayed at the grid end, widen and retry.
  double bound = solver.support_bound();
  for (int attempt = 0;; ++attempt) {
    const DensityResult out =
        detail::density_on_range(solver, opt, -opt.margin, bound + opt.margin);
    const bool clipped = out.rho.front() >= opt.support_tol ||
                         out.rho.back() >= opt.support_tol;
    if (!clipped) return out;
    if (attempt >= 3)
      throw NumericalError("compute_density: support exceeds widened grid");
    bound *= 1.6;
  }
}

// ---- Ridge trace --------------------------------------------------------------

// Limit of (1/m) tr (companion Gram + gamma)^{-1}: the companion-side
// Stieltjes transform evaluated at -gamma, reached just off the negative real
// axis where the law has no support.
inline double ridge_trace(const LawParams& p, double gamma) {
  p.validate();
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw ValidationError("ridge_trace: gamma must be positive");
  const StieltjesSolver solver(p);
  const cplx z(-gamma, 1e-6);
  const cplx g = solver.solve(z);
  const cplx gt = companion_transform(g, z, p);
  return gt.real();
}

}  // namespace nlspec
