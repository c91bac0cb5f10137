#pragma once
// Activation functions and their Gaussian functionals.
//
// theta1 = E[f(s Z)^2], theta2 = (s E[f'(s Z)])^2 and the diagnostic
// theta3 = ((s^2/2) E[f''(s Z)])^2 with s = sigma_w*sigma_x and Z standard
// normal, for f centered so that E[f(s Z)] = 0.  Smooth built-ins integrate
// by the Gauss-Hermite doubling ladder; piecewise kinds (tabulated monotone
// cubic, the experimental relu) integrate segment-exactly against Gaussian
// interval moments, with derivatives replaced by the Stein identities
// E[f'(sZ)] = E[Z f(sZ)]/s and E[f''(sZ)] = E[(Z^2-1) f(sZ)]/s^2.

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlspec/quadrature.hpp"

namespace nlspec {

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- Parameter bags ---------------------------------------------------------

struct ThetaParams {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;  // diagnostic only; never enters the solver
  double sigma_product = 1.0;

  void validate() const {
    if (!(std::isfinite(theta1) && std::isfinite(theta2) &&
          std::isfinite(theta3)))
      throw ValidationError("ThetaParams: non-finite value");
    if (theta1 < 0 || theta2 < 0 || theta3 < 0)
      throw ValidationError("ThetaParams: negative value");
    // Hermite expansion: theta1 is the full centered second moment, theta2
    // only the squared first coefficient.  Tolerate quadrature noise.
    if (theta2 > theta1 * (1.0 + 1e-9) + 1e-12)
      throw ValidationError("ThetaParams: theta2 exceeds theta1");
  }
};

struct ModelShape {
  // Simulation sizes (0 = not set, ratios only).
  int n0 = 0, n1 = 0, m = 0;
  std::vector<int> layer_widths;  // n_1..n_L for multilayer runs
  // Asymptotic ratios: phi = n0/m, psi = n0/n1.
  double phi = 1.0, psi = 1.0;
  std::vector<double> psi_list;  // per-layer psi_p; empty means single layer
  double sigma_w = 1.0, sigma_x = 1.0;

  void validate() const {
    if (!(phi > 0) || !(psi > 0))
      throw ValidationError("ModelShape: phi and psi must be positive");
    for (double p : psi_list)
      if (!(p > 0)) throw ValidationError("ModelShape: psi_p must be positive");
    if (!(sigma_w > 0) || !(sigma_x > 0))
      throw ValidationError("ModelShape: sigma_w, sigma_x must be positive");
    if (n0 < 0 || n1 < 0 || m < 0)
      throw ValidationError("ModelShape: negative size");
    if (n0 > 0 && m > 0 && n1 > 0) {
      const double tol = 1.0 / std::min(n0, std::min(n1, m));
      if (std::abs(double(n0) / m - phi) > tol + 1e-12 ||
          std::abs(double(n0) / n1 - psi) > tol + 1e-12)
        throw ValidationError("ModelShape: sizes inconsistent with ratios");
    }
  }

  // Round sizes from n0 and the ratios.
  static ModelShape from_n0(int n0, double phi, double psi, double sw = 1.0,
                            double sx = 1.0) {
    ModelShape s;
    s.n0 = n0;
    s.n1 = int(std::lround(n0 / psi));
    s.m = int(std::lround(n0 / phi));
    s.phi = phi;
    s.psi = psi;
    s.sigma_w = sw;
    s.sigma_x = sx;
    s.validate();
    return s;
  }
};

// ---- Piecewise polynomial support (tabulated / relu) ------------------------

// f(x) on [breaks[i], breaks[i+1]) is sum_j coeff[i][j] (x - breaks[i])^j.
// The first and last segments extend to -inf / +inf respectively.
struct PiecewisePoly {
  std::vector<double> breaks;               // ascending, size >= 1
  std::vector<std::vector<double>> coeffs;  // size breaks.size()+1 segments

  double operator()(double x) const {
    std::size_t seg =
        std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin();
    const double x0 = seg == 0 ? breaks.front() : breaks[seg - 1];
    double acc = 0.0, p = 1.0;
    for (double c : coeffs[seg]) {
      acc += c * p;
      p *= (x - x0);
    }
    return acc;
  }
};

// Monotone cubic interpolant (Fritsch-Carlson slope limiting), clamped to the
// endpoint values outside the table so the function stays bounded.
inline PiecewisePoly monotone_cubic(const std::vector<double>& x,
                                    const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n)
    throw ValidationError("tabulated activation needs >= 2 knots");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x[i] > x[i - 1]))
      throw ValidationError("tabulated knots must be strictly increasing");
  std::vector<double> h(n - 1), d(n - 1), s(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    d[i] = (y[i + 1] - y[i]) / h[i];
  }
  s[0] = d[0];
  s[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i)
    s[i] = (d[i - 1] * d[i] <= 0.0)
               ? 0.0
               : 3.0 * (h[i - 1] + h[i]) /
                     ((2 * h[i] + h[i - 1]) / d[i - 1] +
                      (h[i] + 2 * h[i - 1]) / d[i]);
  PiecewisePoly p;
  p.breaks = x;
  p.coeffs.resize(n + 1);
  p.coeffs[0] = {y[0]};  // constant left tail
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double c2 = (3 * d[i] - 2 * s[i] - s[i + 1]) / h[i];
    const double c3 = (s[i] + s[i + 1] - 2 * d[i]) / (h[i] * h[i]);
    p.coeffs[i + 1] = {y[i], s[i], c2, c3};
  }
  p.coeffs[n] = {y[n - 1]};  // constant right tail
  return p;
}

// ---- Activation spec --------------------------------------------------------

struct ActivationSpec {
  enum class Kind {
    linear,
    tanh_k,
    shifted_cos,
    smooth_relu,  // softplus log(1+e^{beta x})/beta
    monomial,
    polynomial,
    tabulated,
    relu  // experimental: outside the analyticity assumption
  };

  Kind kind = Kind::linear;
  double center = 0.0;  // additive constant subtracted from raw f
  double scale = 1.0;   // multiplicative output scale (applied after center)
  int degree = 0;       // monomial k / polynomial K; 0 = none
  double beta = 1.0;    // softplus sharpness
  std::vector<double> poly;  // a_1..a_K, so raw(x) = sum a_k x^k
  PiecewisePoly table;       // tabulated interpolant

  bool piecewise() const {
    return kind == Kind::tabulated || kind == Kind::relu;
  }
  bool experimental() const { return kind == Kind::relu; }

  double raw(double x) const {
    switch (kind) {
      case Kind::linear: return x;
      case Kind::tanh_k: return std::tanh(x);
      case Kind::shifted_cos: return std::cos(x);
      case Kind::smooth_relu:
        // stable softplus: log(1+e^t)/beta = (max(t,0)+log1p(e^{-|t|}))/beta
        return (std::max(beta * x, 0.0) + std::log1p(std::exp(-std::abs(beta * x)))) / beta;
      case Kind::monomial: {
        const double v = std::pow(x, degree);
        if (!std::isfinite(v))
          throw NumericalError("monomial activation overflow at x=" +
                               std::to_string(x));
        return v;
      }
      case Kind::polynomial: {
        double acc = 0.0;  // Horner on a_1..a_K, no constant term
        for (std::size_t k = poly.size(); k-- > 0;) acc = acc * x + poly[k];
        acc *= x;
        if (!std::isfinite(acc))
          throw NumericalError("polynomial activation overflow at x=" +
                               std::to_string(x));
        return acc;
      }
      case Kind::tabulated: return table(x);
      case Kind::relu: return x > 0 ? x : 0.0;
    }
    throw std::logic_error("ActivationSpec: unreachable kind");
  }

  // Analytic first/second derivatives of raw f; only valid for smooth kinds.
  double raw_d1(double x) const {
    switch (kind) {
      case Kind::linear: return 1.0;
      case Kind::tanh_k: {
        const double t = std::tanh(x);
        return 1.0 - t * t;
      }
      case Kind::shifted_cos: return -std::sin(x);
      case Kind::smooth_relu: return 1.0 / (1.0 + std::exp(-beta * x));
      case Kind::monomial:
        return degree == 0 ? 0.0 : degree * std::pow(x, degree - 1);
      case Kind::polynomial: {
        double acc = 0.0;
        for (std::size_t k = poly.size(); k-- > 0;)
          acc = acc * x + (double(k) + 1.0) * poly[k];
        return acc;
      }
      default:
        throw std::logic_error("raw_d1 on non-smooth activation");
    }
  }
  double raw_d2(double x) const {
    switch (kind) {
      case Kind::linear: return 0.0;
      case Kind::tanh_k: {
        const double t = std::tanh(x);
        return -2.0 * t * (1.0 - t * t);
      }
      case Kind::shifted_cos: return -std::cos(x);
      case Kind::smooth_relu: {
        const double s = 1.0 / (1.0 + std::exp(-beta * x));
        return beta * s * (1.0 - s);
      }
      case Kind::monomial:
        return degree < 2 ? 0.0
                          : double(degree) * (degree - 1) *
                                std::pow(x, degree - 2);
      case Kind::polynomial: {
        // p''(x) = sum_{j>=0} a_{j+2} (j+2)(j+1) x^j with a_k = poly[k-1]
        double acc = 0.0;
        for (std::size_t j = poly.size() - 1; j-- > 0;)
          acc = acc * x + double(j + 2) * double(j + 1) * poly[j + 1];
        return poly.size() < 2 ? 0.0 : acc;
      }
      default:
        throw std::logic_error("raw_d2 on non-smooth activation");
    }
  }

  // Centered, scaled value: the function the model actually applies.
  double evaluate(double x) const {
    if (!std::isfinite(x))
      throw ValidationError("activation evaluate: non-finite input");
    return scale * (raw(x) - center);
  }

  const char* kind_name() const {
    switch (kind) {
      case Kind::linear: return "linear";
      case Kind::tanh_k: return "tanh";
      case Kind::shifted_cos: return "shifted-cos";
      case Kind::smooth_relu: return "smooth-relu";
      case Kind::monomial: return "monomial";
      case Kind::polynomial: return "polynomial";
      case Kind::tabulated: return "tabulated";
      case Kind::relu: return "relu";
    }
    return "?";
  }
};

// ---- Piecewise-exact Gaussian expectations ----------------------------------

namespace detail {

// E[Z^w * p(sigma Z) * 1_{segment}], summed over segments of a PiecewisePoly,
// where p is raw f (no center/scale).  Exact up to rounding: each segment
// contributes a polynomial in Z integrated against Gaussian interval moments.
inline double expect_piecewise_zw(const PiecewisePoly& f, double sigma, int w) {
  const std::size_t nseg = f.coeffs.size();
  double total = 0.0;
  for (std::size_t seg = 0; seg < nseg; ++seg) {
    const double zl = seg == 0 ? -std::numeric_limits<double>::infinity()
                               : f.breaks[seg - 1] / sigma;
    const double zr = seg == nseg - 1
                          ? std::numeric_limits<double>::infinity()
                          : f.breaks[seg] / sigma;
    if (!(zr > zl)) continue;
    const double x0 = seg == 0 ? f.breaks.front() : f.breaks[seg - 1];
    // p(sigma z) = sum_j c_j (sigma z - x0)^j; expand into powers of z.
    const auto& c = f.coeffs[seg];
    std::vector<double> zpow(c.size(), 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
      // (sigma z - x0)^j = sum_t C(j,t) (sigma z)^t (-x0)^{j-t}
      double binom = 1.0;
      for (std::size_t t = 0; t <= j; ++t) {
        zpow[t] += c[j] * binom * std::pow(sigma, double(t)) *
                   std::pow(-x0, double(j - t));
        binom = binom * double(j - t) / double(t + 1);
      }
    }
    const int kmax = int(zpow.size()) - 1 + w;
    const std::vector<double> I = gaussian_interval_moments(zl, zr, kmax);
    for (std::size_t t = 0; t < zpow.size(); ++t) total += zpow[t] * I[t + w];
  }
  return total;
}

// Piecewise view of the experimental relu: 0 on (-inf,0], x on [0,inf).
inline const PiecewisePoly& relu_pieces() {
  static const PiecewisePoly p = [] {
    PiecewisePoly q;
    q.breaks = {0.0};
    q.coeffs = {{0.0}, {0.0, 1.0}};
    return q;
  }();
  return p;
}

inline const PiecewisePoly& pieces_of(const ActivationSpec& f) {
  return f.kind == ActivationSpec::Kind::relu ? relu_pieces() : f.table;
}

// E[Z^w raw(sigma Z)] for any kind: ladder quadrature for smooth kinds,
// segment-exact for piecewise kinds.
inline double expect_zw_raw(const ActivationSpec& f, double sigma, int w) {
  if (f.piecewise()) return expect_piecewise_zw(pieces_of(f), sigma, w);
  return gauss_expect(
      [&](double z) { return std::pow(z, w) * f.raw(sigma * z); },
      "activation moment");
}

// E[raw(sigma Z)^2], same dispatch.  The piecewise square is again piecewise
// polynomial (degree <= 6), handled by squaring each segment.
inline double expect_raw_sq(const ActivationSpec& f, double sigma) {
  if (!f.piecewise())
    return gauss_expect(
        [&](double z) {
          const double v = f.raw(sigma * z);
          return v * v;
        },
        "activation second moment");
  PiecewisePoly sq = pieces_of(f);
  for (auto& c : sq.coeffs) {
    std::vector<double> s(2 * c.size() - 1, 0.0);
    for (std::size_t a = 0; a < c.size(); ++a)
      for (std::size_t b = 0; b < c.size(); ++b) s[a + b] += c[a] * c[b];
    c = std::move(s);
  }
  return expect_piecewise_zw(sq, sigma, 0);
}

}  // namespace detail

// ---- Gaussian centering ------------------------------------------------------

// Mean of the raw function under N(0, sigma^2); subtracting it makes the
// centered value scale*(raw - center) mean-zero regardless of scale.
inline double gaussian_mean_raw(const ActivationSpec& f, double sigma) {
  return detail::expect_zw_raw(f, sigma, 0);
}

// Idempotent: the mean of raw does not depend on the stored center.
inline ActivationSpec center_gaussian(const ActivationSpec& f, double sigma) {
  ActivationSpec g = f;
  g.center = gaussian_mean_raw(f, sigma);
  return g;
}

// |E[f(sigma Z)]| for the centered/scaled function; the centering invariant.
inline double centered_mean(const ActivationSpec& f, double sigma) {
  return f.scale * (gaussian_mean_raw(f, sigma) - f.center);
}

// ---- Theta functionals -------------------------------------------------------

inline ThetaParams compute_thetas(const ActivationSpec& f, double sigma_w,
                                  double sigma_x) {
  if (!(sigma_w > 0) || !(sigma_x > 0))
    throw ValidationError("compute_thetas: sigmas must be positive");
  const double s = sigma_w * sigma_x;
  if (std::abs(centered_mean(f, s)) > 1e-8)
    throw ValidationError(
        "compute_thetas: activation is not Gaussian-centered at this sigma; "
        "run center_gaussian first");

  ThetaParams th;
  th.sigma_product = s;
  const double mean_raw = gaussian_mean_raw(f, s);
  // theta1 = E[(scale (raw - center))^2], expanded so a center that is off
  // by the allowed 1e-8 does not bias the second moment
  const double raw_sq = detail::expect_raw_sq(f, s);
  th.theta1 =
      f.scale * f.scale *
      std::max(0.0, raw_sq - 2.0 * f.center * mean_raw + f.center * f.center);

  double d1, d2;
  if (f.piecewise()) {
    // Stein identities: E[f'(sZ)] = E[Z f(sZ)]/s, E[f''] = E[(Z^2-1) f]/s^2.
    const double ez1 = detail::expect_zw_raw(f, s, 1);
    const double ez2 = detail::expect_zw_raw(f, s, 2);
    d1 = ez1 / s;
    d2 = (ez2 - mean_raw) / (s * s);
  } else {
    d1 = gauss_expect([&](double z) { return f.raw_d1(s * z); },
                      "theta2 integrand");
    d2 = gauss_expect([&](double z) { return f.raw_d2(s * z); },
                      "theta3 integrand");
  }
  const double t2r = f.scale * s * d1;
  const double t3r = f.scale * 0.5 * s * s * d2;
  th.theta2 = t2r * t2r;
  th.theta3 = t3r * t3r;
  // clamp quadrature noise so the theta1 >= theta2 invariant is exact
  if (th.theta2 > th.theta1 && th.theta2 < th.theta1 * (1 + 1e-9) + 1e-12)
    th.theta2 = th.theta1;
  th.validate();
  return th;
}

// ---- Hermite projection ------------------------------------------------------

struct HermiteProjection {
  std::vector<double> coeffs;  // c_0..c_max in the orthonormal Hermite basis
  double tail = 0.0;           // theta1 - sum_{k>=1} c_k^2 estimate
  bool warning = false;        // tail estimate above 1e-6
};

// c_k = E[f(sigma Z) He_k(Z)] / sqrt(k!): independent oracle for the thetas,
// theta2 = c_1^2 and theta1 = sum_{k>=1} c_k^2 for centered f.  Evaluated on
// the largest cached rule with the stable three-term value recurrence.
inline HermiteProjection hermite_projection(const ActivationSpec& f,
                                            double sigma, int max_order) {
  if (max_order < 1 || max_order > 60)
    throw ValidationError("hermite_projection: order must be in [1,60]");
  const HermiteRule& r = cached_hermite_rule(1023);
  const int n = int(r.node.size());
  HermiteProjection out;
  out.coeffs.assign(max_order + 1, 0.0);
  std::vector<double> acc(max_order + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const double z = r.node[i];
    const double wfi = r.weight[i] * f.evaluate(sigma * z);
    double hkm1 = 1.0, hk = z;  // He_0, He_1
    acc[0] += wfi;
    if (max_order >= 1) acc[1] += wfi * z;
    for (int k = 2; k <= max_order; ++k) {
      const double hkp = z * hk - (k - 1) * hkm1;
      hkm1 = hk;
      hk = hkp;
      acc[k] += wfi * hk;
    }
  }
  double fact = 1.0;
  for (int k = 0; k <= max_order; ++k) {
    if (k > 0) fact *= k;
    out.coeffs[k] = acc[k] / std::sqrt(fact);
  }
  // tail estimate against the directly computed second moment
  const double mu = gaussian_mean_raw(f, sigma);
  const double theta1 =
      f.scale * f.scale *
      std::max(0.0, detail::expect_raw_sq(f, sigma) - 2.0 * f.center * mu +
                        f.center * f.center);
  double partial = 0.0;
  for (int k = 1; k <= max_order; ++k) partial += out.coeffs[k] * out.coeffs[k];
  out.tail = theta1 - partial;
  out.warning = std::abs(out.tail) > 1e-6;
  return out;
}

// ---- JSON parsing ------------------------------------------------------------
//
// {"kind": "...", "params": {...}, "scale": 1.0, "auto_center": true}
// auto_center is resolved by the caller (it needs sigma_w*sigma_x).

struct ActivationConfig {
  ActivationSpec spec;
  bool auto_center = true;
};

inline ActivationSpec make_activation(const std::string& kind) {
  ActivationSpec f;
  if (kind == "linear") f.kind = ActivationSpec::Kind::linear;
  else if (kind == "tanh") f.kind = ActivationSpec::Kind::tanh_k;
  else if (kind == "shifted-cos" || kind == "cos")
    f.kind = ActivationSpec::Kind::shifted_cos;
  else if (kind == "smooth-relu" || kind == "softplus")
    f.kind = ActivationSpec::Kind::smooth_relu;
  else if (kind == "monomial") f.kind = ActivationSpec::Kind::monomial;
  else if (kind == "polynomial") f.kind = ActivationSpec::Kind::polynomial;
  else if (kind == "tabulated") f.kind = ActivationSpec::Kind::tabulated;
  else if (kind == "relu") f.kind = ActivationSpec::Kind::relu;
  else if (kind == "hermite3") {
    // convenience alias: He_3(x) = x^3 - 3x, a theta2 = 0 polynomial
    f.kind = ActivationSpec::Kind::polynomial;
    f.poly = {-3.0, 0.0, 1.0};
    f.degree = 3;
  } else {
    throw ValidationError("unknown activation kind: " + kind);
  }
  return f;
}

inline ActivationConfig parse_activation(const nlohmann::json& j) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "kind" && k != "params" && k != "scale" && k != "auto_center" &&
        k != "center")
      throw ValidationError("activation config: unknown field '" + k + "'");
  }
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw ValidationError("activation config: missing string field 'kind'");
  ActivationConfig cfg;
  cfg.spec = make_activation(j.at("kind").get<std::string>());
  const nlohmann::json params =
      j.contains("params") ? j.at("params") : nlohmann::json::object();
  for (auto it = params.begin(); it != params.end(); ++it) {
    const std::string& k = it.key();
    if (k != "k" && k != "beta" && k != "coefficients" && k != "x" && k != "y")
      throw ValidationError("activation params: unknown field '" + k + "'");
  }
  switch (cfg.spec.kind) {
    case ActivationSpec::Kind::monomial:
      if (!params.contains("k"))
        throw ValidationError("monomial activation needs params.k");
      cfg.spec.degree = params.at("k").get<int>();
      if (cfg.spec.degree < 1 || cfg.spec.degree > 20)
        throw ValidationError("monomial degree must be in [1,20]");
      break;
    case ActivationSpec::Kind::polynomial:
      if (cfg.spec.poly.empty()) {  // not pre-filled by an alias
        if (!params.contains("coefficients"))
          throw ValidationError("polynomial activation needs params.coefficients");
        cfg.spec.poly = params.at("coefficients").get<std::vector<double>>();
        if (cfg.spec.poly.empty() || cfg.spec.poly.size() > 20)
          throw ValidationError("polynomial needs 1..20 coefficients a_1..a_K");
        cfg.spec.degree = int(cfg.spec.poly.size());
      }
      break;
    case ActivationSpec::Kind::smooth_relu:
      if (params.contains("beta")) cfg.spec.beta = params.at("beta").get<double>();
      if (!(cfg.spec.beta > 0))
        throw ValidationError("smooth-relu beta must be positive");
      break;
    case ActivationSpec::Kind::tabulated: {
      if (!params.contains("x") || !params.contains("y"))
        throw ValidationError("tabulated activation needs params.x and params.y");
      cfg.spec.table = monotone_cubic(params.at("x").get<std::vector<double>>(),
                                      params.at("y").get<std::vector<double>>());
      break;
    }
    default:
      break;
  }
  if (j.contains("scale")) cfg.spec.scale = j.at("scale").get<double>();
  if (cfg.spec.scale == 0.0 || !std::isfinite(cfg.spec.scale))
    throw ValidationError("activation scale must be finite and nonzero");
  if (j.contains("center")) cfg.spec.center = j.at("center").get<double>();
  if (j.contains("auto_center")) cfg.auto_center = j.at("auto_center").get<bool>();
  return cfg;
}

inline nlohmann::json activation_to_json(const ActivationSpec& f) {
  nlohmann::json j;
  j["kind"] = f.kind_name();
  j["scale"] = f.scale;
  j["center"] = f.center;
  nlohmann::json params = nlohmann::json::object();
  if (f.kind == ActivationSpec::Kind::monomial) params["k"] = f.degree;
  if (f.kind == ActivationSpec::Kind::polynomial) params["coefficients"] = f.poly;
  if (f.kind == ActivationSpec::Kind::smooth_relu) params["beta"] = f.beta;
  if (f.kind == ActivationSpec::Kind::tabulated) {
    params["x"] = f.table.breaks;
    std::vector<double> y;
    for (double b : f.table.breaks) y.push_back(f.table(b));
    params["y"] = y;
  }
  if (!params.empty()) j["params"] = params;
  if (f.experimental()) j["experimental"] = true;
  return j;
}

}  // namespace nlspec
