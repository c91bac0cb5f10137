#pragma once
// Sample statistics used to compare empirical spectra against reference laws:
// Kolmogorov-Smirnov distances (one- and two-sample), a CDF built from a
// tabulated density plus a point mass, and small summary helpers.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "nlspec/activation.hpp"  // ValidationError

namespace nlspec {

inline double sample_mean(const std::vector<double>& v) {
  if (v.empty()) throw ValidationError("sample_mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / double(v.size());
}

inline double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) throw ValidationError("sample_variance: need >= 2 points");
  const double mu = sample_mean(v);
  double s = 0.0;
  for (double x : v) s += (x - mu) * (x - mu);
  return s / double(v.size() - 1);
}

inline double moment_estimate(const std::vector<double>& eig, int q) {
  if (eig.empty()) throw ValidationError("moment_estimate: empty spectrum");
  double s = 0.0;
  for (double x : eig) s += std::pow(x, q);
  return s / double(eig.size());
}

// sup_x |F_n(x) - F(x)| for a sorted sample against a reference CDF
template <class Cdf>
double ks_statistic(const std::vector<double>& sorted, Cdf&& cdf) {
  const std::size_t n = sorted.size();
  if (n == 0) throw ValidationError("ks_statistic: empty sample");
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::abs(f - double(i + 1) / double(n)));
    d = std::max(d, std::abs(f - double(i) / double(n)));
  }
  return d;
}

// two-sample KS distance between sorted samples
inline double ks_two_sample(const std::vector<double>& a,
                            const std::vector<double>& b) {
  if (a.empty() || b.empty())
    throw ValidationError("ks_two_sample: empty sample");
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    // Advance past every element tied at the current value on both sides
    // before comparing the empirical CDFs, so the statistic is evaluated
    // between jump points rather than mid-jump.
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(double(i) / a.size() - double(j) / b.size()));
  }
  return d;
}

// integral of |F_n(x) - F(x)| over [lo, hi] by trapezoid on a uniform grid;
// F_n is the empirical CDF of the sorted sample
template <class Cdf>
double l1_cdf_distance(const std::vector<double>& sorted, Cdf&& cdf,
                       double lo, double hi, int n_grid = 4001) {
  if (sorted.empty()) throw ValidationError("l1_cdf_distance: empty sample");
  if (!(hi > lo) || n_grid < 2)
    throw ValidationError("l1_cdf_distance: bad integration range");
  const double n = double(sorted.size());
  const double h = (hi - lo) / double(n_grid - 1);
  double acc = 0.0, prev = 0.0;
  for (int i = 0; i < n_grid; ++i) {
    const double x = lo + h * double(i);
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    const double fn = double(it - sorted.begin()) / n;
    const double gap = std::abs(fn - cdf(x));
    if (i > 0) acc += 0.5 * h * (prev + gap);
    prev = gap;
  }
  return acc;
}

// CDF of a law given as a density on an ascending grid plus a point mass at
// zero; the continuous part is a running trapezoid, and the whole thing is
// normalized so the CDF tops out at exactly 1.
class GridCdf {
 public:
  GridCdf(std::vector<double> x, const std::vector<double>& rho, double atom)
      : x_(std::move(x)), cum_(x_.size(), 0.0), atom_(atom) {
    if (x_.size() != rho.size() || x_.size() < 2)
      throw ValidationError("GridCdf: mismatched or short grid");
    if (atom_ < 0.0) throw ValidationError("GridCdf: negative atom");
    for (std::size_t i = 1; i < x_.size(); ++i) {
      const double h = x_[i] - x_[i - 1];
      if (h <= 0.0) throw ValidationError("GridCdf: grid must be ascending");
      cum_[i] = cum_[i - 1] + 0.5 * h * (rho[i] + rho[i - 1]);
    }
    total_ = atom_ + cum_.back();
    if (!(total_ > 0.0)) throw ValidationError("GridCdf: zero total mass");
  }

  double operator()(double x) const {
    double c;
    if (x <= x_.front()) {
      c = 0.0;
    } else if (x >= x_.back()) {
      c = cum_.back();
    } else {
      const auto it = std::upper_bound(x_.begin(), x_.end(), x);
      const std::size_t i = std::size_t(it - x_.begin());
      const double t = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
      c = cum_[i - 1] + t * (cum_[i] - cum_[i - 1]);
    }
    if (x >= 0.0) c += atom_;
    return c / total_;
  }

 private:
  std::vector<double> x_;
  std::vector<double> cum_;
  double atom_ = 0.0;
  double total_ = 0.0;
};

// Freedman-Diaconis bin width, with a sane fallback for degenerate spreads
inline double fd_bin_width(std::vector<double> sorted) {
  if (sorted.size() < 4) throw ValidationError("fd_bin_width: sample too small");
  const std::size_t n = sorted.size();
  const double q1 = sorted[n / 4];
  const double q3 = sorted[(3 * n) / 4];
  const double iqr = q3 - q1;
  if (iqr <= 0.0) {
    const double spread = sorted.back() - sorted.front();
    return spread > 0.0 ? spread / 32.0 : 1.0;
  }
  return 2.0 * iqr / std::cbrt(double(n));
}

}  // namespace nlspec
