#pragma once
// Finite-size simulation of the nonlinear Gram ensemble: counter-based
// matrix fills (reproducible bit-for-bit regardless of scheduling), the
// layered forward recursion, and spectra of the resulting Gram matrices.
//
// Normalization conventions: a single-layer run reports eigenvalues of
// (1/m) Y Y^T, whose limit has first moment theta1.  A multilayer run
// reports (1/(m theta1)) Y^p Y^p* per layer; combined with the pre-activation
// renormalization sigma_x/sqrt(theta1) applied at layers p >= 1 (the input
// layer feeds the raw data, so its prefactor is 1), every layer's law is the
// composite-shape Marchenko-Pastur family at unit scale in the theta2 = 0
// regime.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nlspec/activation.hpp"
#include "nlspec/linalg.hpp"
#include "nlspec/metrics.hpp"
#include "nlspec/rng.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace nlspec {

struct SimulationPlan {
  ModelShape shape;
  ActivationSpec activation;
  DistributionSpec dist_w;  // carries variance sigma_w^2
  DistributionSpec dist_x;  // carries variance sigma_x^2
  int layers = 1;
  int trials = 1;
  std::uint64_t seed = 0;

  void validate() const {
    shape.validate();
    if (layers < 1) throw ValidationError("SimulationPlan: layers must be >= 1");
    if (trials < 1) throw ValidationError("SimulationPlan: trials must be >= 1");
    if (shape.n0 <= 0 || shape.n1 <= 0 || shape.m <= 0)
      throw ValidationError("SimulationPlan: explicit sizes required");
    if (layers > 1 && int(shape.layer_widths.size()) != layers)
      throw ValidationError(
          "SimulationPlan: layer_widths must list n_1..n_L for multilayer");
  }

  // widths n_0, n_1, ..., n_L
  std::vector<int> widths() const {
    std::vector<int> w{shape.n0};
    if (layers == 1) {
      w.push_back(shape.n1);
    } else {
      for (int v : shape.layer_widths) w.push_back(v);
    }
    return w;
  }
};

// matrix fill roles: the data matrix, then one weight matrix per layer
inline constexpr std::uint64_t role_data = 0;
inline std::uint64_t role_weight(int layer) { return 1 + std::uint64_t(layer); }

inline void fill_matrix(Matrix& M, std::uint64_t matrix_seed,
                        const DistributionSpec& dist) {
  const std::size_t total = M.a.size();
  for (std::size_t i = 0; i < total; ++i)
    M.a[i] = dist.draw(matrix_seed, std::uint64_t(i));
}

// Y_out = f(pre_scale * W Y / sqrt(n_in)) applied entrywise
inline Matrix forward_layer(const Matrix& W, const Matrix& Y,
                            const ActivationSpec& f, double pre_scale) {
  if (W.cols != Y.rows) throw ValidationError("forward_layer: shape mismatch");
  Matrix Z = matmul(W, Y, pre_scale / std::sqrt(double(W.cols)));
  for (double& v : Z.a) v = f.evaluate(v);
  return Z;
}

struct TrialSpectra {
  // layer_spectra[p] holds ascending eigenvalues after layer p+1
  std::vector<std::vector<double>> layer_spectra;
};

namespace detail {

inline TrialSpectra simulate_trial(const SimulationPlan& plan,
                                   std::uint64_t trial_seed, double renorm,
                                   double out_scale) {
  const std::vector<int> widths = plan.widths();
  Matrix Y(plan.shape.n0, plan.shape.m);
  fill_matrix(Y, hash_combine(trial_seed, role_data), plan.dist_x);

  TrialSpectra out;
  out.layer_spectra.reserve(std::size_t(plan.layers));
  for (int p = 0; p < plan.layers; ++p) {
    Matrix W(widths[std::size_t(p) + 1], widths[std::size_t(p)]);
    fill_matrix(W, hash_combine(trial_seed, role_weight(p)), plan.dist_w);
    // the input layer consumes the raw data; later layers renormalize the
    // pre-activation back to the stationary variance
    Y = forward_layer(W, Y, plan.activation, p == 0 ? 1.0 : renorm);
    std::vector<double> eig = gram_spectrum(Y);
    if (out_scale != 1.0)
      for (double& v : eig) v *= out_scale;
    out.layer_spectra.push_back(std::move(eig));
  }
  return out;
}

}  // namespace detail

// All trials, parallelized over independent trials with per-trial result
// slots; output is identical for any thread count because every random
// number is a pure function of (seed, trial, role, entry index) and each
// trial's linear algebra runs single-threaded.
inline std::vector<TrialSpectra> run_simulation(const SimulationPlan& plan) {
  plan.validate();
  const ThetaParams th = compute_thetas(plan.activation, plan.shape.sigma_w,
                                        plan.shape.sigma_x);
  const bool multi = plan.layers > 1;
  const double renorm = plan.shape.sigma_x / std::sqrt(th.theta1);
  const double out_scale = multi ? 1.0 / th.theta1 : 1.0;

  std::vector<TrialSpectra> results(std::size_t(plan.trials));
  use_single_threaded_blas();
#pragma omp parallel for schedule(dynamic, 1)
  for (int t = 0; t < plan.trials; ++t)
    results[std::size_t(t)] = detail::simulate_trial(
        plan, hash_combine(plan.seed, std::uint64_t(t)), renorm, out_scale);
  return results;
}

// last-layer spectra pooled across trials, ascending
inline std::vector<double> pooled_spectrum(
    const std::vector<TrialSpectra>& trials) {
  std::vector<double> all;
  for (const TrialSpectra& t : trials) {
    const std::vector<double>& e = t.layer_spectra.back();
    all.insert(all.end(), e.begin(), e.end());
  }
  std::sort(all.begin(), all.end());
  return all;
}

struct MomentGap {
  int q = 0;
  double empirical = 0.0;
  double theoretical = 0.0;
  double z_score = 0.0;
};

struct ComparisonReport {
  double ks_distance = 0.0;
  double l1_cdf_distance = 0.0;
  std::vector<MomentGap> moment_gaps;
  int trials = 0;
};

// Distances between the pooled last-layer spectrum and a reference CDF,
// plus per-order moment gaps.  `theoretical_moments[q-1]` supplies the
// limit value of m_q; z-scores divide by the across-trial standard error
// of the per-trial estimates (NaN for a single trial, where no spread is
// observable).  [support_lo, support_hi] only widens the L1 integration
// range; the sample range is always covered.
template <class Cdf>
ComparisonReport compare(const std::vector<TrialSpectra>& trials, Cdf&& cdf,
                         double support_lo, double support_hi,
                         const std::vector<double>& theoretical_moments) {
  if (trials.empty()) throw ValidationError("compare: no trials");
  const std::vector<double> pooled = pooled_spectrum(trials);

  ComparisonReport rep;
  rep.trials = int(trials.size());
  rep.ks_distance = ks_statistic(pooled, cdf);
  const double lo = std::min(pooled.front(), support_lo);
  const double hi = std::max(pooled.back(), support_hi);
  rep.l1_cdf_distance = l1_cdf_distance(pooled, cdf, lo, hi);

  for (std::size_t q = 1; q <= theoretical_moments.size(); ++q) {
    std::vector<double> per_trial;
    per_trial.reserve(trials.size());
    for (const TrialSpectra& t : trials)
      per_trial.push_back(moment_estimate(t.layer_spectra.back(), int(q)));
    MomentGap gap;
    gap.q = int(q);
    gap.empirical = sample_mean(per_trial);
    gap.theoretical = theoretical_moments[q - 1];
    if (per_trial.size() >= 2) {
      const double se =
          std::sqrt(sample_variance(per_trial) / double(per_trial.size()));
      gap.z_score = se > 0.0 ? (gap.empirical - gap.theoretical) / se
                             : std::numeric_limits<double>::infinity();
    } else {
      gap.z_score = std::numeric_limits<double>::quiet_NaN();
    }
    rep.moment_gaps.push_back(gap);
  }
  return rep;
}

// (1/m) Tr (Y*Y/m + gamma I)^{-1} from the n1-side spectrum of YY*/m: the
// two Gram matrices share nonzero eigenvalues, and the (m - n1)/gamma term
// accounts for the zero modes in either direction (when n1 > m it exactly
// cancels the structural zeros already present in the eigenvalue list).
inline double ridge_trace_empirical(const std::vector<double>& eigenvalues,
                                    int m, double gamma) {
  if (m <= 0) throw ValidationError("ridge_trace_empirical: m must be > 0");
  if (!(gamma > 0.0))
    throw ValidationError("ridge_trace_empirical: gamma must be > 0");
  double s = 0.0;
  for (double ev : eigenvalues) s += 1.0 / (ev + gamma);
  s += double(m - int(eigenvalues.size())) / gamma;
  return s / double(m);
}

inline double ridge_trace_empirical(const Matrix& y, double gamma) {
  return ridge_trace_empirical(gram_spectrum(y), y.cols, gamma);
}

}  // namespace nlspec
