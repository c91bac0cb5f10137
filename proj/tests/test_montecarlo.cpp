// Simulation layer: counter-based fills, forward recursion, Gram spectra,
// determinism across scheduling, and agreement of small-size spectra with
// the limiting moments.  Statistical assertions use wide (>= 3 sigma or
// distribution-free) windows so they are stable under the fixed seeds.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#if defined(_OPENMP)
#include <omp.h>
#endif

#include "nlspec/metrics.hpp"
#include "nlspec/montecarlo.hpp"
#include "nlspec/mp_law.hpp"

using namespace nlspec;

namespace {

SimulationPlan linear_plan(int n0, int trials, std::uint64_t seed) {
  SimulationPlan plan;
  plan.shape = ModelShape::from_n0(n0, 1.0, 1.0);
  plan.activation = make_activation("linear");
  plan.dist_w = DistributionSpec::parse("gaussian", 1.0);
  plan.dist_x = DistributionSpec::parse("gaussian", 1.0);
  plan.trials = trials;
  plan.seed = seed;
  return plan;
}

}  // namespace

TEST_CASE("counter draws are pure functions of seed and index") {
  const double a = counter_gaussian(42, 1337);
  const double b = counter_gaussian(42, 1337);
  CHECK(a == b);
  CHECK(counter_gaussian(43, 1337) != a);
  CHECK(counter_uniform(7, 0) > 0.0);
  CHECK(counter_uniform(7, 0) < 1.0);
}

TEST_CASE("draw moments match the declared distributions") {
  const std::size_t n = 1'000'000;
  for (const char* name : {"gaussian", "rademacher", "uniform"}) {
    const DistributionSpec d = DistributionSpec::parse(name, 2.25);
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = d.draw(123, i);
      s += x;
      s2 += x * x;
    }
    const double mean = s / double(n);
    const double var = s2 / double(n) - mean * mean;
    INFO(name);
    // mean: 3 standard errors; variance: 1% relative
    CHECK(std::abs(mean) < 3.0 * std::sqrt(2.25 / double(n)));
    CHECK(std::abs(var - 2.25) < 0.01 * 2.25);
  }
  // rademacher draws are exactly +-sigma
  const DistributionSpec r = DistributionSpec::parse("rademacher", 4.0);
  for (std::size_t i = 0; i < 100; ++i)
    CHECK(std::abs(std::abs(r.draw(5, i)) - 2.0) < 1e-15);
}

TEST_CASE("gaussian draws pass a coarse normality check") {
  // standardized 4th moment of N(0,1) is 3
  const std::size_t n = 1'000'000;
  double s4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = counter_gaussian(99, i);
    s4 += x * x * x * x;
  }
  CHECK(std::abs(s4 / double(n) - 3.0) < 0.05);
}

TEST_CASE("gram spectrum of a diagonal matrix is known exactly") {
  Matrix Y(3, 4);
  Y(0, 0) = 2.0;
  Y(1, 1) = 3.0;
  Y(2, 2) = 1.0;
  const std::vector<double> eig = gram_spectrum(Y);  // sigma_i^2 / m
  REQUIRE(eig.size() == 3);
  CHECK(eig[0] == Catch::Approx(0.25).margin(1e-12));
  CHECK(eig[1] == Catch::Approx(1.0).margin(1e-12));
  CHECK(eig[2] == Catch::Approx(2.25).margin(1e-12));
}

TEST_CASE("rank-deficient side appends exact zero modes") {
  SimulationPlan plan = linear_plan(300, 1, 7);
  // n1 = 300 rows vs m = 150 columns: 150 zero modes
  plan.shape = ModelShape::from_n0(300, 2.0, 1.0);
  const auto res = run_simulation(plan);
  const std::vector<double>& eig = res[0].layer_spectra[0];
  REQUIRE(eig.size() == 300);
  int zeros = 0;
  for (double v : eig) {
    if (v == 0.0) ++zeros;
    CHECK(v >= -1e-10);  // Gram matrices are positive semidefinite
  }
  CHECK(zeros == 150);
}

TEST_CASE("simulation output is bit-identical across thread counts") {
  SimulationPlan plan = linear_plan(120, 6, 2024);
#if defined(_OPENMP)
  omp_set_num_threads(1);
#endif
  const auto a = run_simulation(plan);
#if defined(_OPENMP)
  omp_set_num_threads(4);
#endif
  const auto b = run_simulation(plan);
#if defined(_OPENMP)
  omp_set_num_threads(1);
#endif
  REQUIRE(a.size() == b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    const auto& ea = a[t].layer_spectra[0];
    const auto& eb = b[t].layer_spectra[0];
    REQUIRE(ea.size() == eb.size());
    for (std::size_t i = 0; i < ea.size(); ++i) CHECK(ea[i] == eb[i]);
  }
  // and different seeds genuinely differ
  SimulationPlan other = linear_plan(120, 6, 2025);
  const auto c = run_simulation(other);
  CHECK(c[0].layer_spectra[0] != a[0].layer_spectra[0]);
}

TEST_CASE("linear square ensemble matches product-law moments") {
  // f(x) = x gives theta1 = theta2 = 1: the limit moments are Fuss-Catalan
  // (m1, m2, m3) = (1, 3, 12) at phi = psi = 1
  const SimulationPlan plan = linear_plan(600, 4, 31415);
  const auto res = run_simulation(plan);
  std::vector<double> m1s, m2s;
  for (const auto& t : res) {
    m1s.push_back(moment_estimate(t.layer_spectra[0], 1));
    m2s.push_back(moment_estimate(t.layer_spectra[0], 2));
  }
  CHECK(std::abs(sample_mean(m1s) - 1.0) < 0.05);
  CHECK(std::abs(sample_mean(m2s) - 3.0) < 0.3);
}

TEST_CASE("forward layer computes f(scale W Y / sqrt(n)) exactly") {
  Matrix W(1, 2), Y(2, 1);
  W(0, 0) = 3.0;
  W(0, 1) = -1.0;
  Y(0, 0) = 2.0;
  Y(1, 0) = 4.0;
  ActivationSpec f = make_activation("linear");
  // (3*2 - 1*4)/sqrt(2) * 0.5 = 2/sqrt(2) * 0.5
  const Matrix Z = forward_layer(W, Y, f, 0.5);
  CHECK(Z(0, 0) == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-14));

  ActivationSpec sq = make_activation("hermite3");  // x^3 - 3x, centered odd
  const Matrix Z2 = forward_layer(W, Y, sq, 1.0);
  const double pre = 2.0 / std::sqrt(2.0);
  CHECK(Z2(0, 0) == Catch::Approx(pre * pre * pre - 3.0 * pre).margin(1e-12));
}

TEST_CASE("renormalized recursion keeps the pre-activation variance fixed") {
  // feed layer-2 style input: entries with variance theta1; after the
  // sigma_x/sqrt(theta1) prefactor the pre-activation variance must return
  // to (sigma_w sigma_x)^2, and the activation output variance to theta1
  const ActivationSpec f = center_gaussian(make_activation("cos"), 1.0);
  const ThetaParams th = compute_thetas(f, 1.0, 1.0);
  const double renorm = 1.0 / std::sqrt(th.theta1);

  const int n = 400, m = 400;
  Matrix Y(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      Y(i, j) = std::sqrt(th.theta1) * counter_gaussian(11, std::uint64_t(i) * m + j);
  Matrix W(n, n);
  fill_matrix(W, 12, DistributionSpec::parse("gaussian", 1.0));

  Matrix pre = matmul(W, Y, renorm / std::sqrt(double(n)));
  double v = 0.0;
  for (double x : pre.a) v += x * x;
  v /= double(pre.a.size());
  CHECK(std::abs(v - 1.0) < 0.03);  // (sigma_w sigma_x)^2 = 1

  Matrix post = forward_layer(W, Y, f, renorm);
  double vp = 0.0, mp = 0.0;
  for (double x : post.a) {
    vp += x * x;
    mp += x;
  }
  vp /= double(post.a.size());
  mp /= double(post.a.size());
  CHECK(std::abs(vp - th.theta1) < 0.03 * th.theta1);
  CHECK(std::abs(mp) < 0.01);  // centering survives the recursion
}

TEST_CASE("KS machinery is consistent with its own reference law") {
  // draw a synthetic sample from MP(1/2) by inverting the tabulated CDF and
  // feed it back: the KS distance must be at the discretization scale
  const MarchenkoPastur mp(0.5, 1.0);
  const MarchenkoPastur::Cdf cdf = mp.cdf();
  const std::size_t n = 100'000;
  std::vector<double> sample(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = counter_uniform(777, i);
    // bisection on the monotone CDF
    double lo = mp.support_lo(), hi = mp.support_hi();
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (cdf(mid) < u ? lo : hi) = mid;
    }
    sample[i] = 0.5 * (lo + hi);
  }
  std::sort(sample.begin(), sample.end());
  CHECK(ks_statistic(sample, cdf) < 0.01);

  // two-sample distance of a sample against itself is zero
  CHECK(ks_two_sample(sample, sample) == 0.0);
}

TEST_CASE("GridCdf integrates a tabulated density with an atom") {
  // uniform density 1/2 on [0,2] plus an atom of mass 1/2... scaled: rho
  // integrates to 1/2, atom 1/2
  std::vector<double> x, rho;
  for (int i = 0; i <= 200; ++i) {
    x.push_back(-0.5 + 3.0 * i / 200.0);
    const double t = x.back();
    rho.push_back((t >= 0.0 && t <= 2.0) ? 0.25 : 0.0);
  }
  const GridCdf cdf(x, rho, 0.5);
  CHECK(cdf(-0.6) == 0.0);
  CHECK(cdf(2.6) == Catch::Approx(1.0).margin(1e-12));
  CHECK(cdf(0.0) == Catch::Approx(0.5).margin(0.01));
  CHECK(cdf(1.0) == Catch::Approx(0.75).margin(0.01));
  CHECK(cdf(2.0) == Catch::Approx(1.0).margin(0.01));
}

TEST_CASE("moment and variance helpers") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  CHECK(sample_mean(v) == Catch::Approx(2.5));
  CHECK(sample_variance(v) == Catch::Approx(5.0 / 3.0));
  CHECK(moment_estimate(v, 2) == Catch::Approx(7.5));
  CHECK_THROWS_AS(moment_estimate({}, 1), ValidationError);
}

TEST_CASE("multilayer run produces one spectrum per layer at unit scale") {
  SimulationPlan plan;
  plan.shape = ModelShape::from_n0(200, 1.0, 1.0);
  plan.shape.layer_widths = {200, 200};
  plan.activation = make_activation("cos");
  plan.activation = center_gaussian(plan.activation, 1.0);
  plan.dist_w = DistributionSpec::parse("gaussian", 1.0);
  plan.dist_x = DistributionSpec::parse("gaussian", 1.0);
  plan.layers = 2;
  plan.trials = 2;
  plan.seed = 99;
  const auto res = run_simulation(plan);
  REQUIRE(res.size() == 2);
  for (const auto& t : res) {
    REQUIRE(t.layer_spectra.size() == 2);
    // each layer's law is MP(1) at unit scale: mean eigenvalue 1
    for (const auto& eig : t.layer_spectra) {
      REQUIRE(eig.size() == 200);
      CHECK(std::abs(moment_estimate(eig, 1) - 1.0) < 0.05);
    }
  }
}

TEST_CASE("plan validation rejects inconsistent inputs") {
  SimulationPlan plan = linear_plan(100, 1, 1);
  plan.layers = 3;  // no layer_widths given
  CHECK_THROWS_AS(plan.validate(), ValidationError);
  plan.layers = 0;
  CHECK_THROWS_AS(plan.validate(), ValidationError);
  SimulationPlan ok = linear_plan(100, 1, 1);
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("empirical ridge trace matches the resolvent identity") {
  // zero matrix: every eigenvalue is 0, trace is 1/gamma
  Matrix zero(6, 4);
  CHECK(ridge_trace_empirical(zero, 0.7) == Catch::Approx(1.0 / 0.7));

  // gamma * trace -> 1 for large gamma
  Matrix y(50, 40);
  fill_matrix(y, 5, DistributionSpec::parse("gaussian", 1.0));
  CHECK(1e9 * ridge_trace_empirical(y, 1e9) == Catch::Approx(1.0).margin(1e-6));

  // n1 > m: the structural zeros in the n1-side list must cancel against
  // the (m - n1)/gamma correction, matching a direct m-side computation
  Matrix tall(5, 3);
  fill_matrix(tall, 6, DistributionSpec::parse("gaussian", 1.0));
  const std::vector<double> eig_n1 = gram_spectrum(tall);  // 5 values, 2 zero
  Matrix gram_m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 5; ++k) s += tall(k, i) * tall(k, j);
      gram_m(i, j) = s / 3.0;
    }
  const std::vector<double> eig_m = symmetric_eigenvalues(gram_m);
  for (double g : {0.1, 1.0, 10.0}) {
    double direct = 0.0;
    for (double ev : eig_m) direct += 1.0 / (ev + g);
    direct /= 3.0;
    CHECK(ridge_trace_empirical(eig_n1, 3, g) ==
          Catch::Approx(direct).epsilon(1e-12));
  }

  CHECK_THROWS_AS(ridge_trace_empirical(eig_n1, 3, 0.0), ValidationError);
  CHECK_THROWS_AS(ridge_trace_empirical(eig_n1, 0, 1.0), ValidationError);
}

TEST_CASE("comparison report measures distances and moment gaps") {
  // cos activation has theta2 = 0, so the limit at phi = psi = 1 is the
  // shape-1 Marchenko-Pastur law scaled by theta1
  SimulationPlan plan;
  plan.shape = ModelShape::from_n0(400, 1.0, 1.0);
  plan.activation = center_gaussian(make_activation("cos"), 1.0);
  plan.dist_w = DistributionSpec::parse("gaussian", 1.0);
  plan.dist_x = DistributionSpec::parse("gaussian", 1.0);
  plan.trials = 3;
  plan.seed = 2024;
  const auto trials = run_simulation(plan);

  const ThetaParams th = compute_thetas(plan.activation, 1.0, 1.0);
  const MarchenkoPastur mp(1.0, th.theta1);
  const auto cdf = mp.cdf();
  const std::vector<double> theory = {mp.moment(1), mp.moment(2),
                                      mp.moment(3)};
  const ComparisonReport rep =
      compare(trials, cdf, mp.support_lo(), mp.support_hi(), theory);

  CHECK(rep.trials == 3);
  CHECK(rep.ks_distance > 0.0);
  CHECK(rep.ks_distance < 0.15);
  CHECK(rep.l1_cdf_distance < 0.05);
  REQUIRE(rep.moment_gaps.size() == 3);
  for (const MomentGap& g : rep.moment_gaps) {
    CHECK(g.theoretical == Catch::Approx(theory[std::size_t(g.q - 1)]));
    CHECK(std::abs(g.empirical - g.theoretical) <
          0.25 * std::max(1.0, g.theoretical));
    CHECK(std::isfinite(g.z_score));
  }

  // single trial: no across-trial spread, z-score must be NaN
  plan.trials = 1;
  const auto one = run_simulation(plan);
  const ComparisonReport rep1 =
      compare(one, cdf, mp.support_lo(), mp.support_hi(), theory);
  CHECK(std::isnan(rep1.moment_gaps[0].z_score));
}
