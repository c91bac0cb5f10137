// Transform solver, exact series moments, density reconstruction, and ridge
// traces, cross-checked against the combinatorial moment formula and the
// closed-form Marchenko-Pastur family.
#include <catch2/catch_amalgamated.hpp>

#include <complex>

#include "nlspec/cactus.hpp"
#include "nlspec/mp_law.hpp"
#include "nlspec/stieltjes.hpp"

using namespace nlspec;

TEST_CASE("theta2 = 0 solver agrees with closed-form Marchenko-Pastur") {
  for (double ratio : {1.0, 0.5, 2.0}) {
    for (double t1 : {1.0, 2.0}) {
      const LawParams p{t1, 0.0, ratio, 1.0};  // phi/psi = ratio
      const MarchenkoPastur mp(ratio, t1);
      const StieltjesSolver solver(p);
      for (cplx z : {cplx(0, 1), cplx(2, 0.01), cplx(-1, 0.5), cplx(5, 2)}) {
        const cplx g = solver.solve(z);
        const cplx ref = mp.stieltjes(z);
        INFO("ratio=" << ratio << " t1=" << t1 << " z=" << z.real() << "+"
                      << z.imag() << "i");
        CHECK(std::abs(g - ref) < 1e-10);
      }
    }
  }
}

TEST_CASE("far-field decay G ~ -1/z") {
  const LawParams p{1.0, 0.5, 0.5, 2.0};
  const cplx z(1e6, 1e6);
  const cplx g = solve_G(z, p);
  CHECK(std::abs(g + 1.0 / z) < 1e-11);
}

TEST_CASE("upper half-plane properties on a parameter sweep") {
  const LawParams tuples[] = {
      {1.0, 0.0, 1.0, 1.0}, {1.0, 1.0, 1.0, 1.0}, {2.0, 0.5, 0.5, 2.0},
      {1.0, 0.3, 2.0, 1.0}};
  for (const LawParams& p : tuples) {
    const StieltjesSolver solver(p);
    for (double re : {-2.0, 0.2, 1.5, 6.0}) {
      for (double im : {1e-3, 0.05, 1.0, 10.0}) {
        const cplx z(re, im);
        const cplx g = solver.solve(z);
        INFO("t1=" << p.theta1 << " t2=" << p.theta2 << " phi=" << p.phi
                   << " psi=" << p.psi << " z=(" << re << "," << im << ")");
        CHECK(g.imag() > 0.0);
        CHECK(std::abs(fixed_point_residual(g, z, p)) < 1e-9);
        // reflection symmetry across the real axis
        const cplx gc = solver.solve(std::conj(z));
        CHECK(std::abs(gc - std::conj(g)) < 1e-14);
      }
    }
  }
}

TEST_CASE("series moments match closed forms in double precision") {
  const LawParams p{1.5, 0.4, 0.7, 1.3};
  const auto m = moments_from_equation(4, p);
  CHECK(m[0] == Catch::Approx(p.theta1).epsilon(1e-12));
  const double m2 = p.theta2 * p.theta2 / p.psi +
                    p.theta1 * p.theta1 * (1.0 + p.phi / p.psi);
  CHECK(m[1] == Catch::Approx(m2).epsilon(1e-12));
}

TEST_CASE("series moments equal enumeration moments exactly") {
  // two independent routes to m_q: algebraic expansion of the equation vs
  // the weighted count of admissible graphs; both exact over rationals
  struct Tuple {
    rational t1, t2, phi, psi;
  };
  const Tuple tuples[] = {
      {rational(1), rational(1), rational(1), rational(1)},
      {rational(2), rational(1, 2), rational(1, 2), rational(2)},
  };
  for (const Tuple& t : tuples) {
    const auto m =
        moments_from_equation<rational>(6, t.t1, t.t2, t.phi, t.psi);
    for (int q = 1; q <= 6; ++q)
      CHECK(m[q - 1] == moment(q, t.t1, t.t2, t.phi, t.psi));
  }
}

TEST_CASE("theta2 = 0 series moments are Marchenko-Pastur moments") {
  const rational t1(5, 4), phi(2, 3), psi(3, 2);
  const auto m = moments_from_equation<rational>(8, t1, rational(0), phi, psi);
  for (int q = 1; q <= 8; ++q) CHECK(m[q - 1] == mp_moment(q, phi / psi, t1));
}

TEST_CASE("companion-side power series satisfies the quoted quadratic") {
  // the sequence c_0 = s, c_q = s mp_moment(q, s, 1) solves
  //   z m(z)^2 + ((1-s) z - 1) m(z) + s = 0,  s = psi/phi,
  // as a formal power series in z
  const int Q = 8;
  for (const rational& s : {rational(1), rational(2), rational(1, 2)}) {
    TruncatedSeries<rational> m(Q + 1);
    m.c[0] = s;
    for (int q = 1; q <= Q; ++q) m.c[q] = s * mp_moment(q, s, rational(1));
    const TruncatedSeries<rational> m2 = m.mul(m);
    TruncatedSeries<rational> res(Q + 1);
    res.add_scaled(rational(1), 1, m2);       // z m^2
    res.add_scaled(rational(1) - s, 1, m);    // (1-s) z m
    res.add_scaled(rational(-1), 0, m);       // -m
    res.c[0] += s;
    for (int k = 0; k <= Q - 1; ++k) CHECK(res.c[k] == rational(0));
  }
}

TEST_CASE("companion transform under argument inversion hits that quadratic") {
  for (double psi : {1.0, 2.0, 0.75}) {
    const LawParams p{1.0, 0.0, 1.0, psi};
    const StieltjesSolver solver(p);
    const double s = p.psi / p.phi;
    for (cplx z : {cplx(0.3, 0.4), cplx(2.0, -1.5)}) {
      const cplx y = p.phi / (p.psi * z);
      const cplx gt = companion_transform(solver.solve(y), y, p);
      const cplx m = -gt / z;
      const cplx res = z * m * m + ((1.0 - s) * z - 1.0) * m + s;
      CHECK(std::abs(res) < 1e-9);
    }
  }
}

TEST_CASE("density reconstruction for the square Marchenko-Pastur law") {
  const LawParams p{1.0, 0.0, 1.0, 1.0};
  const DensityResult d = compute_density(p);
  const MarchenkoPastur mp(1.0, 1.0);

  CHECK(d.atom == 0.0);
  CHECK(std::abs(d.mass - 1.0) < 2e-3);
  CHECK(std::abs(d.mean - 1.0) < 2e-3);

  double sup = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const double x = d.x[i];
    if (std::min(std::abs(x - mp.support_lo()), std::abs(x - mp.support_hi())) <
        0.1)
      continue;  // edge neighborhoods excluded: kernel bias concentrates there
    sup = std::max(sup, std::abs(d.rho[i] - mp.density(x)));
  }
  CHECK(sup < 1e-3);

  // detected support within the eta-widened tolerance of [0, 4]
  CHECK(std::abs(d.support_lo - mp.support_lo()) < 0.2);
  CHECK(std::abs(d.support_hi - mp.support_hi()) < 0.2);
}

TEST_CASE("density handles the rank-deficient aspect with an atom") {
  const LawParams p{1.0, 0.0, 2.0, 1.0};  // phi/psi = 2: half the modes at 0
  const DensityResult d = compute_density(p);
  const MarchenkoPastur mp(2.0, 1.0);
  CHECK(d.atom == Catch::Approx(0.5).margin(1e-15));
  CHECK(std::abs(d.mass + d.atom - 1.0) < 2e-3);
  double sup = 0.0;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    const double x = d.x[i];
    if (std::min(std::abs(x - mp.support_lo()), std::abs(x - mp.support_hi())) <
        0.1)
      continue;
    sup = std::max(sup, std::abs(d.rho[i] - mp.density(x)));
  }
  CHECK(sup < 1e-3);
}

TEST_CASE("density of a genuinely nonlinear parameter point") {
  const LawParams p{1.0, 0.5, 1.0, 1.0};
  const DensityResult d = compute_density(p);
  CHECK(d.atom == 0.0);
  CHECK(std::abs(d.mass - 1.0) < 2e-3);
  CHECK(std::abs(d.mean - p.theta1) < 2e-3);  // m_1 = theta1
  // the eta tail widens the detected support by up to ~0.2
  CHECK(d.support_lo > -0.2);
  for (double r : d.rho) CHECK(r >= 0.0);
}

TEST_CASE("ridge trace against the closed-form pin and the integrator") {
  const LawParams p{1.0, 0.0, 1.0, 1.0};
  // int dMP(1)(x) / (x + 1) = (sqrt 5 - 1)/2
  const double pin = (std::sqrt(5.0) - 1.0) / 2.0;
  CHECK(std::abs(ridge_trace(p, 1.0) - pin) < 1e-7);

  const MarchenkoPastur mp(1.0, 1.0);
  const double quad = mp.expect([](double x) { return 1.0 / (x + 1.0); });
  CHECK(std::abs(quad - pin) < 1e-9);

  // decreasing in gamma, and gamma * trace -> total mass
  const double t01 = ridge_trace(p, 0.1);
  const double t1 = ridge_trace(p, 1.0);
  const double t10 = ridge_trace(p, 10.0);
  CHECK(t01 > t1);
  CHECK(t1 > t10);
  CHECK(std::abs(1e6 * ridge_trace(p, 1e6) - 1.0) < 1e-5);

  // companion side keeps its own atom when n1 < m
  const LawParams thin{1.0, 0.0, 1.0, 2.0};  // phi/psi = 1/2
  const double tr = ridge_trace(thin, 1.0);
  CHECK(tr > 0.0);
  // the m-side law has mass 1: gamma * trace -> 1 here too
  CHECK(std::abs(1e6 * ridge_trace(thin, 1e6) - 1.0) < 1e-5);
}

TEST_CASE("equation degenerates to a quadratic when theta2 = 0") {
  const auto tab = equation_coefficient_table<double>(1.0, 0.0, 0.7, 1.3);
  for (int t = 0; t < 3; ++t) {
    CHECK(tab[3][t] == 0.0);
    CHECK(tab[4][t] == 0.0);
  }
  // and to a cubic when theta1 = theta2
  const auto tab2 = equation_coefficient_table<double>(1.5, 1.5, 0.7, 1.3);
  for (int t = 0; t < 3; ++t) CHECK(tab2[4][t] == 0.0);
  CHECK(tab2[3][2] != 0.0);
}

TEST_CASE("solver input validation") {
  const LawParams p{1.0, 0.0, 1.0, 1.0};
  CHECK_THROWS_AS(solve_G(cplx(1.0, 0.0), p), ValidationError);
  CHECK_THROWS_AS(ridge_trace(p, 0.0), ValidationError);
  CHECK_THROWS_AS(ridge_trace(p, -1.0), ValidationError);
  LawParams bad{1.0, 2.0, 1.0, 1.0};  // theta2 > theta1
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  LawParams bad2{0.0, 0.0, 1.0, 1.0};
  CHECK_THROWS_AS(bad2.validate(), ValidationError);
}
