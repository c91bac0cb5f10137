// Output formats: CSV escaping and layout, round-trip precision of the
// number formatter, JSON documents, the L1 CDF distance, and the SVG
// figure generator.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "nlspec/io.hpp"
#include "nlspec/svg.hpp"

using namespace nlspec;

TEST_CASE("number formatting round-trips doubles at full precision") {
  const std::vector<double> values = {0.0,    1.0 / 3.0, 1e-300, 2.5e300,
                                      -1.25,  3.14159265358979,
                                      0.1,    123456789.123456789};
  for (double v : values) {
    const std::string s = format_value(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
    CHECK(s.find(',') == std::string::npos);  // '.' decimal only
  }
}

TEST_CASE("csv fields are quoted exactly when the grammar requires it") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("1.5e-3") == "1.5e-3");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_escape("line\nbreak") == "\"line\nbreak\"");
}

TEST_CASE("csv rows are built with CRLF terminators") {
  CsvBuilder csv;
  csv.cell("a").cell("b").end_row();
  csv.cell(1.5).cell(static_cast<long long>(7)).end_row();
  CHECK(csv.str() == "a,b\r\n1.5,7\r\n");
}

TEST_CASE("eigenvalue table has one row per trial and layer") {
  std::vector<TrialSpectra> trials(2);
  trials[0].layer_spectra = {{1.0, 2.0}, {3.0}};
  trials[1].layer_spectra = {{4.0, 5.0}, {6.0}};
  const std::string csv = eigenvalues_csv(trials);

  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (true) {
    const std::size_t nl = csv.find("\r\n", pos);
    if (nl == std::string::npos) break;
    lines.push_back(csv.substr(pos, nl - pos));
    pos = nl + 2;
  }
  REQUIRE(lines.size() == 5);  // header + 2 trials x 2 layers
  CHECK(lines[0] == "schema_version,trial,layer,count,eigenvalues");
  CHECK(lines[1] == std::string(schema_version) + ",0,1,2,1,2");
  CHECK(lines[2] == std::string(schema_version) + ",0,2,1,3");
  CHECK(lines[4] == std::string(schema_version) + ",1,2,1,6");
}

TEST_CASE("density files carry the grid and a sidecar with the law") {
  DensityResult d;
  d.x = {0.0, 0.5, 1.0};
  d.rho = {0.125, 0.5, 0.25};  // dyadic, so the 17-digit form stays short
  d.atom = 0.25;
  d.eta = 1e-3;
  d.support_lo = 0.0;
  d.support_hi = 1.0;
  d.mass = 0.75;
  d.mean = 0.4;

  CHECK(density_csv(d) == "x,rho\r\n0,0.125\r\n0.5,0.5\r\n1,0.25\r\n");

  LawParams p;
  p.theta1 = 2.0;
  p.theta2 = 0.5;
  p.phi = 0.5;
  p.psi = 0.25;
  const nlohmann::json j = density_sidecar_json(d, p);
  CHECK(j.at("schema_version") == schema_version);
  CHECK(j.at("support").size() == 2);
  CHECK(j.at("support")[1] == 1.0);
  CHECK(j.at("atom") == 0.25);
  CHECK(j.at("eta") == 1e-3);
  CHECK(j.at("params").at("theta1") == 2.0);
  CHECK(j.at("params").at("psi") == 0.25);
}

TEST_CASE("comparison reports serialize with all their fields") {
  ComparisonReport rep;
  rep.ks_distance = 0.031;
  rep.l1_cdf_distance = 0.004;
  rep.trials = 10;
  rep.moment_gaps = {{1, 1.01, 1.0, 0.5}, {2, 2.9, 3.0, -1.2}};
  const nlohmann::json j = comparison_report_json(rep);
  CHECK(j.at("ks_distance") == 0.031);
  CHECK(j.at("trials") == 10);
  REQUIRE(j.at("moment_gaps").size() == 2);
  CHECK(j.at("moment_gaps")[1].at("q") == 2);
  CHECK(j.at("moment_gaps")[1].at("z_score") == -1.2);
}

TEST_CASE("text files round-trip with CRLF intact") {
  const std::string path = "/tmp/nlspec_io_test.csv";
  const std::string body = "x,rho\r\n1,2\r\n";
  write_text_file(path, body);
  CHECK(read_text_file(path) == body);
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_text_file("/nonexistent/dir/f.csv"), ValidationError);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/f.csv", "x"),
                  ValidationError);
}

TEST_CASE("L1 CDF distance reproduces a hand-computed value") {
  // single observation at 1/2 against the uniform CDF on [0,1]:
  // integral of |1{x >= 1/2} - x| dx = 1/4
  const std::vector<double> one = {0.5};
  const auto uniform_cdf = [](double x) {
    return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
  };
  CHECK(l1_cdf_distance(one, uniform_cdf, 0.0, 1.0, 100001) ==
        Catch::Approx(0.25).margin(1e-4));

  // a dense uniform grid sample is close to its own law
  std::vector<double> grid;
  for (int i = 0; i < 1000; ++i) grid.push_back((i + 0.5) / 1000.0);
  CHECK(l1_cdf_distance(grid, uniform_cdf, 0.0, 1.0) < 2e-3);

  CHECK_THROWS_AS(l1_cdf_distance(grid, uniform_cdf, 1.0, 0.0),
                  ValidationError);
}

TEST_CASE("svg figure contains histogram bars and the overlay curve") {
  std::vector<double> sample;
  for (int i = 0; i < 500; ++i)
    sample.push_back(4.0 * (i + 0.5) / 500.0);  // uniform on [0, 4]
  std::vector<double> cx, cr;
  for (int i = 0; i <= 100; ++i) {
    cx.push_back(4.0 * i / 100.0);
    cr.push_back(0.25);
  }
  SvgOptions opt;
  opt.title = "uniform check <&>";
  const std::string svg = histogram_overlay_svg(sample, cx, cr, 0.0, opt);

  CHECK(svg.rfind("<svg ", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<rect") != std::string::npos);
  CHECK(svg.find("&lt;&amp;&gt;") != std::string::npos);  // title escaped
  CHECK(svg.find("atom") == std::string::npos);

  const std::string with_atom = histogram_overlay_svg(sample, cx, cr, 0.5);
  CHECK(with_atom.find("atom") != std::string::npos);
  CHECK(with_atom.find("stroke-dasharray") != std::string::npos);

  CHECK_THROWS_AS(histogram_overlay_svg({1.0}, cx, cr), ValidationError);
  std::vector<double> bad_r(cx.size() + 1, 0.0);
  CHECK_THROWS_AS(histogram_overlay_svg(sample, cx, bad_r), ValidationError);
}
