// File output helpers: RFC-4180 CSV (CRLF, '.' decimal, 17 significant
// digits) and JSON documents tagged with the output schema version.
#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "nlspec/activation.hpp"
#include "nlspec/montecarlo.hpp"
#include "nlspec/stieltjes.hpp"
#include "nlspec/version.hpp"

namespace nlspec {

// Shortest decimal string that identifies the double at 17 significant
// digits, independent of the global locale (std::to_chars never consults
// it, unlike printf-family formatting).
inline std::string format_value(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  if (res.ec != std::errc())
    throw NumericalError("format_value: to_chars failed");
  return std::string(buf.data(), res.ptr);
}

// Quote a field only when RFC 4180 requires it (embedded comma, quote, or
// line break), doubling any interior quotes.
inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Accumulates a CSV document in memory; rows are terminated with CRLF as
// RFC 4180 specifies, so files must be written in binary mode to keep the
// bytes identical across platforms.
class CsvBuilder {
 public:
  CsvBuilder& cell(const std::string& field) {
    if (!row_open_)
      row_open_ = true;
    else
      body_ += ',';
    body_ += csv_escape(field);
    return *this;
  }
  CsvBuilder& cell(double v) { return cell(format_value(v)); }
  CsvBuilder& cell(long long v) { return cell(std::to_string(v)); }
  CsvBuilder& end_row() {
    body_ += "\r\n";
    row_open_ = false;
    return *this;
  }
  const std::string& str() const { return body_; }

 private:
  std::string body_;
  bool row_open_ = false;
};

// Binary mode so CRLF row terminators survive untranslated.
inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) throw ValidationError("write failed: " + path);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open for reading: " + path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  return content;
}

// One row per (trial, layer): schema tag, indices, eigenvalue count, then
// the ascending eigenvalues.  The count column lets a reader slice the
// variable-width tail without guessing.
inline std::string eigenvalues_csv(const std::vector<TrialSpectra>& trials) {
  CsvBuilder csv;
  csv.cell("schema_version").cell("trial").cell("layer").cell("count")
      .cell("eigenvalues").end_row();
  for (std::size_t t = 0; t < trials.size(); ++t) {
    const auto& layers = trials[t].layer_spectra;
    for (std::size_t p = 0; p < layers.size(); ++p) {
      csv.cell(schema_version)
          .cell(static_cast<long long>(t))
          .cell(static_cast<long long>(p + 1))
          .cell(static_cast<long long>(layers[p].size()));
      for (double ev : layers[p]) csv.cell(ev);
      csv.end_row();
    }
  }
  return csv.str();
}

// Density on its grid; the companion JSON sidecar carries everything that
// is not a per-point value (support, atom, bandwidth, parameters).
inline std::string density_csv(const DensityResult& d) {
  CsvBuilder csv;
  csv.cell("x").cell("rho").end_row();
  for (std::size_t i = 0; i < d.x.size(); ++i)
    csv.cell(d.x[i]).cell(d.rho[i]).end_row();
  return csv.str();
}

inline nlohmann::json law_params_json(const LawParams& p) {
  return {{"theta1", p.theta1},
          {"theta2", p.theta2},
          {"phi", p.phi},
          {"psi", p.psi}};
}

inline nlohmann::json density_sidecar_json(const DensityResult& d,
                                           const LawParams& p) {
  return {{"schema_version", schema_version},
          {"support", {d.support_lo, d.support_hi}},
          {"atom", d.atom},
          {"eta", d.eta},
          {"params", law_params_json(p)},
          {"mass", d.mass},
          {"mean", d.mean}};
}

inline nlohmann::json comparison_report_json(const ComparisonReport& r) {
  nlohmann::json gaps = nlohmann::json::array();
  for (const auto& g : r.moment_gaps)
    gaps.push_back({{"q", g.q},
                    {"empirical", g.empirical},
                    {"theoretical", g.theoretical},
                    {"z_score", g.z_score}});
  return {{"schema_version", schema_version},
          {"ks_distance", r.ks_distance},
          {"l1_cdf_distance", r.l1_cdf_distance},
          {"moment_gaps", gaps},
          {"trials", r.trials}};
}

}  // namespace nlspec
