#pragma once

#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "rkt/digest.hpp"
#include "rkt/errors.hpp"
#include "rkt/feature_space.hpp"
#include "rkt/kernels.hpp"
#include "rkt/robustness.hpp"
#include "rkt/sensing.hpp"
#include "rkt/sparsity.hpp"
#include "rkt/version.hpp"

namespace rkt {

using njson = nlohmann::ordered_json;

// JSON has no non-finite numbers; they are carried as the strings "inf",
// "-inf", and "nan" so reports stay lossless.
inline njson json_number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline njson json_vector(const std::vector<double>& v) {
  njson arr = njson::array();
  for (double x : v) arr.push_back(json_number(x));
  return arr;
}

inline double number_from_json(const njson& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw error("unrecognized numeric string in report: " + s);
  }
  return j.get<double>();
}

inline njson config_json(const transform_config& cfg) {
  njson lengths = njson::array();
  for (auto k : cfg.kernel_lengths) lengths.push_back(k);
  return njson{{"num_kernels", cfg.num_kernels},
               {"kernel_lengths", lengths},
               {"seed", cfg.seed},
               {"dilation", to_string(cfg.dilation)},
               {"padding", to_string(cfg.padding)},
               {"weight_law", to_string(cfg.law)},
               {"standardize_inputs", cfg.standardize_inputs}};
}

inline njson report_json(const coherence_report& r) {
  return njson{{"schema_version", report_schema_version},
               {"report", "coherence-bound"},
               {"mu", json_number(r.mu)},
               {"arg_pair", {r.arg_pair.first, r.arg_pair.second}},
               {"alpha", json_number(r.alpha)},
               {"bound_value", json_number(r.bound_value)},
               {"vacuous", r.vacuous},
               {"trials", r.trials},
               {"empirical_exceed_rate", json_number(r.empirical_exceed_rate)},
               {"std_error", json_number(r.std_error)},
               {"within_bound", r.within_bound}};
}

inline njson report_json(const recoverability_verdict& v) {
  return njson{{"schema_version", report_schema_version},
               {"report", "recoverability"},
               {"s", v.s},
               {"n", v.n},
               {"k", v.k},
               {"c_s", json_number(v.c_s)},
               {"mu_used", json_number(v.mu_used)},
               {"rip_threshold", json_number(v.rip_threshold)},
               {"coherence_threshold", json_number(v.coherence_threshold)},
               {"rip_ok", v.rip_ok},
               {"coherence_ok", v.coherence_ok}};
}

inline njson report_json(const sparsity_report& r) {
  return njson{{"schema_version", report_schema_version},
               {"report", "sparsity"},
               {"ppv", json_number(r.ppv)},
               {"inv_ppv", json_number(r.inv_ppv)},
               {"estimated_s", json_number(r.estimated_s)},
               {"threshold_used", json_number(r.threshold_used)},
               {"n", r.n},
               {"positive_count", r.positive_count}};
}

inline njson report_json(const axiom_result& a) {
  return njson{{"axiom", axiom_code(a.axiom)},
               {"name", axiom_name(a.axiom)},
               {"expected", a.expected_satisfied ? "satisfied" : "violated"},
               {"observed", a.observed_satisfied ? "satisfied" : "violated"},
               {"witness", a.witness}};
}

inline njson report_json(const std::vector<axiom_result>& battery) {
  njson rows = njson::array();
  for (const auto& a : battery) rows.push_back(report_json(a));
  return njson{{"schema_version", report_schema_version},
               {"report", "axiom-battery"},
               {"axioms", rows}};
}

inline njson report_json(const robustness_certificate& c) {
  return njson{{"schema_version", report_schema_version},
               {"report", "lipschitz-certificate"},
               {"l", c.l},
               {"n", c.n},
               {"alpha", json_number(c.alpha)},
               {"chi2_quantile", json_number(c.chi2_quantile)},
               {"ratio_bound", json_number(c.ratio_bound)},
               {"norm_ratio_bound", json_number(c.norm_ratio_bound)},
               {"confidence", json_number(c.confidence)},
               {"empirical",
                {{"trials", c.trials},
                 {"max_observed_ratio", json_number(c.max_observed_ratio)},
                 {"violation_count", c.violation_count},
                 {"violation_rate", json_number(c.violation_rate)},
                 {"std_error", json_number(c.std_error)},
                 {"pass", c.empirical_pass},
                 {"noise_law", to_string(c.law)},
                 {"noise_sigma", json_number(c.noise_sigma)}}}};
}

inline njson report_json(const shift_invariance_report& r) {
  njson shifts = njson::array();
  for (auto c : r.shifts_tested) shifts.push_back(c);
  return njson{{"schema_version", report_schema_version},
               {"report", "shift-invariance"},
               {"shifts_tested", shifts},
               {"padding", r.padding},
               {"max_feature_discrepancy", json_number(r.max_feature_discrepancy)},
               {"exact", r.exact}};
}

inline njson report_json(const pca_report& r) {
  njson ks = njson::array();
  for (const auto& [t, k] : r.threshold_ks)
    ks.push_back(njson{{"threshold", json_number(t)}, {"k", k}});
  return njson{{"schema_version", report_schema_version},
               {"report", "pca-effective-dim"},
               {"explained_variance_ratio", json_vector(r.explained_variance_ratio)},
               {"k90", r.k90},
               {"k95", r.k95},
               {"threshold_ks", ks},
               {"total_features", r.total_features},
               {"scope", r.scope}};
}

// Provenance record emitted with every CLI run; identical flags reproduce the
// referenced outputs bit-exactly (the timestamp is informational).
struct run_manifest {
  std::string subcommand;
  njson config;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> input_digests;  // path, fnv1a64
  std::string timestamp_utc;
};

inline std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

inline njson manifest_json(const run_manifest& m) {
  njson inputs = njson::array();
  for (const auto& [path, digest] : m.input_digests)
    inputs.push_back(njson{{"path", path}, {"fnv1a64", digest}});
  return njson{{"schema_version", report_schema_version},
               {"tool_version", version},
               {"subcommand", m.subcommand},
               {"seed", m.seed},
               {"config", m.config},
               {"inputs", inputs},
               {"timestamp_utc", m.timestamp_utc}};
}

inline njson features_json(const feature_matrix& fm,
                           const std::vector<std::string>& labels,
                           const transform_config& cfg) {
  if (labels.size() != fm.rows)
    throw dimension_error("features_json: label count does not match rows");
  njson ids = njson::array();
  for (auto id : fm.kernel_ids) ids.push_back(id);
  njson rows = njson::array();
  for (std::size_t r = 0; r < fm.rows; ++r) {
    njson row = njson::array();
    for (std::size_t c = 0; c < fm.cols; ++c) row.push_back(json_number(fm.at(r, c)));
    rows.push_back(std::move(row));
  }
  njson lab = njson::array();
  for (const auto& l : labels) lab.push_back(l);
  return njson{{"schema_version", report_schema_version},
               {"config", config_json(cfg)},
               {"kernel_set_id", fm.kernel_set_id},
               {"kernel_ids", ids},
               {"labels", lab},
               {"rows", rows}};
}

inline njson model_json(const ridge_model& m) {
  njson classes = njson::array();
  for (const auto& c : m.class_labels) classes.push_back(c);
  njson weights = njson::array();
  for (std::size_t c = 0; c < m.weights.rows; ++c) {
    njson row = njson::array();
    for (std::size_t p = 0; p < m.weights.cols; ++p)
      row.push_back(json_number(m.weights.at(c, p)));
    weights.push_back(std::move(row));
  }
  return njson{{"schema_version", report_schema_version},
               {"model", "ridge-one-vs-rest"},
               {"class_labels", classes},
               {"lambda", json_number(m.lambda)},
               {"weights", weights},
               {"intercepts", json_vector(m.intercepts)},
               {"column_mean", json_vector(m.column_mean)},
               {"column_scale", json_vector(m.column_scale)}};
}

inline ridge_model model_from_json(const njson& j) {
  ridge_model m;
  for (const auto& c : j.at("class_labels")) m.class_labels.push_back(c.get<std::string>());
  m.lambda = number_from_json(j.at("lambda"));
  const auto& w = j.at("weights");
  const std::size_t rows = w.size();
  const std::size_t cols = rows == 0 ? 0 : w.at(0).size();
  m.weights = matrix(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (w.at(r).size() != cols) throw error("ragged weight matrix in model file");
    for (std::size_t c = 0; c < cols; ++c)
      m.weights.at(r, c) = number_from_json(w.at(r).at(c));
  }
  for (const auto& v : j.at("intercepts")) m.intercepts.push_back(number_from_json(v));
  for (const auto& v : j.at("column_mean")) m.column_mean.push_back(number_from_json(v));
  for (const auto& v : j.at("column_scale")) m.column_scale.push_back(number_from_json(v));
  if (m.class_labels.size() != rows || m.intercepts.size() != rows ||
      m.column_mean.size() != cols || m.column_scale.size() != cols)
    throw error("inconsistent shapes in model file");
  return m;
}

inline void write_json_file(const njson& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw error("cannot write JSON file: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw error("write failure: " + path);
}

inline njson read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open JSON file: " + path);
  njson j;
  in >> j;
  return j;
}

}  // namespace rkt
