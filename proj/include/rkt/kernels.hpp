#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "rkt/digest.hpp"
#include "rkt/errors.hpp"
#include "rkt/rng.hpp"
#include "rkt/series.hpp"
#include "rkt/threading.hpp"

namespace rkt {

enum class padding_mode { none, zero, circular };

// Per-run policy from which each kernel's padding_mode is assigned.
enum class padding_policy { always_zero, random_zero_or_none, circular };

// variance_scaled: weights i.i.d. Gaussian with mean 0, variance 1/K.
// centered_unit: unit-variance Gaussian draws re-centered to mean 0 per kernel.
enum class weight_law { variance_scaled, centered_unit };

struct dilation_policy {
  enum class kind_t { fixed, exponential_random };
  kind_t kind = kind_t::exponential_random;
  std::uint32_t fixed_d = 1;

  static dilation_policy fixed(std::uint32_t d) {
    return {kind_t::fixed, d};
  }
  static dilation_policy exponential_random() {
    return {kind_t::exponential_random, 1};
  }
};

struct kernel_spec {
  std::vector<double> weights;
  double bias = 0.0;
  std::uint32_t dilation = 1;
  padding_mode padding = padding_mode::circular;
  std::uint64_t id = 0;  // 1-based index within the generated set

  std::size_t length() const { return weights.size(); }
  std::size_t effective_span() const {
    return (weights.size() - 1) * dilation + 1;
  }
};

struct transform_config {
  std::uint64_t num_kernels = 10000;
  std::vector<std::uint32_t> kernel_lengths = {7, 9, 11};
  std::uint64_t seed = 0;
  dilation_policy dilation = dilation_policy::exponential_random();
  padding_policy padding = padding_policy::circular;
  weight_law law = weight_law::variance_scaled;
  bool standardize_inputs = true;
};

inline const char* to_string(padding_mode m) {
  switch (m) {
    case padding_mode::none: return "none";
    case padding_mode::zero: return "zero";
    case padding_mode::circular: return "circular";
  }
  return "?";
}

inline const char* to_string(padding_policy p) {
  switch (p) {
    case padding_policy::always_zero: return "always-zero";
    case padding_policy::random_zero_or_none: return "random-zero-or-none";
    case padding_policy::circular: return "circular";
  }
  return "?";
}

inline const char* to_string(weight_law w) {
  switch (w) {
    case weight_law::variance_scaled: return "variance-scaled";
    case weight_law::centered_unit: return "centered-unit";
  }
  return "?";
}

inline std::string to_string(const dilation_policy& p) {
  if (p.kind == dilation_policy::kind_t::fixed)
    return "fixed:" + std::to_string(p.fixed_d);
  return "exponential";
}

// Canonical fingerprint of (config, seed); stamped on feature matrices.
inline std::string config_fingerprint(const transform_config& cfg) {
  std::string s = "L=" + std::to_string(cfg.num_kernels) + ";K=";
  for (auto k : cfg.kernel_lengths) s += std::to_string(k) + ",";
  s += ";seed=" + std::to_string(cfg.seed);
  s += ";dilation=" + to_string(cfg.dilation);
  s += ";padding=" + std::string(to_string(cfg.padding));
  s += ";law=" + std::string(to_string(cfg.law));
  s += ";standardize=" + std::to_string(cfg.standardize_inputs ? 1 : 0);
  return to_hex(fnv1a64(s));
}

namespace detail {

// Largest u with (k-1)*2^u <= n-1, i.e. the exponent ceiling of the dilation law.
inline std::uint32_t max_dilation_exponent(std::uint32_t k, std::size_t n) {
  std::uint32_t u = 0;
  while ((static_cast<std::uint64_t>(k) - 1) * (std::uint64_t{2} << u) <= n - 1) ++u;
  return u;
}

inline bool any_feasible_length(const transform_config& cfg, std::size_t n) {
  for (std::uint32_t k : cfg.kernel_lengths) {
    if (k < 1) continue;
    const std::uint64_t d =
        cfg.dilation.kind == dilation_policy::kind_t::fixed ? cfg.dilation.fixed_d : 1;
    if ((static_cast<std::uint64_t>(k) - 1) * d + 1 <= n) return true;
  }
  return false;
}

}  // namespace detail

// Draws the kernel set for signals of length n_hint. Each kernel consumes its
// own counter-based stream (keyed by seed and 1-based kernel id) in a fixed
// order: length, dilation, padding, weights, bias; an infeasible (K, d) pair is
// resampled from the same stream. Generation is therefore reproducible and
// independent of evaluation order.
inline std::vector<kernel_spec> generate_kernels(const transform_config& cfg,
                                                 std::size_t n_hint) {
  if (cfg.num_kernels < 1) throw config_error("num_kernels must be >= 1");
  if (cfg.kernel_lengths.empty())
    throw config_error("kernel_lengths must be non-empty");
  for (std::uint32_t k : cfg.kernel_lengths)
    if (k < 1) throw config_error("kernel length must be >= 1");
  if (n_hint < 1) throw config_error("series length hint must be >= 1");
  if (cfg.dilation.kind == dilation_policy::kind_t::fixed && cfg.dilation.fixed_d < 1)
    throw config_error("fixed dilation must be >= 1");
  if (!detail::any_feasible_length(cfg, n_hint))
    throw config_error("no kernel length fits a series of length " +
                       std::to_string(n_hint) + " under the dilation policy");

  std::vector<kernel_spec> kernels(cfg.num_kernels);
  for (std::uint64_t i = 0; i < cfg.num_kernels; ++i) {
    rng_stream rng(cfg.seed, i + 1);
    kernel_spec& ks = kernels[i];
    ks.id = i + 1;

    std::uint32_t k = 0;
    std::uint32_t d = 0;
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 10000)
        throw config_error("kernel shape sampling failed to find a feasible (K, d)");
      k = cfg.kernel_lengths[rng.uniform_int(cfg.kernel_lengths.size())];
      if (cfg.dilation.kind == dilation_policy::kind_t::fixed) {
        d = cfg.dilation.fixed_d;
      } else if (k == 1) {
        d = 1;
      } else {
        if (k > n_hint) continue;
        const std::uint32_t u_max = detail::max_dilation_exponent(k, n_hint);
        d = std::uint32_t{1} << rng.uniform_int(u_max + 1);
      }
      if ((static_cast<std::uint64_t>(k) - 1) * d + 1 <= n_hint) break;
    }
    ks.dilation = d;

    switch (cfg.padding) {
      case padding_policy::always_zero:
        ks.padding = padding_mode::zero;
        break;
      case padding_policy::random_zero_or_none:
        ks.padding = rng.uniform_int(2) == 0 ? padding_mode::zero : padding_mode::none;
        break;
      case padding_policy::circular:
        ks.padding = padding_mode::circular;
        break;
    }

    ks.weights.resize(k);
    if (cfg.law == weight_law::variance_scaled) {
      const double sd = 1.0 / std::sqrt(static_cast<double>(k));
      for (auto& w : ks.weights) w = rng.gaussian(0.0, sd);
    } else {
      double mean = 0.0;
      for (auto& w : ks.weights) {
        w = rng.gaussian();
        mean += w;
      }
      mean /= static_cast<double>(k);
      for (auto& w : ks.weights) w -= mean;
    }
    ks.bias = rng.uniform(-1.0, 1.0);
  }
  return kernels;
}

struct convolved_series {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

// Sliding dot product with dilation d and the kernel's padding rule:
//   out[n] = bias + sum_j weights[j] * x[n + j*d]
// none: only fully supported positions (length N - span + 1); zero: positions
// past the end read as 0 (length N); circular: indices wrap mod N (length N).
inline convolved_series convolve(const time_series& x, const kernel_spec& k) {
  validate_series(x, "convolve");
  if (k.weights.empty()) throw std::invalid_argument("convolve: empty kernel");
  const std::size_t n = x.size();
  const std::size_t span = k.effective_span();
  if (span > n) throw span_error(k.length(), k.dilation, n);

  const std::size_t klen = k.weights.size();
  const double* w = k.weights.data();
  const double* xv = x.values.data();
  const std::size_t d = k.dilation;
  convolved_series out;

  switch (k.padding) {
    case padding_mode::none: {
      const std::size_t m = n - span + 1;
      out.values.resize(m);
      for (std::size_t p = 0; p < m; ++p) {
        double acc = k.bias;
        for (std::size_t j = 0; j < klen; ++j) acc += w[j] * xv[p + j * d];
        out.values[p] = acc;
      }
      break;
    }
    case padding_mode::zero: {
      out.values.resize(n);
      for (std::size_t p = 0; p < n; ++p) {
        double acc = k.bias;
        const std::size_t jmax = p + (klen - 1) * d < n
                                     ? klen
                                     : (n - p + d - 1) / d;
        for (std::size_t j = 0; j < jmax; ++j) acc += w[j] * xv[p + j * d];
        out.values[p] = acc;
      }
      break;
    }
    case padding_mode::circular: {
      out.values.resize(n);
      for (std::size_t p = 0; p < n; ++p) {
        double acc = k.bias;
        for (std::size_t j = 0; j < klen; ++j) {
          std::size_t idx = p + j * d;
          if (idx >= n) idx -= n;  // span <= n, so one wrap suffices
          acc += w[j] * xv[idx];
        }
        out.values[p] = acc;
      }
      break;
    }
  }
  return out;
}

inline std::size_t positive_count(const convolved_series& y) {
  if (y.values.empty()) throw std::invalid_argument("positive_count: empty series");
  std::size_t c = 0;
  for (double v : y.values)
    if (v > 0.0) ++c;
  return c;
}

// Fraction of strictly positive values; zeros do not count. The denominator is
// the convolved length (N under padding, N - span + 1 without).
inline double ppv(const convolved_series& y) {
  return static_cast<double>(positive_count(y)) /
         static_cast<double>(y.values.size());
}

struct feature_matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major
  std::vector<std::uint64_t> kernel_ids;
  std::string kernel_set_id;

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Integer PPV numerators of one series under a fixed kernel set; the exact
// (count-level) currency used by shift-invariance checks.
inline std::vector<std::uint64_t> feature_counts(
    const time_series& x, const std::vector<kernel_spec>& kernels) {
  std::vector<std::uint64_t> counts(kernels.size());
  for (std::size_t i = 0; i < kernels.size(); ++i)
    counts[i] = positive_count(convolve(x, kernels[i]));
  return counts;
}

// Applies an already generated kernel set to every instance. Row r, column i
// holds ppv(convolve(instance r, kernel i)); output placement is by index, so
// the result is identical for any thread count. Used directly when several
// datasets (e.g. train and test) must share one kernel set.
inline feature_matrix apply_kernels(const dataset& ds,
                                    const std::vector<kernel_spec>& kernels,
                                    const transform_config& cfg,
                                    unsigned threads = 1) {
  if (ds.instances.empty()) throw std::invalid_argument("transform: empty dataset");
  if (kernels.empty()) throw std::invalid_argument("transform: empty kernel set");
  for (const auto& inst : ds.instances) validate_series(inst.series, "transform");

  std::vector<time_series> inputs;
  inputs.reserve(ds.instances.size());
  for (const auto& inst : ds.instances)
    inputs.push_back(cfg.standardize_inputs ? standardize(inst.series).series
                                            : inst.series);

  feature_matrix fm;
  fm.rows = ds.instances.size();
  fm.cols = kernels.size();
  fm.data.resize(fm.rows * fm.cols);
  fm.kernel_ids.reserve(kernels.size());
  for (const auto& k : kernels) fm.kernel_ids.push_back(k.id);
  fm.kernel_set_id = config_fingerprint(cfg);

  parallel_for(fm.rows, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      double* row = fm.data.data() + r * fm.cols;
      for (std::size_t i = 0; i < kernels.size(); ++i)
        row[i] = ppv(convolve(inputs[r], kernels[i]));
    }
  });
  return fm;
}

// Full two-stage transform: per-kernel dilated convolution, then PPV pooling.
// Kernels are generated against the shortest series in the dataset.
inline feature_matrix transform(const dataset& ds, const transform_config& cfg,
                                unsigned threads = 1) {
  if (ds.instances.empty()) throw std::invalid_argument("transform: empty dataset");
  std::size_t min_n = ds.instances.front().series.size();
  for (const auto& inst : ds.instances) {
    validate_series(inst.series, "transform");
    min_n = std::min(min_n, inst.series.size());
  }
  return apply_kernels(ds, generate_kernels(cfg, min_n), cfg, threads);
}

struct labeled_features {
  feature_matrix features;
  std::vector<std::string> labels;
};

// CSV layout: header "label,k<id>,...", then one row per instance. Values are
// written in shortest round-trip form, so save/load is bit-exact.
inline void save_features_csv(const feature_matrix& fm,
                              const std::vector<std::string>& labels,
                              const std::string& path) {
  if (labels.size() != fm.rows)
    throw dimension_error("save_features_csv: " + std::to_string(labels.size()) +
                          " labels for " + std::to_string(fm.rows) + " rows");
  std::ofstream out(path);
  if (!out) throw error("cannot write feature file: " + path);
  out << "label";
  for (std::size_t c = 0; c < fm.cols; ++c)
    out << ",k" << (c < fm.kernel_ids.size() ? fm.kernel_ids[c] : c + 1);
  out << '\n';
  for (std::size_t r = 0; r < fm.rows; ++r) {
    out << labels[r];
    for (std::size_t c = 0; c < fm.cols; ++c)
      out << ',' << detail::format_double(fm.at(r, c));
    out << '\n';
  }
  if (!out) throw error("write failure: " + path);
}

inline labeled_features load_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open feature file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw error("empty feature file: " + path);

  labeled_features out;
  {
    const auto header = detail::split(line, ',');
    if (header.empty() || detail::trim(header[0]) != "label")
      throw parse_error(0, 0, "feature header must start with 'label'");
    for (std::size_t c = 1; c < header.size(); ++c) {
      auto name = detail::trim(header[c]);
      if (name.size() < 2 || name[0] != 'k')
        throw parse_error(0, c, "kernel column name must look like k<id>");
      std::uint64_t id = 0;
      const auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), id);
      if (ec != std::errc{} || ptr != name.data() + name.size())
        throw parse_error(0, c, "kernel column name must look like k<id>");
      out.features.kernel_ids.push_back(id);
    }
    out.features.cols = header.size() - 1;
  }

  std::size_t row = 1;
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) {
      ++row;
      continue;
    }
    const auto fields = detail::split(line, ',');
    if (fields.size() != out.features.cols + 1)
      throw parse_error(row, 0, "expected " + std::to_string(out.features.cols + 1) +
                                    " fields, got " + std::to_string(fields.size()));
    out.labels.emplace_back(detail::trim(fields[0]));
    for (std::size_t f = 1; f < fields.size(); ++f)
      out.features.data.push_back(detail::parse_sample(fields[f], row, f));
    ++row;
  }
  out.features.rows = out.labels.size();
  if (out.features.rows == 0) throw error("empty feature file: " + path);
  return out;
}

}  // namespace rkt
