#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "rkt/errors.hpp"

namespace rkt {

// A univariate signal: finite samples, length >= 1.
struct time_series {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

struct labeled_series {
  std::string label;
  time_series series;
};

struct dataset {
  std::vector<labeled_series> instances;
  std::string name;
};

enum class table_format { autodetect, csv, tsv };

inline void validate_series(const time_series& x, const char* who) {
  if (x.values.empty())
    throw std::invalid_argument(std::string(who) + ": empty series");
  for (double v : x.values)
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string(who) + ": non-finite sample");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline double parse_sample(std::string_view field, std::size_t row, std::size_t col) {
  field = trim(field);
  if (field.empty()) throw parse_error(row, col, "empty field");
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw parse_error(row, col, "non-numeric sample '" + std::string(field) + "'");
  if (!std::isfinite(value))
    throw parse_error(row, col, "non-finite sample '" + std::string(field) + "'");
  return value;
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Shortest decimal form that round-trips the exact double value.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

// One instance per line: label, then N samples. '#' lines are comments. The
// delimiter (comma or tab) is taken from the first data line unless forced.
inline dataset load_dataset(const std::string& path,
                            table_format format = table_format::autodetect) {
  std::ifstream in(path);
  if (!in) throw error("cannot open dataset file: " + path);

  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::string line;
    std::size_t idx = 0;
    while (std::getline(in, line)) lines.emplace_back(idx++, line);
  }
  while (!lines.empty() && detail::trim(lines.back().second).empty()) lines.pop_back();

  char delim = format == table_format::tsv ? '\t' : ',';
  bool delim_known = format != table_format::autodetect;

  dataset ds;
  ds.name = path;
  for (const auto& [row, raw] : lines) {
    const std::string_view line = raw;
    if (detail::trim(line).empty()) throw parse_error(row, 0, "empty row");
    if (detail::trim(line).front() == '#') continue;
    if (!delim_known) {
      delim = line.find('\t') != std::string_view::npos ? '\t' : ',';
      delim_known = true;
    }
    if (line.find(delim) == std::string_view::npos) {
      const char other = delim == ',' ? '\t' : ',';
      if (line.find(other) != std::string_view::npos)
        throw parse_error(row, 0, "inconsistent delimiter");
      throw parse_error(row, 0, "row has no sample fields");
    }
    const auto fields = detail::split(line, delim);
    labeled_series inst;
    inst.label = std::string(detail::trim(fields[0]));
    if (inst.label.empty()) throw parse_error(row, 0, "empty label");
    inst.series.values.reserve(fields.size() - 1);
    for (std::size_t f = 1; f < fields.size(); ++f)
      inst.series.values.push_back(detail::parse_sample(fields[f], row, f));
    ds.instances.push_back(std::move(inst));
  }
  if (ds.instances.empty()) throw error("empty dataset");
  return ds;
}

inline void save_dataset(const dataset& ds, const std::string& path,
                         table_format format = table_format::csv) {
  std::ofstream out(path);
  if (!out) throw error("cannot write dataset file: " + path);
  const char delim = format == table_format::tsv ? '\t' : ',';
  for (const auto& inst : ds.instances) {
    out << inst.label;
    for (double v : inst.series.values) out << delim << detail::format_double(v);
    out << '\n';
  }
  if (!out) throw error("write failure: " + path);
}

struct standardized {
  time_series series;
  bool degenerate = false;  // constant input, mapped to all zeros
};

// Zero mean, unit population (1/N) variance. Constant series cannot be scaled
// and come back as all zeros with the degenerate flag set instead of an error,
// since real archives contain flat series and classification must survive them.
// The statistics are accumulated in sorted value order: the result then depends
// only on the multiset of samples, so reordering (e.g. a circular shift) of the
// input commutes with standardization bit-exactly.
inline standardized standardize(const time_series& x) {
  validate_series(x, "standardize");
  const std::size_t n = x.size();
  std::vector<double> sorted = x.values;
  std::sort(sorted.begin(), sorted.end());
  double mean = 0.0;
  for (double v : sorted) mean += v;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double v : sorted) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n);

  standardized out;
  out.series.values.resize(n);
  if (var == 0.0) {
    out.degenerate = true;
    return out;
  }
  const double scale = 1.0 / std::sqrt(var);
  for (std::size_t i = 0; i < n; ++i)
    out.series.values[i] = (x.values[i] - mean) * scale;
  return out;
}

// y[n] = x[(n - c) mod N]; c may be negative or exceed N.
inline time_series circular_shift(const time_series& x, long long c) {
  validate_series(x, "circular_shift");
  const long long n = static_cast<long long>(x.size());
  time_series out;
  out.values.resize(x.size());
  for (long long i = 0; i < n; ++i) {
    long long src = (i - c) % n;
    if (src < 0) src += n;
    out.values[static_cast<std::size_t>(i)] = x.values[static_cast<std::size_t>(src)];
  }
  return out;
}

}  // namespace rkt
