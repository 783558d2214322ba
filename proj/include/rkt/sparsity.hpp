#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rkt/rng.hpp"
#include "rkt/series.hpp"

namespace rkt {

struct sparsity_report {
  double ppv = 0.0;
  double inv_ppv = 0.0;       // 1/ppv; +infinity when nothing clears the threshold
  double estimated_s = 0.0;   // 2 * N * ppv, the balanced-sign sparsity estimate
  double threshold_used = 0.0;
  std::size_t n = 0;
  std::size_t positive_count = 0;  // entries strictly above the threshold
};

// Counts entries strictly above the threshold. estimated_s is computed as
// 2 * count (algebraically 2 * N * ppv, but exact in floating point).
inline sparsity_report estimate_sparsity(const time_series& x, double threshold) {
  validate_series(x, "estimate_sparsity");
  sparsity_report rep;
  rep.n = x.size();
  rep.threshold_used = threshold;
  for (double v : x.values)
    if (v > threshold) ++rep.positive_count;
  rep.ppv = static_cast<double>(rep.positive_count) / static_cast<double>(rep.n);
  rep.estimated_s = 2.0 * static_cast<double>(rep.positive_count);
  rep.inv_ppv = rep.positive_count == 0
                    ? std::numeric_limits<double>::infinity()
                    : static_cast<double>(rep.n) /
                          static_cast<double>(rep.positive_count);
  return rep;
}

// Reciprocal-PPV sparsity measure S(c) = length / #(c_k > 0); +infinity when no
// entry is strictly positive. Always >= 1 when finite.
inline double inv_ppv_measure(const std::vector<double>& c) {
  if (c.empty()) throw std::invalid_argument("inv_ppv_measure: empty vector");
  std::size_t pos = 0;
  for (double v : c)
    if (v > 0.0) ++pos;
  if (pos == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(c.size()) / static_cast<double>(pos);
}

// Hurley-Rickard sparsity-measure axioms, probed against S(c) = 1/PPV(c).
enum class hurley_axiom {
  d1_robin_hood,   // transfers from rich to poor should strictly decrease S
  d2_scaling,      // S(alpha * c) = S(c) for alpha > 0
  d3_rising_tide,  // adding a constant to every entry should strictly decrease S
  d4_cloning,      // S(c || c) = S(c)
  p1_bill_gates,   // beyond some wealth, further riches should strictly raise S
  p2_babies        // appending zeros strictly raises S
};

inline const char* axiom_code(hurley_axiom a) {
  switch (a) {
    case hurley_axiom::d1_robin_hood: return "D1";
    case hurley_axiom::d2_scaling: return "D2";
    case hurley_axiom::d3_rising_tide: return "D3";
    case hurley_axiom::d4_cloning: return "D4";
    case hurley_axiom::p1_bill_gates: return "P1";
    case hurley_axiom::p2_babies: return "P2";
  }
  return "?";
}

inline const char* axiom_name(hurley_axiom a) {
  switch (a) {
    case hurley_axiom::d1_robin_hood: return "robin hood";
    case hurley_axiom::d2_scaling: return "scaling";
    case hurley_axiom::d3_rising_tide: return "rising tide";
    case hurley_axiom::d4_cloning: return "cloning";
    case hurley_axiom::p1_bill_gates: return "bill gates";
    case hurley_axiom::p2_babies: return "babies";
  }
  return "?";
}

// Which verdict the reciprocal-PPV measure is known to earn on each axiom.
inline bool axiom_expected_satisfied(hurley_axiom a) {
  switch (a) {
    case hurley_axiom::d2_scaling:
    case hurley_axiom::d4_cloning:
    case hurley_axiom::p2_babies:
      return true;
    default:
      return false;
  }
}

struct axiom_result {
  hurley_axiom axiom;
  bool expected_satisfied = false;
  bool observed_satisfied = false;
  std::string witness;
};

namespace detail {

// S(c) = len/pos as an exact rational; comparisons cross-multiply the integer
// counts so no floating-point division is involved.
struct measure_ratio {
  std::uint64_t len = 0;
  std::uint64_t pos = 0;  // 0 encodes the infinite sentinel
};

inline measure_ratio measure_of(const std::vector<double>& c) {
  measure_ratio m;
  m.len = c.size();
  for (double v : c)
    if (v > 0.0) ++m.pos;
  return m;
}

inline bool measure_equal(measure_ratio a, measure_ratio b) {
  if (a.pos == 0 || b.pos == 0) return a.pos == b.pos;
  return a.len * b.pos == b.len * a.pos;
}

inline bool measure_greater(measure_ratio a, measure_ratio b) {
  if (a.pos == 0) return b.pos != 0;
  if (b.pos == 0) return false;
  return a.len * b.pos > b.len * a.pos;
}

// Random probe vector: entries have magnitude in [1/16, 2] so that positive
// scalings and small additive shifts cannot flip signs through rounding.
inline std::vector<double> random_probe(rng_stream& rng, std::size_t min_len = 2) {
  const std::size_t n = min_len + rng.uniform_int(15);
  std::vector<double> c(n);
  for (auto& v : c) {
    const double mag = rng.uniform(1.0 / 16.0, 2.0);
    v = rng.uniform_int(2) == 0 ? mag : -mag;
  }
  return c;
}

inline std::string vec_to_string(const std::vector<double>& c, std::size_t max_elems = 8) {
  std::string s = "[";
  for (std::size_t i = 0; i < c.size() && i < max_elems; ++i) {
    if (i) s += ", ";
    s += format_double(c[i]);
  }
  if (c.size() > max_elems) s += ", ...";
  return s + "]";
}

// Ten log-spaced magnitudes spanning [2^-6, 2^6]; the documented search grid
// for the bounded bill-gates refutation.
inline std::vector<double> magnitude_grid() {
  std::vector<double> g(10);
  for (int t = 0; t < 10; ++t) g[t] = std::pow(2.0, -6.0 + 12.0 * t / 9.0);
  return g;
}

}  // namespace detail

// Probes one axiom with `trials` randomized inputs and reports the verdict with
// a concrete witness. Satisfaction claims are exact: the measure is a ratio of
// integer counts and every comparison cross-multiplies those counts.
inline axiom_result check_axiom(hurley_axiom axiom, std::uint64_t trials,
                                std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("check_axiom: trials must be >= 1");
  axiom_result res;
  res.axiom = axiom;
  res.expected_satisfied = axiom_expected_satisfied(axiom);
  res.observed_satisfied = true;
  const auto grid = detail::magnitude_grid();

  for (std::uint64_t t = 0; t < trials; ++t) {
    rng_stream rng(seed, t);
    switch (axiom) {
      case hurley_axiom::d2_scaling: {
        const auto c = detail::random_probe(rng);
        const double alpha = std::pow(2.0, rng.uniform(-6.0, 6.0));
        std::vector<double> scaled(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) scaled[i] = alpha * c[i];
        const bool ok = detail::measure_equal(detail::measure_of(c),
                                              detail::measure_of(scaled));
        if (!ok) res.observed_satisfied = false;
        if (t == 0)
          res.witness = "c=" + detail::vec_to_string(c) +
                        ", alpha=" + detail::format_double(alpha) +
                        ": positive count invariant under positive scaling";
        break;
      }
      case hurley_axiom::d4_cloning: {
        const auto c = detail::random_probe(rng);
        std::vector<double> doubled = c;
        doubled.insert(doubled.end(), c.begin(), c.end());
        const bool ok = detail::measure_equal(detail::measure_of(c),
                                              detail::measure_of(doubled));
        if (!ok) res.observed_satisfied = false;
        if (t == 0)
          res.witness = "c=" + detail::vec_to_string(c) +
                        ": S(c||c) = (2n)/(2#pos) = S(c)";
        break;
      }
      case hurley_axiom::p2_babies: {
        auto c = detail::random_probe(rng);
        c[rng.uniform_int(c.size())] = std::fabs(c[0]) + 0.5;  // guarantee a positive
        std::vector<double> padded = c;
        padded.push_back(0.0);
        const bool ok = detail::measure_greater(detail::measure_of(padded),
                                                detail::measure_of(c));
        if (!ok) res.observed_satisfied = false;
        if (t == 0)
          res.witness = "c=" + detail::vec_to_string(c) +
                        ": S(c||0) = (n+1)/#pos > n/#pos = S(c)";
        break;
      }
      case hurley_axiom::d1_robin_hood: {
        // Transfer between two distinct positive coordinates; counts cannot
        // move, so the required strict decrease never happens.
        auto c = detail::random_probe(rng, 3);
        std::size_t rich = 0, poor = 1;
        c[rich] = 1.5 + rng.uniform(0.0, 0.5);
        c[poor] = 0.25 + rng.uniform(0.0, 0.5);
        const double alpha = rng.uniform01() * (c[rich] - c[poor]) / 2.0;
        auto after = c;
        after[rich] -= alpha;
        after[poor] += alpha;
        const bool strictly_decreased = detail::measure_greater(
            detail::measure_of(c), detail::measure_of(after));
        if (!strictly_decreased) res.observed_satisfied = false;
        if (t == 0)
          res.witness = "c=" + detail::vec_to_string(c) + ", transfer alpha=" +
                        detail::format_double(alpha) +
                        " from c[0] to c[1]: S unchanged, strict decrease required";
        break;
      }
      case hurley_axiom::d3_rising_tide: {
        const auto c = detail::random_probe(rng);
        double min_mag = std::fabs(c[0]);
        for (double v : c) min_mag = std::min(min_mag, std::fabs(v));
        const double alpha = 0.5 * min_mag;  // flips no signs
        std::vector<double> lifted(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) lifted[i] = c[i] + alpha;
        const bool strictly_decreased = detail::measure_greater(
            detail::measure_of(c), detail::measure_of(lifted));
        if (!strictly_decreased) res.observed_satisfied = false;
        if (t == 0)
          res.witness = "c=" + detail::vec_to_string(c) + ", alpha=" +
                        detail::format_double(alpha) +
                        " added to every entry: S unchanged, strict decrease required";
        break;
      }
      case hurley_axiom::p1_bill_gates: {
        // For every beta on the documented grid there is an alpha > 0 whose
        // extra wealth leaves S unchanged: a grid-bounded refutation.
        auto c = detail::random_probe(rng);
        c[0] = std::fabs(c[0]);  // the enriched coordinate stays positive
        bool some_beta_works = false;
        for (double beta : grid) {
          auto base = c;
          base[0] += beta;
          const auto s_base = detail::measure_of(base);
          bool all_alpha_increase = true;
          for (double alpha : grid) {
            auto richer = base;
            richer[0] += alpha;
            if (!detail::measure_greater(detail::measure_of(richer), s_base)) {
              all_alpha_increase = false;
              break;
            }
          }
          if (all_alpha_increase) {
            some_beta_works = true;
            break;
          }
        }
        if (!some_beta_works) res.observed_satisfied = false;
        if (t == 0)
          res.witness =
              "c=" + detail::vec_to_string(c) +
              ": over beta, alpha in 10 log-spaced values spanning [2^-6, 2^6], "
              "no beta makes S(c + (beta+alpha)e_0) strictly exceed S(c + beta*e_0)";
        break;
      }
    }
  }
  return res;
}

// Runs all six axioms in table order (D1..D4, P1, P2).
inline std::vector<axiom_result> axiom_battery(std::uint64_t trials, std::uint64_t seed) {
  const hurley_axiom order[] = {
      hurley_axiom::d1_robin_hood, hurley_axiom::d2_scaling,
      hurley_axiom::d3_rising_tide, hurley_axiom::d4_cloning,
      hurley_axiom::p1_bill_gates, hurley_axiom::p2_babies};
  std::vector<axiom_result> out;
  out.reserve(6);
  for (hurley_axiom a : order) out.push_back(check_axiom(a, trials, seed));
  return out;
}

}  // namespace rkt
