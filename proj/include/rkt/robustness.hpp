#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "rkt/kernels.hpp"
#include "rkt/rng.hpp"
#include "rkt/series.hpp"

namespace rkt {

// q with P(chi2_dof <= q) = alpha, by regularized incomplete-gamma inversion.
inline double chi2_lower_quantile(std::uint64_t dof, double alpha) {
  if (dof < 1) throw std::invalid_argument("chi2_lower_quantile: dof must be >= 1");
  if (!(alpha > 0.0) || alpha > 0.5)
    throw std::invalid_argument("chi2_lower_quantile: alpha must lie in (0, 0.5]");
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
  return boost::math::quantile(dist, alpha);
}

enum class noise_law { gaussian, uniform, laplace };

inline const char* to_string(noise_law law) {
  switch (law) {
    case noise_law::gaussian: return "gaussian";
    case noise_law::uniform: return "uniform";
    case noise_law::laplace: return "laplace";
  }
  return "?";
}

struct robustness_certificate {
  std::uint64_t l = 0;
  std::size_t n = 0;
  double alpha = 0.0;
  double chi2_quantile = 0.0;
  double ratio_bound = 0.0;       // L / chi2_quantile, bounds the squared ratio
  double norm_ratio_bound = 0.0;  // sqrt of the above, bounds the norm ratio
  double confidence = 0.0;        // 1 - alpha

  // Empirical block, filled by the verification harness.
  std::uint64_t trials = 0;
  double max_observed_ratio = 0.0;
  std::uint64_t violation_count = 0;
  double violation_rate = 0.0;
  double std_error = 0.0;
  bool empirical_pass = false;  // violation_rate <= alpha + 3 * std_error
  noise_law law = noise_law::gaussian;
  double noise_sigma = 1.0;
};

// Analytic high-probability bound: with probability 1 - alpha over unit
// Gaussian noise, squared feature distance per squared noise norm is at most
// L / chi2_quantile(N, alpha). Both the squared-ratio bound and its square
// root (the norm-ratio constant) are reported to keep the two scales distinct.
inline robustness_certificate lipschitz_certificate(std::uint64_t l, std::size_t n,
                                                    double alpha) {
  if (l < 1) throw std::invalid_argument("lipschitz_certificate: l must be >= 1");
  if (n < 1) throw std::invalid_argument("lipschitz_certificate: n must be >= 1");
  robustness_certificate cert;
  cert.l = l;
  cert.n = n;
  cert.alpha = alpha;
  cert.chi2_quantile = chi2_lower_quantile(n, alpha);
  cert.ratio_bound = static_cast<double>(l) / cert.chi2_quantile;
  cert.norm_ratio_bound = std::sqrt(cert.ratio_bound);
  cert.confidence = 1.0 - alpha;
  return cert;
}

// ||phi(g) - phi(f)||^2 / ||g - f||^2 under a fixed kernel set; empty when
// g == f exactly (the ratio is 0/0). The numerator can never exceed the kernel
// count, since every per-kernel feature difference lies in [-1, 1].
inline std::optional<double> squared_feature_distance_ratio(
    const time_series& f, const time_series& g,
    const std::vector<kernel_spec>& kernels, bool standardize_inputs) {
  if (f.size() != g.size())
    throw dimension_error("squared_feature_distance_ratio: series lengths differ");
  double denom = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double d = g.values[i] - f.values[i];
    denom += d * d;
  }
  if (denom == 0.0) return std::nullopt;

  const time_series ff = standardize_inputs ? standardize(f).series : f;
  const time_series gg = standardize_inputs ? standardize(g).series : g;
  double num = 0.0;
  for (const auto& k : kernels) {
    const double d = ppv(convolve(gg, k)) - ppv(convolve(ff, k));
    num += d * d;
  }
  if (num > static_cast<double>(kernels.size()) + 1e-9)
    throw error("feature distance exceeded the kernel count; ppv out of range");
  return num / denom;
}

namespace detail {

inline double draw_noise(rng_stream& rng, noise_law law, double sigma) {
  switch (law) {
    case noise_law::gaussian:
      return rng.gaussian(0.0, sigma);
    case noise_law::uniform:
      // Uniform with standard deviation sigma.
      return rng.uniform(-std::sqrt(3.0) * sigma, std::sqrt(3.0) * sigma);
    case noise_law::laplace: {
      // Exponential magnitude with a random sign; scale sigma / sqrt(2).
      const double mag = -std::log(rng.uniform01()) * sigma / std::sqrt(2.0);
      return rng.uniform_int(2) == 0 ? mag : -mag;
    }
  }
  return 0.0;
}

}  // namespace detail

// Monte-Carlo check of the certificate: draws i.i.d. noise per trial, measures
// the squared-distance ratio, and counts how often it exceeds the analytic
// bound. Passes when the violation fraction stays within alpha plus three
// binomial standard errors. The analytic bound is calibrated for unit Gaussian
// noise; other laws or scales reuse the harness but the chi-square bound no
// longer applies to them.
inline robustness_certificate verify_noise_robustness(
    const time_series& f, const transform_config& cfg, double alpha,
    std::uint64_t trials, std::uint64_t seed, double noise_sigma = 1.0,
    noise_law law = noise_law::gaussian) {
  if (trials < 100)
    throw std::invalid_argument("verify_noise_robustness: trials must be >= 100");
  validate_series(f, "verify_noise_robustness");
  if (!(noise_sigma > 0.0))
    throw std::invalid_argument("verify_noise_robustness: noise sigma must be > 0");

  const std::vector<kernel_spec> kernels = generate_kernels(cfg, f.size());
  robustness_certificate cert = lipschitz_certificate(kernels.size(), f.size(), alpha);
  cert.law = law;
  cert.noise_sigma = noise_sigma;
  cert.trials = trials;

  const time_series ff = cfg.standardize_inputs ? standardize(f).series : f;
  std::vector<double> base_feats(kernels.size());
  for (std::size_t i = 0; i < kernels.size(); ++i)
    base_feats[i] = ppv(convolve(ff, kernels[i]));

  time_series g;
  g.values.resize(f.size());
  for (std::uint64_t t = 0; t < trials; ++t) {
    rng_stream rng(seed, t);
    double denom = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double eps = detail::draw_noise(rng, law, noise_sigma);
      g.values[i] = f.values[i] + eps;
      const double d = g.values[i] - f.values[i];
      denom += d * d;
    }
    if (denom == 0.0) continue;  // exact-zero noise carries no ratio

    const time_series gg = cfg.standardize_inputs ? standardize(g).series : g;
    double num = 0.0;
    for (std::size_t i = 0; i < kernels.size(); ++i) {
      const double d = ppv(convolve(gg, kernels[i])) - base_feats[i];
      num += d * d;
    }
    if (num > static_cast<double>(kernels.size()) + 1e-9)
      throw error("feature distance exceeded the kernel count; ppv out of range");
    const double ratio = num / denom;
    cert.max_observed_ratio = std::max(cert.max_observed_ratio, ratio);
    if (ratio > cert.ratio_bound) ++cert.violation_count;
  }
  cert.violation_rate =
      static_cast<double>(cert.violation_count) / static_cast<double>(trials);
  cert.std_error = std::sqrt(cert.violation_rate * (1.0 - cert.violation_rate) /
                             static_cast<double>(trials));
  cert.empirical_pass = cert.violation_rate <= alpha + 3.0 * cert.std_error;
  return cert;
}

struct shift_invariance_report {
  std::vector<long long> shifts_tested;
  std::string padding;
  double max_feature_discrepancy = 0.0;
  bool exact = false;  // all positive counts matched, for every kernel and shift
};

// Circularly shifts the series and compares the transform's integer positive
// counts against the unshifted ones. With circular padding the match is exact
// at the count level; other paddings are measured and reported as approximate.
inline shift_invariance_report verify_shift_invariance(
    const time_series& f, const transform_config& cfg,
    const std::vector<long long>& shifts) {
  validate_series(f, "verify_shift_invariance");
  const std::vector<kernel_spec> kernels = generate_kernels(cfg, f.size());

  const auto prep = [&](const time_series& x) {
    return cfg.standardize_inputs ? standardize(x).series : x;
  };
  const std::vector<std::uint64_t> base = feature_counts(prep(f), kernels);

  std::vector<std::size_t> out_len(kernels.size());
  for (std::size_t i = 0; i < kernels.size(); ++i)
    out_len[i] = kernels[i].padding == padding_mode::none
                     ? f.size() - kernels[i].effective_span() + 1
                     : f.size();

  shift_invariance_report rep;
  rep.shifts_tested = shifts;
  rep.padding = to_string(cfg.padding);
  rep.exact = true;
  for (long long c : shifts) {
    const std::vector<std::uint64_t> shifted =
        feature_counts(prep(circular_shift(f, c)), kernels);
    for (std::size_t i = 0; i < kernels.size(); ++i) {
      if (shifted[i] != base[i]) rep.exact = false;
      const double diff =
          std::fabs(static_cast<double>(shifted[i]) - static_cast<double>(base[i])) /
          static_cast<double>(out_len[i]);
      rep.max_feature_discrepancy = std::max(rep.max_feature_discrepancy, diff);
    }
  }
  return rep;
}

}  // namespace rkt
