// Acceptance gate: one line per check, nonzero exit if any fails.
//
// Each check exercises a documented guarantee end to end at realistic scale;
// the unit suites cover the same code at small scale with finer assertions.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "rkt/rkt.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int index, const char* name, const outcome& o) {
  std::printf("[%s] %02d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name,
              o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

rkt::time_series random_series(std::size_t n, std::uint64_t seed,
                               std::uint64_t stream) {
  rkt::rng_stream rng(seed, stream);
  rkt::time_series x;
  x.values.resize(n);
  for (auto& v : x.values) v = rng.gaussian();
  return x;
}

// --- 01: circular padding keeps positive counts invariant under rotation ----

outcome check_shift_invariance() {
  const auto t0 = clock_type::now();
  const std::size_t lengths[] = {24, 80, 500};
  std::size_t tested = 0;
  for (std::size_t li = 0; li < 3; ++li) {
    const std::size_t n = lengths[li];
    const std::size_t count = li == 2 ? 16 : 17;  // 50 series total
    for (std::size_t i = 0; i < count; ++i) {
      const auto x = random_series(n, 1000 + li, i);
      rkt::transform_config cfg;
      cfg.num_kernels = 200;
      cfg.seed = 50 + i;
      const std::vector<long long> shifts = {
          1, static_cast<long long>(n / 2), static_cast<long long>(n - 1)};
      const auto rep = rkt::verify_shift_invariance(x, cfg, shifts);
      if (!rep.exact || rep.max_feature_discrepancy != 0.0)
        return {false, "count mismatch at series length " + std::to_string(n) +
                           ", index " + std::to_string(i)};
      ++tested;
    }
  }
  const double dt = seconds_since(t0);
  if (dt >= 10.0)
    return {false, "took " + fmt(dt) + "s, budget 10s"};
  return {true, std::to_string(tested) +
                    " series x 3 rotations, counts identical (" + fmt(dt) + "s)"};
}

// --- 02: chi-square noise certificate holds at full scale -------------------

outcome check_noise_certificate() {
  const auto t0 = clock_type::now();
  const auto f = random_series(80, 2000, 0);
  rkt::transform_config cfg;
  cfg.num_kernels = 10000;
  cfg.seed = 2;
  const auto cert = rkt::verify_noise_robustness(f, cfg, 0.005, 1000, 21);
  const double dt = seconds_since(t0);

  if (cert.chi2_quantile < 51.1 || cert.chi2_quantile > 51.3)
    return {false, "chi-square quantile " + fmt(cert.chi2_quantile) +
                       " outside [51.1, 51.3]"};
  if (cert.ratio_bound < 194.9 || cert.ratio_bound > 195.7)
    return {false, "ratio bound " + fmt(cert.ratio_bound) +
                       " outside [194.9, 195.7]"};
  if (!cert.empirical_pass)
    return {false, "violation rate " + fmt(cert.violation_rate) +
                       " exceeds 0.005 + 3 s.e."};
  if (dt >= 300.0)
    return {false, "took " + fmt(dt) + "s, budget 300s"};
  return {true, "bound " + fmt(cert.ratio_bound) + ", max observed ratio " +
                    fmt(cert.max_observed_ratio) + ", violations " +
                    std::to_string(cert.violation_count) + "/1000 (" + fmt(dt) +
                    "s)"};
}

// --- 03: overlap tail bound verified across a parameter grid ----------------

outcome check_tail_bound_grid() {
  const auto t0 = clock_type::now();
  std::size_t cells = 0, informative = 0;
  for (std::size_t k : {2ul, 5ul, 9ul}) {
    for (std::size_t n : {20ul, 80ul}) {
      for (double alpha : {1.0, 2.0, 4.0}) {
        const auto rep =
            rkt::verify_bound_monte_carlo(n, k, alpha, 2000, 300 + cells);
        if (!rep.within_bound)
          return {false, "exceed rate " + fmt(rep.empirical_exceed_rate) +
                             " above bound " + fmt(rep.bound_value) + " at K=" +
                             std::to_string(k) + " N=" + std::to_string(n) +
                             " alpha=" + fmt(alpha)};
        ++cells;
        if (!rep.vacuous) ++informative;
      }
    }
  }
  const double dt = seconds_since(t0);
  if (informative == 0) return {false, "every grid cell was vacuous"};
  if (dt >= 120.0)
    return {false, "took " + fmt(dt) + "s, budget 120s"};
  return {true, std::to_string(cells) + " cells x 2000 trials within bound, " +
                    std::to_string(informative) + " informative (" + fmt(dt) +
                    "s)"};
}

// --- 04: adjacent-overlap variance closed form matches simulation -----------

outcome check_overlap_variance() {
  for (std::uint64_t k : {2ull, 5ull, 9ull, 21ull}) {
    const double want = rkt::t01_variance(k);
    const double sd = 1.0 / std::sqrt(static_cast<double>(k));
    rkt::rng_stream rng(400, k);
    const int samples = 100000;
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> w(k);
    for (int s = 0; s < samples; ++s) {
      for (auto& v : w) v = rng.gaussian(0.0, sd);
      double t01 = 0.0;
      for (std::size_t j = 0; j + 1 < k; ++j) t01 += w[j] * w[j + 1];
      sum += t01;
      sumsq += t01 * t01;
    }
    const double mean = sum / samples;
    const double var = sumsq / samples - mean * mean;
    if (std::fabs(var - want) > 0.05 * want)
      return {false, "K=" + std::to_string(k) + ": simulated " + fmt(var) +
                         " vs closed form " + fmt(want)};
  }
  return {true, "K in {2,5,9,21}, 1e5 draws each, within 5% of (K-1)/K^2"};
}

// --- 05: untruncated overlap row sum equals N*K*(K-1)/2 ---------------------

outcome check_overlap_row_sum() {
  std::uint64_t checked = 0;
  for (std::uint64_t n = 1; n <= 200; ++n) {
    for (std::uint64_t k = 1; k <= n; ++k) {
      if (rkt::overlap_theta_row_sum(n, k) != n * k * (k - 1) / 2)
        return {false, "mismatch at N=" + std::to_string(n) +
                           ", K=" + std::to_string(k)};
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " (N, K) pairs match the closed form"};
}

// --- 06: sparsity-measure axiom battery lands on the documented table -------

outcome check_axiom_battery() {
  const auto results = rkt::axiom_battery(1000, 600);
  for (const auto& r : results) {
    if (r.observed_satisfied != r.expected_satisfied)
      return {false, std::string(rkt::axiom_code(r.axiom)) + " observed " +
                         (r.observed_satisfied ? "holds" : "fails") +
                         ", expected " +
                         (r.expected_satisfied ? "holds" : "fails")};
  }
  return {true, "six axioms x 1000 probes, verdicts match (D2, D4, P2 hold)"};
}

// --- 07: balanced spike trains are recovered from their positive counts -----

outcome check_support_recovery() {
  const std::size_t n = 24;
  // Noise-free: the estimate is exact.
  for (std::size_t s : {2ul, 4ul, 6ul}) {
    rkt::rng_stream rng(700, s);
    std::vector<std::size_t> pos;
    while (pos.size() < s) {
      const std::size_t c = rng.uniform_int(n);
      bool fresh = true;
      for (std::size_t p : pos) fresh = fresh && p != c;
      if (fresh) pos.push_back(c);
    }
    rkt::time_series x;
    x.values.assign(n, 0.0);
    const double mag = std::sqrt(static_cast<double>(n) / static_cast<double>(s));
    for (std::size_t i = 0; i < s; ++i)
      x.values[pos[i]] = i < s / 2 ? mag : -mag;
    const auto rep = rkt::estimate_sparsity(x, 0.0);
    if (rep.positive_count != s / 2 ||
        rep.estimated_s != static_cast<double>(s))
      return {false, "noise-free s=" + std::to_string(s) + " estimated " +
                         fmt(rep.estimated_s)};
  }

  // Noisy: estimate still exact in at least 95% of trials.
  std::size_t hits = 0, trials = 0;
  for (std::size_t s : {2ul, 4ul, 6ul}) {
    for (std::size_t t = 0; t < 100; ++t) {
      rkt::rng_stream rng(701, s * 1000 + t);
      std::vector<std::size_t> pos;
      while (pos.size() < s) {
        const std::size_t c = rng.uniform_int(n);
        bool fresh = true;
        for (std::size_t p : pos) fresh = fresh && p != c;
        if (fresh) pos.push_back(c);
      }
      rkt::time_series x;
      x.values.assign(n, 0.0);
      const double mag =
          std::sqrt(static_cast<double>(n) / static_cast<double>(s));
      for (std::size_t i = 0; i < s; ++i)
        x.values[pos[i]] = i < s / 2 ? mag : -mag;
      for (auto& v : x.values) v += rng.gaussian(0.0, 0.05);
      const auto rep = rkt::estimate_sparsity(x, 0.15);
      if (rep.estimated_s == static_cast<double>(s)) ++hits;
      ++trials;
    }
  }
  const double rate = static_cast<double>(hits) / static_cast<double>(trials);
  if (rate < 0.95)
    return {false, "noisy recovery rate " + fmt(rate) + " below 0.95"};
  return {true, "noise-free exact for s in {2,4,6}; noisy rate " + fmt(rate) +
                    " over " + std::to_string(trials) + " trials"};
}

// --- 08: fourier incoherence and dilation-family separation -----------------

outcome check_basis_coherence() {
  for (std::size_t n : {4ul, 16ul, 64ul}) {
    const double mu =
        rkt::cross_basis_coherence(rkt::dft_basis(n), rkt::identity_cbasis(n));
    if (std::fabs(mu - 1.0 / std::sqrt(static_cast<double>(n))) > 1e-9)
      return {false, "fourier-vs-identity coherence " + fmt(mu) + " at N=" +
                         std::to_string(n) + " is not 1/sqrt(N)"};
  }
  const auto self = rkt::mean_cross_dilation_coherence(64, 9, 1, 1, 200, 800);
  const auto cross = rkt::mean_cross_dilation_coherence(64, 9, 1, 4, 200, 800);
  if (!(cross.mean_coherence < self.mean_coherence))
    return {false, "cross-dilation mean " + fmt(cross.mean_coherence) +
                       " not below same-dilation mean " +
                       fmt(self.mean_coherence)};
  return {true, "fourier mu = 1/sqrt(N) to 1e-9; dilation 1-vs-4 mean " +
                    fmt(cross.mean_coherence) + " < 1-vs-1 mean " +
                    fmt(self.mean_coherence)};
}

// --- 09: dense operator view reproduces the convolution ---------------------

outcome check_toeplitz_agreement() {
  rkt::rng_stream rng(900, 0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t klen = 2 + rng.uniform_int(10);
    const std::uint32_t d = std::uint32_t{1} << rng.uniform_int(3);
    const std::size_t span = (klen - 1) * d + 1;
    const std::size_t n = span + rng.uniform_int(60);
    rkt::kernel_spec k;
    k.dilation = d;
    k.padding = rkt::padding_mode::none;
    k.weights.resize(klen);
    for (auto& w : k.weights) w = rng.gaussian();
    rkt::time_series x;
    x.values.resize(n);
    for (auto& v : x.values) v = rng.gaussian();

    const auto via = rkt::apply_toeplitz(rkt::build_toeplitz(k, n), x.values);
    const auto direct = rkt::convolve(x, k);
    if (via.size() != direct.size())
      return {false, "output length mismatch at trial " + std::to_string(t)};
    for (std::size_t i = 0; i < via.size(); ++i)
      worst = std::max(worst, std::fabs(via[i] - direct.values[i]));
  }
  if (worst >= 1e-12)
    return {false, "max deviation " + fmt(worst) + " not below 1e-12"};
  return {true, "100 random operators, max deviation " + fmt(worst)};
}

// --- 10 & 11: end-to-end classification and feature dimensionality ----------

struct pipeline_result {
  outcome classification;
  outcome dimensionality;
};

pipeline_result check_pipeline() {
  const auto t0 = clock_type::now();
  const std::size_t n = 80, per_class_train = 50, per_class_test = 50;

  // Two smooth class templates: circular moving average of white noise,
  // then standardized.
  std::vector<rkt::time_series> templates;
  for (std::uint64_t cls = 0; cls < 2; ++cls) {
    const auto raw = random_series(n, 1100, cls);
    rkt::time_series smooth;
    smooth.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int o = -4; o <= 4; ++o)
        acc += raw.values[(i + n + static_cast<std::size_t>(o + 4)) % n];
      smooth.values[i] = acc / 9.0;
    }
    templates.push_back(rkt::standardize(smooth).series);
  }

  const double sigma = 0.04;
  const auto build = [&](std::size_t per_class, std::uint64_t seed) {
    rkt::dataset ds;
    for (std::uint64_t cls = 0; cls < 2; ++cls) {
      for (std::size_t i = 0; i < per_class; ++i) {
        rkt::rng_stream rng(seed, cls * 10000 + i);
        rkt::labeled_series inst;
        inst.label = cls == 0 ? "alpha" : "beta";
        inst.series = templates[cls];
        for (auto& v : inst.series.values) v += rng.gaussian(0.0, sigma);
        ds.instances.push_back(std::move(inst));
      }
    }
    return ds;
  };
  const auto train_ds = build(per_class_train, 1101);
  const auto test_ds = build(per_class_test, 1102);

  rkt::transform_config cfg;
  cfg.num_kernels = 10000;
  cfg.seed = 11;
  const auto kernels = rkt::generate_kernels(cfg, n);
  const auto ftrain = rkt::apply_kernels(train_ds, kernels, cfg);
  const auto ftest = rkt::apply_kernels(test_ds, kernels, cfg);

  std::vector<std::string> train_labels, test_labels;
  for (const auto& inst : train_ds.instances) train_labels.push_back(inst.label);
  for (const auto& inst : test_ds.instances) test_labels.push_back(inst.label);

  pipeline_result result;
  {
    const auto model = rkt::fit_ridge(ftrain, train_labels);
    const auto pred = rkt::predict(model, ftest);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
      if (pred[i] == test_labels[i]) ++hits;
    const double acc = static_cast<double>(hits) / static_cast<double>(pred.size());
    const double dt = seconds_since(t0);
    if (dt >= 60.0)
      result.classification = {false, "took " + fmt(dt) + "s, budget 60s"};
    else if (acc < 0.95)
      result.classification = {
          false, "held-out accuracy " + fmt(acc) + " below 0.95"};
    else
      result.classification = {
          true, "held-out accuracy " + fmt(acc) + " with lambda " +
                    fmt(model.lambda) + " over 10000 features (" + fmt(dt) + "s)"};
  }
  {
    rkt::feature_matrix pooled = ftrain;
    pooled.data.insert(pooled.data.end(), ftest.data.begin(), ftest.data.end());
    pooled.rows += ftest.rows;
    const auto rep = rkt::pca_effective_dim(pooled);
    double sum = 0.0;
    bool sorted = true;
    for (std::size_t i = 0; i < rep.explained_variance_ratio.size(); ++i) {
      sum += rep.explained_variance_ratio[i];
      if (i && rep.explained_variance_ratio[i] >
                   rep.explained_variance_ratio[i - 1] + 1e-12)
        sorted = false;
    }
    if (!sorted)
      result.dimensionality = {false, "variance ratios are not nonincreasing"};
    else if (std::fabs(sum - 1.0) > 1e-9)
      result.dimensionality = {false,
                               "variance ratios sum to " + fmt(sum) + ", not 1"};
    else if (rep.k95 > 100)
      result.dimensionality = {
          false, "95% of variance needs " + std::to_string(rep.k95) +
                     " components, above 100"};
    else
      result.dimensionality = {
          true, "200 x 10000 features: 95% variance in " +
                    std::to_string(rep.k95) + " components, 90% in " +
                    std::to_string(rep.k90)};
  }
  return result;
}

}  // namespace

int main() {
  std::printf("acceptance gate: 11 checks\n");

  report(1, "rotation invariance of positive counts", check_shift_invariance());
  report(2, "chi-square noise certificate at 10000 kernels",
         check_noise_certificate());
  report(3, "overlap tail bound on the (K, N, alpha) grid",
         check_tail_bound_grid());
  report(4, "adjacent-overlap variance closed form", check_overlap_variance());
  report(5, "overlap row-sum identity up to N = 200", check_overlap_row_sum());
  report(6, "sparsity-measure axiom battery", check_axiom_battery());
  report(7, "spike-train support recovery", check_support_recovery());
  report(8, "fourier incoherence and dilation separation",
         check_basis_coherence());
  report(9, "dense operator agreement with convolution",
         check_toeplitz_agreement());
  const auto pipeline = check_pipeline();
  report(10, "held-out classification accuracy", pipeline.classification);
  report(11, "feature-space effective dimensionality", pipeline.dimensionality);

  if (failures) {
    std::printf("%d of 11 checks failed\n", failures);
    return 1;
  }
  std::printf("all 11 checks passed\n");
  return 0;
}
