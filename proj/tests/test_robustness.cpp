#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <vector>

#include "rkt/kernels.hpp"
#include "rkt/rng.hpp"
#include "rkt/robustness.hpp"
#include "rkt/series.hpp"

namespace {

rkt::time_series random_series(std::size_t n, std::uint64_t seed) {
  rkt::rng_stream rng(seed, 0);
  rkt::time_series x;
  for (std::size_t i = 0; i < n; ++i) x.values.push_back(rng.gaussian());
  return x;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double eps, double whole, double fa, double fb, double fm,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, eps / 2.0, left, fa, fm, flm, depth - 1) +
         adaptive_simpson(f, m, b, eps / 2.0, right, fm, fb, frm, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double eps) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, eps, whole, fa, fb, fm, 48);
}

// Independent chi-square CDF: direct integration of the density. Valid for
// dof >= 2 where the density is bounded at zero.
double chi2_cdf_by_quadrature(double dof, double x) {
  const double log_norm =
      -(dof / 2.0) * std::log(2.0) - std::lgamma(dof / 2.0);
  const auto pdf = [&](double t) {
    if (t <= 0.0) return dof == 2.0 ? 0.5 : 0.0;
    return std::exp(log_norm + (dof / 2.0 - 1.0) * std::log(t) - t / 2.0);
  };
  return integrate(pdf, 0.0, x, 1e-12);
}

}  // namespace

TEST_CASE("chi-square lower quantile reference values") {
  struct row {
    std::uint64_t dof;
    double alpha;
    double want;
  };
  // Cross-library reference table, agreed to 1e-12 relative by two
  // implementations before being frozen here.
  const row rows[] = {
      {80, 0.005, 51.17193189044518},
      {24, 0.005, 9.886233502241467},
      {40, 0.05, 26.50930319669311},
      {1, 0.5, 0.454936423119572},
      {500, 0.25, 478.3230201937923},
      {5, 0.01, 0.5542980767282772},
      {2, 0.5, 1.386294361119891},
  };
  for (const auto& r : rows)
    REQUIRE(rkt::chi2_lower_quantile(r.dof, r.alpha) ==
            Catch::Approx(r.want).epsilon(1e-9));
}

TEST_CASE("dof = 2 quantile matches the exponential closed form") {
  // chi2 with 2 dof is Exp(1/2): quantile(alpha) = -2 ln(1 - alpha).
  for (double alpha : {0.005, 0.05, 0.25, 0.5})
    REQUIRE(rkt::chi2_lower_quantile(2, alpha) ==
            Catch::Approx(-2.0 * std::log1p(-alpha)).epsilon(1e-12));
}

TEST_CASE("dof = 4 quantile satisfies the closed-form CDF") {
  // F(x) = 1 - exp(-x/2) (1 + x/2) for 4 dof.
  for (double alpha : {0.01, 0.1, 0.5}) {
    const double q = rkt::chi2_lower_quantile(4, alpha);
    REQUIRE(1.0 - std::exp(-q / 2.0) * (1.0 + q / 2.0) ==
            Catch::Approx(alpha).epsilon(1e-10));
  }
}

TEST_CASE("quantile inverts an independently integrated CDF") {
  for (std::uint64_t dof : {5ull, 24ull, 40ull, 80ull}) {
    for (double alpha : {0.005, 0.05, 0.25, 0.5}) {
      const double q = rkt::chi2_lower_quantile(dof, alpha);
      REQUIRE(chi2_cdf_by_quadrature(static_cast<double>(dof), q) ==
              Catch::Approx(alpha).epsilon(1e-7));
    }
  }
}

TEST_CASE("quantile is monotone in alpha and dof") {
  for (std::uint64_t dof : {1ull, 10ull, 100ull}) {
    double prev = 0.0;
    for (double alpha : {0.001, 0.01, 0.1, 0.3, 0.5}) {
      const double q = rkt::chi2_lower_quantile(dof, alpha);
      REQUIRE(q > prev);
      prev = q;
    }
  }
  double prev = 0.0;
  for (std::uint64_t dof : {1ull, 2ull, 5ull, 20ull, 80ull, 320ull}) {
    const double q = rkt::chi2_lower_quantile(dof, 0.05);
    REQUIRE(q > prev);
    prev = q;
  }
}

TEST_CASE("quantile argument guards") {
  REQUIRE_THROWS_AS(rkt::chi2_lower_quantile(0, 0.05), std::invalid_argument);
  REQUIRE_THROWS_AS(rkt::chi2_lower_quantile(10, 0.0), std::invalid_argument);
  REQUIRE_THROWS_AS(rkt::chi2_lower_quantile(10, 0.6), std::invalid_argument);
  REQUIRE_NOTHROW(rkt::chi2_lower_quantile(10, 0.5));
}

TEST_CASE("certificate arithmetic") {
  const auto cert = rkt::lipschitz_certificate(10000, 80, 0.005);
  REQUIRE(cert.ratio_bound == Catch::Approx(195.41963007003844).epsilon(1e-9));
  REQUIRE(cert.ratio_bound > 195.3);
  REQUIRE(cert.ratio_bound < 195.5);
  REQUIRE(cert.norm_ratio_bound ==
          Catch::Approx(std::sqrt(cert.ratio_bound)).margin(1e-12));
  REQUIRE(cert.confidence == Catch::Approx(0.995).margin(1e-12));

  // bound scales exactly linearly in the kernel count
  const auto doubled = rkt::lipschitz_certificate(20000, 80, 0.005);
  REQUIRE(doubled.ratio_bound == 2.0 * cert.ratio_bound);

  const auto tiny = rkt::lipschitz_certificate(1, 1, 0.5);
  REQUIRE(tiny.ratio_bound == Catch::Approx(1.0 / 0.454936423119572).epsilon(1e-9));
  REQUIRE_THROWS_AS(rkt::lipschitz_certificate(0, 80, 0.005), std::invalid_argument);
  REQUIRE_THROWS_AS(rkt::lipschitz_certificate(10, 0, 0.005), std::invalid_argument);
}

TEST_CASE("squared feature distance ratio") {
  const auto f = random_series(40, 201);
  rkt::transform_config cfg;
  cfg.num_kernels = 100;
  cfg.seed = 201;
  const auto kernels = rkt::generate_kernels(cfg, f.size());

  SECTION("identical inputs have no defined ratio") {
    REQUIRE_FALSE(
        rkt::squared_feature_distance_ratio(f, f, kernels, true).has_value());
  }
  SECTION("perturbed input gives a finite nonnegative ratio") {
    auto g = f;
    g.values[7] += 0.25;
    const auto r = rkt::squared_feature_distance_ratio(f, g, kernels, true);
    REQUIRE(r.has_value());
    REQUIRE(*r >= 0.0);
    REQUIRE(*r <= static_cast<double>(kernels.size()) / (0.25 * 0.25) + 1.0);
  }
  SECTION("length mismatch is a dimension error") {
    rkt::time_series g;
    g.values = {1.0, 2.0};
    REQUIRE_THROWS_AS(rkt::squared_feature_distance_ratio(f, g, kernels, true),
                      rkt::dimension_error);
  }
}

TEST_CASE("noise harness upholds the certificate at small scale") {
  const auto f = random_series(40, 202);
  rkt::transform_config cfg;
  cfg.num_kernels = 500;
  cfg.seed = 202;
  const auto cert = rkt::verify_noise_robustness(f, cfg, 0.05, 200, 11);
  REQUIRE(cert.trials == 200);
  REQUIRE(cert.l == 500);
  REQUIRE(cert.n == 40);
  REQUIRE(cert.empirical_pass);
  REQUIRE(cert.violation_rate <= 0.05 + 3.0 * cert.std_error);
  REQUIRE(cert.max_observed_ratio > 0.0);
}

TEST_CASE("noise harness passes across seeds") {
  const auto f = random_series(30, 203);
  rkt::transform_config cfg;
  cfg.num_kernels = 200;
  cfg.seed = 203;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto cert = rkt::verify_noise_robustness(f, cfg, 0.05, 150, seed);
    INFO("seed " << seed << " violation rate " << cert.violation_rate);
    REQUIRE(cert.empirical_pass);
  }
}

TEST_CASE("noise harness runs under every law") {
  const auto f = random_series(32, 204);
  rkt::transform_config cfg;
  cfg.num_kernels = 150;
  cfg.seed = 204;
  for (auto law : {rkt::noise_law::gaussian, rkt::noise_law::uniform,
                   rkt::noise_law::laplace}) {
    const auto cert =
        rkt::verify_noise_robustness(f, cfg, 0.05, 120, 5, 0.5, law);
    REQUIRE(cert.law == law);
    REQUIRE(cert.noise_sigma == 0.5);
    REQUIRE(cert.max_observed_ratio >= 0.0);
  }
}

TEST_CASE("noise draws have the requested scale under every law") {
  for (auto law : {rkt::noise_law::gaussian, rkt::noise_law::uniform,
                   rkt::noise_law::laplace}) {
    rkt::rng_stream rng(77, static_cast<std::uint64_t>(law));
    const double sigma = 0.7;
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double e = rkt::detail::draw_noise(rng, law, sigma);
      sum += e;
      sumsq += e * e;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    REQUIRE(std::fabs(mean) < 0.01);
    REQUIRE(var == Catch::Approx(sigma * sigma).epsilon(0.05));
  }
}

TEST_CASE("noise harness argument guards") {
  const auto f = random_series(20, 205);
  rkt::transform_config cfg;
  cfg.num_kernels = 50;
  REQUIRE_THROWS_AS(rkt::verify_noise_robustness(f, cfg, 0.05, 50, 1),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(rkt::verify_noise_robustness(f, cfg, 0.05, 100, 1, 0.0),
                    std::invalid_argument);
}

TEST_CASE("shift invariance is exact under circular padding") {
  const auto f = random_series(60, 206);
  rkt::transform_config cfg;
  cfg.num_kernels = 250;
  cfg.seed = 206;
  const auto rep = rkt::verify_shift_invariance(f, cfg, {1, 13, 30, 59});
  REQUIRE(rep.exact);
  REQUIRE(rep.max_feature_discrepancy == 0.0);
  REQUIRE(rep.padding == "circular");
  REQUIRE(rep.shifts_tested == std::vector<long long>{1, 13, 30, 59});
}

TEST_CASE("zero shift is trivially exact under any padding") {
  const auto f = random_series(45, 207);
  for (auto policy : {rkt::padding_policy::circular, rkt::padding_policy::always_zero,
                      rkt::padding_policy::random_zero_or_none}) {
    rkt::transform_config cfg;
    cfg.num_kernels = 100;
    cfg.padding = policy;
    const auto rep = rkt::verify_shift_invariance(f, cfg, {0});
    REQUIRE(rep.exact);
    REQUIRE(rep.max_feature_discrepancy == 0.0);
  }
}

TEST_CASE("zero padding breaks invariance for a boundary spike") {
  // A spike at the last position changes which windows see it once shifted.
  rkt::time_series f;
  f.values.assign(40, -0.1);
  f.values.back() = 8.0;
  rkt::transform_config cfg;
  cfg.num_kernels = 300;
  cfg.padding = rkt::padding_policy::always_zero;
  cfg.seed = 208;
  const auto rep = rkt::verify_shift_invariance(f, cfg, {1, 20});
  REQUIRE_FALSE(rep.exact);
  REQUIRE(rep.max_feature_discrepancy > 0.0);
  REQUIRE(rep.padding == "always-zero");
}
