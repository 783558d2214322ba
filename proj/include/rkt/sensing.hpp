#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "rkt/errors.hpp"
#include "rkt/kernels.hpp"
#include "rkt/matrix.hpp"
#include "rkt/rng.hpp"

namespace rkt {

// Valid-mode convolution as an explicit (N - span + 1) x N matrix: row r holds
// the kernel weights starting at column r, spaced by the dilation, bias excluded.
struct toeplitz_view {
  matrix m;
  kernel_spec kernel;
  std::size_t n = 0;
};

// Dense materialization is capped (default 4096 columns); larger systems should
// use the shift-structure overlap routines below, which never build the matrix.
inline toeplitz_view build_toeplitz(const kernel_spec& k, std::size_t n,
                                    std::size_t dense_cap = 4096) {
  if (k.weights.empty()) throw std::invalid_argument("build_toeplitz: empty kernel");
  const std::size_t span = k.effective_span();
  if (span > n) throw span_error(k.length(), k.dilation, n);
  if (n > dense_cap)
    throw config_error("build_toeplitz: N = " + std::to_string(n) +
                       " exceeds the dense cap " + std::to_string(dense_cap) +
                       "; use the shift-structure overlap routines");

  toeplitz_view view;
  view.kernel = k;
  view.n = n;
  view.m = matrix(n - span + 1, n);
  for (std::size_t r = 0; r < view.m.rows; ++r)
    for (std::size_t j = 0; j < k.weights.size(); ++j)
      view.m.at(r, r + j * k.dilation) = k.weights[j];
  return view;
}

inline std::vector<double> apply_toeplitz(const toeplitz_view& view,
                                          const std::vector<double>& x) {
  if (x.size() != view.m.cols)
    throw dimension_error("apply_toeplitz: signal length " + std::to_string(x.size()) +
                          " does not match matrix columns " + std::to_string(view.m.cols));
  std::vector<double> y(view.m.rows, 0.0);
  for (std::size_t r = 0; r < view.m.rows; ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < view.m.cols; ++c) acc += view.m.at(r, c) * x[c];
    y[r] = acc;
  }
  return y;
}

enum class coherence_axis { columns, rows };

struct coherence_result {
  double mu = 0.0;
  std::pair<std::size_t, std::size_t> arg_pair{0, 0};
  std::size_t skipped_zero_vectors = 0;
};

namespace detail {

inline double inner_abs(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return std::fabs(acc);
}

inline double inner_abs(const std::vector<std::complex<double>>& a,
                        const std::vector<std::complex<double>>& b) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * std::conj(b[i]);
  return std::abs(acc);
}

template <class T>
double norm_of(const std::vector<T>& v) {
  double acc = 0.0;
  for (const T& x : v) acc += std::norm(std::complex<double>(x));
  return std::sqrt(acc);
}

template <class T>
std::vector<std::vector<T>> axis_vectors(const basic_matrix<T>& m, coherence_axis axis) {
  std::vector<std::vector<T>> vecs;
  if (axis == coherence_axis::rows) {
    vecs.resize(m.rows);
    for (std::size_t r = 0; r < m.rows; ++r) {
      vecs[r].resize(m.cols);
      for (std::size_t c = 0; c < m.cols; ++c) vecs[r][c] = m.at(r, c);
    }
  } else {
    vecs.resize(m.cols);
    for (std::size_t c = 0; c < m.cols; ++c) {
      vecs[c].resize(m.rows);
      for (std::size_t r = 0; r < m.rows; ++r) vecs[c][r] = m.at(r, c);
    }
  }
  return vecs;
}

}  // namespace detail

// Maximum absolute normalized inner product over distinct vector pairs along
// the chosen axis. Zero vectors are skipped (counted in the result); fewer than
// two nonzero vectors leave the maximum undefined and raise an error.
template <class T>
coherence_result coherence(const basic_matrix<T>& m,
                           coherence_axis axis = coherence_axis::columns) {
  const auto vecs = detail::axis_vectors(m, axis);
  std::vector<std::size_t> live;
  std::vector<double> norms;
  coherence_result res;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const double nrm = detail::norm_of(vecs[i]);
    if (nrm == 0.0) {
      ++res.skipped_zero_vectors;
      continue;
    }
    live.push_back(i);
    norms.push_back(nrm);
  }
  if (live.size() < 2)
    throw error("coherence undefined: fewer than 2 nonzero vectors along the axis");

  for (std::size_t a = 0; a < live.size(); ++a) {
    for (std::size_t b = a + 1; b < live.size(); ++b) {
      const double v =
          detail::inner_abs(vecs[live[a]], vecs[live[b]]) / (norms[a] * norms[b]);
      if (v > res.mu) {
        res.mu = v;
        res.arg_pair = {live[a], live[b]};
      }
    }
  }
  return res;
}

// Maximum normalized inner product between the rows of two bases (rows act as
// the sensing vectors). Symmetric in its arguments.
template <class T>
double cross_basis_coherence(const basic_matrix<T>& a, const basic_matrix<T>& b) {
  if (a.cols != b.cols)
    throw dimension_error("cross_basis_coherence: vector dimensions differ (" +
                          std::to_string(a.cols) + " vs " + std::to_string(b.cols) + ")");
  const auto va = detail::axis_vectors(a, coherence_axis::rows);
  const auto vb = detail::axis_vectors(b, coherence_axis::rows);
  std::vector<double> na(va.size()), nb(vb.size());
  for (std::size_t i = 0; i < va.size(); ++i) {
    na[i] = detail::norm_of(va[i]);
    if (na[i] == 0.0)
      throw std::invalid_argument("cross_basis_coherence: zero vector in first basis");
  }
  for (std::size_t i = 0; i < vb.size(); ++i) {
    nb[i] = detail::norm_of(vb[i]);
    if (nb[i] == 0.0)
      throw std::invalid_argument("cross_basis_coherence: zero vector in second basis");
  }
  double best = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i)
    for (std::size_t j = 0; j < vb.size(); ++j)
      best = std::max(best, detail::inner_abs(va[i], vb[j]) / (na[i] * nb[j]));
  return best;
}

// Unitary discrete Fourier basis: row r, column s holds exp(-2*pi*i*r*s/n)/sqrt(n).
inline cmatrix dft_basis(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dft_basis: n must be >= 1");
  cmatrix m(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = 0; s < n; ++s) {
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>((r * s) % n) / static_cast<double>(n);
      m.at(r, s) = std::polar(scale, angle);
    }
  }
  return m;
}

inline cmatrix identity_cbasis(std::size_t n) {
  cmatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = {1.0, 0.0};
  return m;
}

inline cmatrix to_complex(const matrix& m) {
  cmatrix out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = {m.data[i], 0.0};
  return out;
}

// Untruncated overlap count between shifted kernel copies i and j (i < j):
// K - (j - i) while the shift is below K, zero once the copies clear each other.
inline std::uint64_t overlap_theta(std::uint64_t i, std::uint64_t j, std::uint64_t k) {
  if (i >= j) throw std::invalid_argument("overlap_theta: requires i < j");
  const std::uint64_t shift = j - i;
  return shift < k ? k - shift : 0;
}

// Row-wise overlap accounting: each of the n start positions is paired with
// every positive shift, without end truncation; closed form n*k*(k-1)/2.
inline std::uint64_t overlap_theta_row_sum(std::uint64_t n, std::uint64_t k) {
  if (k < 1) throw std::invalid_argument("overlap_theta_row_sum: k must be >= 1");
  std::uint64_t total = 0;
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t delta = 1; delta < k; ++delta)
      total += overlap_theta(i, i + delta, k);
  return total;
}

// Variance of the adjacent-shift overlap T_01 under weights of variance 1/K.
inline double t01_variance(std::uint64_t k) {
  if (k < 2) throw std::invalid_argument("t01_variance: k must be >= 2");
  const double kd = static_cast<double>(k);
  return (kd - 1.0) / (kd * kd);
}

// Chebyshev + union tail bound on P(max |T_ij| > alpha); may exceed 1 (vacuous).
inline double coherence_bound(std::size_t n, std::size_t k, double alpha) {
  if (k < 2) throw std::invalid_argument("coherence_bound: k must be >= 2");
  if (!(alpha > 0.0)) throw std::invalid_argument("coherence_bound: alpha must be > 0");
  const double kd = static_cast<double>(k);
  return static_cast<double>(n) * (kd - 1.0) / (2.0 * kd * alpha * alpha);
}

struct overlap_stats {
  double max_abs_overlap = 0.0;        // max |T_ij|, unnormalized
  double max_coherence = 0.0;          // max normalized |T_ij| / (|col_i||col_j|)
  std::pair<std::size_t, std::size_t> arg_pair{0, 0};
};

// Column-pair overlaps of the valid-mode, dilation-1 Toeplitz matrix of `w`,
// computed from the shift structure without materializing rows. Only pairs with
// shift below K can overlap; boundary columns are truncated exactly as in the
// dense matrix.
inline overlap_stats column_overlap_stats(const std::vector<double>& w, std::size_t n) {
  const std::size_t k = w.size();
  if (k < 1) throw std::invalid_argument("column_overlap_stats: empty kernel");
  if (k > n) throw span_error(k, 1, n);
  const std::size_t nrows = n - k + 1;

  std::vector<double> col_norm(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    // Column j holds w[j - r] for rows r with 0 <= j - r < k.
    const std::size_t t_lo = j + 1 > nrows ? j + 1 - nrows : 0;
    const std::size_t t_hi = std::min(j, k - 1);
    double acc = 0.0;
    for (std::size_t t = t_lo; t <= t_hi; ++t) acc += w[t] * w[t];
    col_norm[j] = std::sqrt(acc);
  }

  overlap_stats stats;
  for (std::size_t delta = 1; delta < k; ++delta) {
    for (std::size_t i = 0; i + delta < n; ++i) {
      const std::size_t j = i + delta;
      const std::size_t t_lo = i + 1 > nrows ? i + 1 - nrows : 0;
      const std::size_t t_hi = std::min(i, k - 1 - delta);
      if (t_lo > t_hi) continue;
      double acc = 0.0;
      for (std::size_t t = t_lo; t <= t_hi; ++t) acc += w[t] * w[t + delta];
      const double a = std::fabs(acc);
      if (a > stats.max_abs_overlap) stats.max_abs_overlap = a;
      if (col_norm[i] > 0.0 && col_norm[j] > 0.0) {
        const double c = a / (col_norm[i] * col_norm[j]);
        if (c > stats.max_coherence) {
          stats.max_coherence = c;
          stats.arg_pair = {i, j};
        }
      }
    }
  }
  return stats;
}

struct coherence_report {
  double mu = 0.0;  // max normalized column coherence observed across trials
  std::pair<std::size_t, std::size_t> arg_pair{0, 0};
  double alpha = 0.0;
  double bound_value = 0.0;
  bool vacuous = false;
  std::uint64_t trials = 0;
  double empirical_exceed_rate = 0.0;
  double std_error = 0.0;       // binomial standard error of the exceed rate
  bool within_bound = false;    // rate <= min(1, bound) + 3 * std_error
};

// Samples random kernels (Gaussian weights, variance 1/K, dilation 1), measures
// the raw column-pair overlaps of each valid-mode Toeplitz matrix, and compares
// the frequency of max |T_ij| > alpha against the analytic tail bound.
inline coherence_report verify_bound_monte_carlo(std::size_t n, std::size_t k_len,
                                                 double alpha, std::uint64_t trials,
                                                 std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("verify_bound_monte_carlo: trials >= 1");
  if (k_len < 2 || k_len > n)
    throw std::invalid_argument("verify_bound_monte_carlo: need 2 <= K <= N");
  coherence_report rep;
  rep.alpha = alpha;
  rep.trials = trials;
  rep.bound_value = coherence_bound(n, k_len, alpha);
  rep.vacuous = rep.bound_value >= 1.0;

  const double sd = 1.0 / std::sqrt(static_cast<double>(k_len));
  std::uint64_t exceed = 0;
  std::vector<double> w(k_len);
  for (std::uint64_t t = 0; t < trials; ++t) {
    rng_stream rng(seed, t);
    for (auto& v : w) v = rng.gaussian(0.0, sd);
    const overlap_stats stats = column_overlap_stats(w, n);
    if (stats.max_abs_overlap > alpha) ++exceed;
    if (stats.max_coherence > rep.mu) {
      rep.mu = stats.max_coherence;
      rep.arg_pair = stats.arg_pair;
    }
  }
  rep.empirical_exceed_rate =
      static_cast<double>(exceed) / static_cast<double>(trials);
  rep.std_error = std::sqrt(rep.empirical_exceed_rate *
                            (1.0 - rep.empirical_exceed_rate) /
                            static_cast<double>(trials));
  rep.within_bound = rep.empirical_exceed_rate <=
                     std::min(1.0, rep.bound_value) + 3.0 * rep.std_error;
  return rep;
}

// Largest normalized column coherence seen over `trials` random kernels
// (Gaussian weights of variance 1/K, dilation 1, valid-mode Toeplitz columns).
inline double measured_max_coherence(std::size_t n, std::size_t k_len,
                                     std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("measured_max_coherence: trials >= 1");
  if (k_len < 1 || k_len > n)
    throw std::invalid_argument("measured_max_coherence: need 1 <= K <= N");
  const double sd = 1.0 / std::sqrt(static_cast<double>(k_len));
  std::vector<double> w(k_len);
  double mu = 0.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    rng_stream rng(seed, t);
    for (auto& v : w) v = rng.gaussian(0.0, sd);
    mu = std::max(mu, column_overlap_stats(w, n).max_coherence);
  }
  return mu;
}

struct recoverability_verdict {
  std::uint64_t s = 0;
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  double c_s = 1.0;
  double mu_used = 0.0;
  double rip_threshold = 0.0;        // s^2 * ln(n) / c_s; need K above this
  double coherence_threshold = 0.0;  // 1 / (2s - 1); need mu below this
  bool rip_ok = false;
  bool coherence_ok = false;
};

// Two sufficient-condition checks for s-sparse recovery: a kernel-length
// threshold K > s^2 * ln(N) / c_s (c_s is an explicit heuristic constant) and
// the mutual-coherence test mu < 1/(2s-1).
inline recoverability_verdict recoverability(std::uint64_t s, std::uint64_t n,
                                             std::uint64_t k, double c_s, double mu) {
  if (s < 1) throw std::invalid_argument("recoverability: s must be >= 1");
  if (n < 2) throw std::invalid_argument("recoverability: n must be >= 2");
  if (!(c_s > 0.0)) throw std::invalid_argument("recoverability: c_s must be > 0");
  if (mu < 0.0 || mu > 1.0)
    throw std::invalid_argument("recoverability: mu must lie in [0, 1]");
  recoverability_verdict v;
  v.s = s;
  v.n = n;
  v.k = k;
  v.c_s = c_s;
  v.mu_used = mu;
  const double sd = static_cast<double>(s);
  v.rip_threshold = sd * sd * std::log(static_cast<double>(n)) / c_s;
  v.coherence_threshold = 1.0 / (2.0 * sd - 1.0);
  v.rip_ok = static_cast<double>(k) > v.rip_threshold;
  v.coherence_ok = mu < v.coherence_threshold;
  return v;
}

struct cross_dilation_summary {
  double mean_coherence = 0.0;
  double max_coherence = 0.0;
  std::uint64_t pairs = 0;
};

// Mean cross-basis coherence between the valid-mode Toeplitz row bases of two
// freshly drawn random kernels with dilations d_a and d_b, over `pairs` draws.
inline cross_dilation_summary mean_cross_dilation_coherence(
    std::size_t n, std::size_t k_len, std::uint32_t d_a, std::uint32_t d_b,
    std::uint64_t pairs, std::uint64_t seed) {
  if (pairs < 1) throw std::invalid_argument("mean_cross_dilation_coherence: pairs >= 1");
  cross_dilation_summary out;
  out.pairs = pairs;
  const double sd = 1.0 / std::sqrt(static_cast<double>(k_len));
  double total = 0.0;
  for (std::uint64_t p = 0; p < pairs; ++p) {
    kernel_spec ka, kb;
    ka.dilation = d_a;
    kb.dilation = d_b;
    ka.padding = kb.padding = padding_mode::none;
    ka.weights.resize(k_len);
    kb.weights.resize(k_len);
    rng_stream ra(seed, 2 * p);
    rng_stream rb(seed, 2 * p + 1);
    for (auto& w : ka.weights) w = ra.gaussian(0.0, sd);
    for (auto& w : kb.weights) w = rb.gaussian(0.0, sd);
    const double mu =
        cross_basis_coherence(build_toeplitz(ka, n).m, build_toeplitz(kb, n).m);
    total += mu;
    out.max_coherence = std::max(out.max_coherence, mu);
  }
  out.mean_coherence = total / static_cast<double>(pairs);
  return out;
}

}  // namespace rkt
