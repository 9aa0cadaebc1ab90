#pragma once
// Goodness-of-fit statistics: Kolmogorov-Smirnov and chi-square.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace polydisk {

// Asymptotic Kolmogorov tail P[K > x] = 2 sum (-1)^{k-1} exp(-2 k^2 x^2).
inline double kolmogorov_q(double x) {
  if (x <= 0) return 1.0;
  if (x < 0.2) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

// Critical value of sqrt(n_eff) D at the given level.
inline double kolmogorov_critical(double level) {
  double lo = 0.2, hi = 5.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = (lo + hi) / 2;
    (kolmogorov_q(mid) > level ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

struct KsResult {
  double D = 0;
  double n_eff = 0;
  double p_value = 1;
  double critical(double level) const { return kolmogorov_critical(level) / std::sqrt(n_eff); }
  bool accept(double level) const { return D <= critical(level); }
};

namespace detail {
inline KsResult ks_finish(double D, double n_eff) {
  KsResult r;
  r.D = D;
  r.n_eff = n_eff;
  const double sn = std::sqrt(n_eff);
  r.p_value = kolmogorov_q((sn + 0.12 + 0.11 / sn) * D);
  return r;
}
}  // namespace detail

inline KsResult ks_one_sample(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw std::invalid_argument("empty sample");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double D = 0;
  for (std::size_t i = 0; i < x.size();) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double F = cdf(x[i]);
    D = std::max({D, static_cast<double>(j) / n - F, F - static_cast<double>(i) / n});
    i = j;
  }
  return detail::ks_finish(D, n);
}

inline KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double D = 0;
  while (i < a.size() || j < b.size()) {
    double v;
    if (j == b.size() || (i < a.size() && a[i] <= b[j]))
      v = a[i];
    else
      v = b[j];
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    D = std::max(D, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return detail::ks_finish(D, na * nb / (na + nb));
}

struct ChiSquareResult {
  double statistic = 0;
  std::int64_t dof = 0;
  double p_value = 1;
};

// Pearson test of counts against probabilities; the leftover mass
// 1 - sum(prob) is pooled into one extra cell when positive.
inline ChiSquareResult chi_square(const std::vector<std::int64_t>& observed, const std::vector<double>& prob,
                                  std::int64_t total) {
  if (observed.size() != prob.size()) throw std::invalid_argument("cell count mismatch");
  ChiSquareResult r;
  double mass = 0;
  std::int64_t seen = 0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const double e = prob[i] * static_cast<double>(total);
    if (e <= 0) continue;
    r.statistic += (static_cast<double>(observed[i]) - e) * (static_cast<double>(observed[i]) - e) / e;
    mass += prob[i];
    seen += observed[i];
    ++cells;
  }
  const double rest = 1 - mass;
  if (rest > 1e-12) {
    const double e = rest * static_cast<double>(total);
    const double o = static_cast<double>(total - seen);
    r.statistic += (o - e) * (o - e) / e;
    ++cells;
  }
  r.dof = static_cast<std::int64_t>(cells) - 1;
  if (r.dof > 0) r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(static_cast<double>(r.dof)), r.statistic));
  return r;
}

struct MeanEstimate {
  double mean = 0, sd = 0, se = 0;
  std::size_t n = 0;
};

inline MeanEstimate mean_estimate(const std::vector<double>& x) {
  MeanEstimate m;
  m.n = x.size();
  if (x.empty()) return m;
  double s = 0, s2 = 0;
  for (double v : x) s += v;
  m.mean = s / static_cast<double>(x.size());
  for (double v : x) s2 += (v - m.mean) * (v - m.mean);
  if (x.size() > 1) m.sd = std::sqrt(s2 / static_cast<double>(x.size() - 1));
  m.se = m.sd / std::sqrt(static_cast<double>(x.size()));
  return m;
}

}  // namespace polydisk
