#pragma once
// Grid simulation of the Brownian disk driving processes and the
// pseudo-metrics d_C, d_Lambda built from them.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "polydisk/rng.hpp"

namespace polydisk {

struct out_of_domain : std::domain_error {
  using std::domain_error::domain_error;
};

// Range minimum over a fixed array.
class MinTable {
 public:
  MinTable() = default;
  explicit MinTable(const std::vector<double>& v) {
    const std::size_t n = v.size();
    table_.push_back(v);
    for (std::size_t w = 1; 2 * w <= n; w *= 2) {
      const auto& prev = table_.back();
      std::vector<double> next(n - 2 * w + 1);
      for (std::size_t i = 0; i < next.size(); ++i) next[i] = std::min(prev[i], prev[i + w]);
      table_.push_back(std::move(next));
    }
  }
  // Minimum over the closed index range [a, b], a <= b.
  double operator()(std::size_t a, std::size_t b) const {
    const std::size_t len = b - a + 1;
    const int k = std::bit_width(len) - 1;
    const std::size_t w = std::size_t{1} << k;
    return std::min(table_[k][a], table_[k][b + 1 - w]);
  }

 private:
  std::vector<std::vector<double>> table_;
};

struct DiskProcesses {
  double h = 0;
  bool hit = false;         // C reached -1 before the horizon
  std::vector<double> C;
  std::vector<double> Lambda0;
  std::vector<double> T_inverse;  // -inf_{[0,s]} C, capped at 1
  std::vector<double> BR_T;       // bridge evaluated at T_inverse
  std::vector<double> Lambda;
  MinTable C_min, Lambda_min;

  std::size_t steps() const { return C.size() - 1; }
  double length() const { return h * static_cast<double>(steps()); }
  double A() const { return hit ? length() : std::numeric_limits<double>::infinity(); }

  std::size_t index(double s) const {
    if (!(s >= 0) || s > length() + 1e-12 * (1 + length()))
      throw out_of_domain("time " + std::to_string(s) + " outside [0, " + std::to_string(length()) + "]");
    return std::min(steps(), static_cast<std::size_t>(std::llround(s / h)));
  }
  double at(const std::vector<double>& path, double s) const { return path[index(s)]; }
};

namespace detail {

// Labels along C - inf C: a Brownian motion indexed by the coded forest,
// restarted at 0 at every new infimum.
inline std::vector<double> snake_labels(const std::vector<double>& Y, Rng& rng) {
  struct Entry {
    double height, label;
  };
  std::vector<double> out(Y.size(), 0.0);
  std::vector<Entry> line{{0.0, 0.0}};
  for (std::size_t k = 1; k < Y.size(); ++k) {
    const double y = Y[k];
    if (y <= 0) {
      line.assign(1, {0.0, 0.0});
      out[k] = 0;
      continue;
    }
    if (y >= line.back().height) {
      const double l = line.back().label + std::sqrt(y - line.back().height) * rng.normal();
      line.push_back({y, l});
      out[k] = l;
      continue;
    }
    Entry upper = line.back();
    while (line.back().height > y) {
      upper = line.back();
      line.pop_back();
    }
    const Entry lower = line.back();
    double l = lower.label;
    if (lower.height < y) {
      const double span = upper.height - lower.height;
      const double a = (y - lower.height) / span;
      l = lower.label + a * (upper.label - lower.label) + std::sqrt(a * (upper.height - y)) * rng.normal();
      line.push_back({y, l});
    }
    out[k] = l;
  }
  return out;
}

}  // namespace detail

// Simulates C as a Gaussian walk of step variance h until it first
// crosses -1 or until `horizon`, together with Lambda0, BR o T^{-1} and
// Lambda = Lambda0 + sqrt(3) BR o T^{-1}.
inline DiskProcesses simulate_disk(Rng& rng, double h, double horizon = std::numeric_limits<double>::infinity()) {
  if (!(h > 0)) throw out_of_domain("grid step must be positive");
  DiskProcesses P;
  P.h = h;
  const double sd = std::sqrt(h);
  const double max_steps = horizon / h;
  P.C.push_back(0.0);
  double c = 0, low = 0;
  std::vector<double> Y{0.0};
  while (static_cast<double>(P.C.size() - 1) < max_steps) {
    c += sd * rng.normal();
    if (c <= -1) {
      c = -1;
      low = -1;
      P.C.push_back(c);
      Y.push_back(0);
      P.hit = true;
      break;
    }
    low = std::min(low, c);
    P.C.push_back(c);
    Y.push_back(c - low);
  }
  P.Lambda0 = detail::snake_labels(Y, rng);

  const std::size_t n = P.C.size();
  P.T_inverse.resize(n);
  P.BR_T.resize(n);
  P.Lambda.resize(n);
  double y_prev = 0, b = 0, m = 0;
  for (std::size_t k = 0; k < n; ++k) {
    m = std::min(m, P.C[k]);
    const double y = std::min(1.0, -m);
    if (y > y_prev) {
      if (y >= 1) {
        b = 0;
      } else {
        const double rest = 1 - y_prev;
        b = b * (1 - y) / rest + std::sqrt((y - y_prev) * (1 - y) / rest) * rng.normal();
      }
      y_prev = y;
    }
    P.T_inverse[k] = y;
    P.BR_T[k] = b;
    P.Lambda[k] = P.Lambda0[k] + std::sqrt(3.0) * b;
  }
  P.C_min = MinTable(P.C);
  P.Lambda_min = MinTable(P.Lambda);
  return P;
}

inline double d_C(const DiskProcesses& P, double s, double s2) {
  std::size_t a = P.index(s), b = P.index(s2);
  if (a > b) std::swap(a, b);
  return std::max(0.0, P.C[a] + P.C[b] - 2 * P.C_min(a, b));
}

inline double d_C_index(const DiskProcesses& P, std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return std::max(0.0, P.C[a] + P.C[b] - 2 * P.C_min(a, b));
}

inline double d_Lambda_index(const DiskProcesses& P, std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  const double inside = P.Lambda_min(a, b);
  double outside = P.Lambda_min(b, P.steps());
  outside = std::min(outside, P.Lambda_min(0, a));
  return std::max(0.0, P.Lambda[a] + P.Lambda[b] - 2 * std::max(inside, outside));
}

inline double d_Lambda(const DiskProcesses& P, double s, double s2) {
  return d_Lambda_index(P, P.index(s), P.index(s2));
}

struct ChainOptions {
  std::int32_t points = 64;   // stratified candidate points
  double identify_tol = -1;   // d_C below this counts as identified; default 2 sqrt(h)
};

// Shortest chain s = t_0, ..., t_k = s' over a fixed candidate set, each
// link costing d_Lambda, or 0 when its ends are identified by d_C.
inline double chain_Dstar(const DiskProcesses& P, double s, double s2, std::int32_t k, const ChainOptions& opt = {}) {
  if (k < 1) throw out_of_domain("chain length must be at least 1");
  const std::size_t a = P.index(s), b = P.index(s2);
  const std::size_t n = P.steps();
  const double tol = opt.identify_tol >= 0 ? opt.identify_tol : 2 * std::sqrt(P.h);

  std::vector<std::size_t> cand{a, b};
  for (std::int32_t i = 0; i < opt.points; ++i)
    cand.push_back(std::min(n, static_cast<std::size_t>((static_cast<double>(i) + 0.5) * static_cast<double>(n) / opt.points)));
  auto argmin = [&](std::size_t lo, std::size_t hi) {
    std::size_t best = lo;
    for (std::size_t i = lo; i <= hi; ++i)
      if (P.Lambda[i] < P.Lambda[best]) best = i;
    return best;
  };
  cand.push_back(argmin(std::min(a, b), std::max(a, b)));
  cand.push_back(argmin(0, n));
  const std::size_t base = cand.size();
  for (std::size_t i = 0; i < base; ++i) {
    const std::size_t t = cand[i];
    std::size_t j = t + 1;
    while (j <= n && P.C[j] > P.C[t]) ++j;
    if (j <= n) cand.push_back(j);
    if (t > 0) {
      std::size_t q = t - 1;
      while (q > 0 && P.C[q] > P.C[t]) --q;
      cand.push_back(q);
    }
  }
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  const std::size_t m = cand.size();
  std::vector<double> w(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      w[i * m + j] = d_C_index(P, cand[i], cand[j]) <= tol ? 0.0 : d_Lambda_index(P, cand[i], cand[j]);
  const auto ia = static_cast<std::size_t>(std::lower_bound(cand.begin(), cand.end(), a) - cand.begin());
  const auto ib = static_cast<std::size_t>(std::lower_bound(cand.begin(), cand.end(), b) - cand.begin());

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(m, inf), next(m);
  dist[ia] = 0;
  for (std::int32_t step = 0; step < k; ++step) {
    next = dist;
    for (std::size_t i = 0; i < m; ++i) {
      if (dist[i] == inf) continue;
      for (std::size_t j = 0; j < m; ++j) next[j] = std::min(next[j], dist[i] + w[i * m + j]);
    }
    dist.swap(next);
  }
  return dist[ib];
}

// First hitting time of -1 by a standard Brownian motion.
inline double sample_A(Rng& rng) {
  const double z = rng.normal();
  return 1.0 / (z * z);
}

inline double A_cdf(double t) { return t <= 0 ? 0.0 : std::erfc(1.0 / std::sqrt(2.0 * t)); }

// Exact draw of Lambda(s) 1{A > s}: C_s and the running minimum from the
// bridge-minimum law, then the two Gaussian label parts.
inline double sample_Lambda_marginal(double s, Rng& rng) {
  if (!(s > 0)) throw out_of_domain("marginal time must be positive");
  const double W = std::sqrt(s) * rng.normal();
  const double M = (W - std::sqrt(W * W + 2 * s * rng.exponential())) / 2;
  if (M <= -1) return 0.0;
  const double y = -M;
  return std::sqrt(W - M + 3 * y * (1 - y)) * rng.normal();
}

// sqrt(3) times a standard Brownian bridge at time y.
inline double bridge_marginal_sd(double y) { return std::sqrt(3 * y * (1 - y)); }

inline std::string disk_csv(const DiskProcesses& P) {
  std::string out = "t,C,Lambda\n";
  for (std::size_t k = 0; k < P.C.size(); ++k)
    out += std::to_string(P.h * static_cast<double>(k)) + "," + std::to_string(P.C[k]) + "," + std::to_string(P.Lambda[k]) + "\n";
  return out;
}

}  // namespace polydisk
