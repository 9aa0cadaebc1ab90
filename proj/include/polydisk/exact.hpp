#pragma once
// Exact rational quantities: partition functions, counts and probabilities.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "polydisk/forest.hpp"

namespace polydisk {

using bigint = boost::multiprecision::cpp_int;

struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

inline bigint factorial(std::int64_t n) {
  bigint r = 1;
  for (std::int64_t k = 2; k <= n; ++k) r *= k;
  return r;
}

inline bigint binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

inline rational rpow(const rational& x, std::int64_t e) {
  rational r = 1;
  for (std::int64_t k = 0; k < e; ++k) r *= x;
  return r;
}

inline const rational rho_II{2, 27};
inline const rational rho_III{27, 256};

struct PartitionValue {
  rational Z;
  rational t;
};

// Type-II partition function of the p-gon at parameter theta, t = theta (1 - 2 theta)^2.
inline PartitionValue partition_function(std::int64_t p, const rational& theta) {
  if (p < 2) throw domain_error("perimeter below 2");
  if (theta <= 0 || theta >= rational(1, 2)) throw domain_error("theta outside (0, 1/2)");
  const rational one_m = 1 - 2 * theta;
  rational z = rational(factorial(2 * p - 4)) * ((1 - 6 * theta) * p + 6 * theta) /
               rational(factorial(p) * factorial(p - 2));
  z *= rpow(theta, p) * one_m * one_m;
  return {z, theta * one_m * one_m};
}

// Power series in t (coefficients 0..order) of the type-II partition function,
// obtained from theta(t), the inverse of t = theta (1 - 2 theta)^2.
inline std::vector<rational> partition_series(std::int64_t p, std::int32_t order) {
  if (p < 2) throw domain_error("perimeter below 2");
  using series = std::vector<rational>;
  const auto n = static_cast<std::size_t>(order) + 1;
  auto mul = [n](const series& a, const series& b) {
    series c(n, rational(0));
    for (std::size_t i = 0; i < n; ++i)
      if (a[i] != 0)
        for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  // theta = t / (1 - 2 theta)^2, iterated to a fixed point.
  series theta(n, rational(0));
  for (std::int32_t it = 0; it <= order; ++it) {
    series base(n, rational(0));
    for (std::size_t i = 0; i < n; ++i) base[i] = -2 * theta[i];
    base[0] += 1;
    series inv(n, rational(0)), power(n, rational(0));
    power[0] = 1;
    series geo(n, rational(0));
    // 1/(1 - x)^2 = sum (k+1) x^k with x = 2 theta.
    series x(n, rational(0));
    for (std::size_t i = 0; i < n; ++i) x[i] = 2 * theta[i];
    for (std::int32_t k = 0; k <= order; ++k) {
      for (std::size_t i = 0; i < n; ++i) geo[i] += rational(k + 1) * power[i];
      power = mul(power, x);
    }
    series t(n, rational(0));
    if (n > 1) t[1] = 1;
    theta = mul(t, geo);
  }
  series one_m(n, rational(0));
  for (std::size_t i = 0; i < n; ++i) one_m[i] = -2 * theta[i];
  one_m[0] += 1;
  series pw(n, rational(0));
  pw[0] = 1;
  for (std::int64_t k = 0; k < p; ++k) pw = mul(pw, theta);
  series lin(n, rational(0));
  for (std::size_t i = 0; i < n; ++i) lin[i] = (-6 * p + 6) * theta[i];
  lin[0] += p;
  series z = mul(mul(mul(pw, one_m), one_m), lin);
  const rational c = rational(factorial(2 * p - 4)) / rational(factorial(p) * factorial(p - 2));
  for (auto& v : z) v *= c;
  return z;
}

// Rooted simple triangulations of the p-gon with n inner vertices.
inline bigint simple_triangulation_count(std::int64_t n, std::int64_t p) {
  if (p < 3 || n < 0) return 0;
  return 2 * factorial(2 * p - 3) * factorial(4 * n + 2 * p - 5) /
         (factorial(p - 1) * factorial(p - 3) * factorial(n) * factorial(3 * n + 2 * p - 3));
}

// Blossoming forests of perimeter p with n proper vertices (marked triangulations).
inline bigint blossoming_forest_count(std::int64_t n, std::int64_t p) {
  const std::int64_t inner = n - p;
  if (inner < 0) return 0;
  return simple_triangulation_count(inner, p) * (2 * inner + p - 2);
}

// P[sampled F*_p = F] for a forest with the given number of inner proper vertices.
inline rational marked_probability(std::int64_t p, std::int64_t inner) {
  const rational c = rational(binomial(2 * p - 4, p - 3)) / rational(bigint(1) << (2 * p - 3));
  return rpow(rational(9, 64), p) * rpow(rho_III, inner) / (rational(27, 512) * c);
}

}  // namespace polydisk
