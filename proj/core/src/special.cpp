#include "chemofv/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace chemofv {

namespace {

// Power series in long double; the cancellation at x = 20 costs about seven digits.
double series(int n, double x) {
  const long double q = -0.25L * x * x;
  long double term = 1.0L;
  for (int i = 1; i <= n; ++i) term *= 0.5L * x / i;
  long double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<long double>(k) * (k + n));
    sum += term;
    if (std::fabs(term) < 1e-21L * std::fabs(sum) && k > 2.0 * x) break;
  }
  return static_cast<double>(sum);
}

// Hankel expansion, truncated at the smallest term.
double asymptotic(int n, double x) {
  const double mu = 4.0 * n * n;
  const double z = 8.0 * x;
  double p = 1.0, q = 0.0, term = 1.0, last = INFINITY;
  for (int k = 1; k < 60; ++k) {
    term *= (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (k * z);
    if (std::abs(term) > last) break;
    last = std::abs(term);
    if (k % 2 == 1) {
      q += (k % 4 == 1 ? 1.0 : -1.0) * term;
    } else {
      p += (k % 4 == 2 ? -1.0 : 1.0) * term;
    }
  }
  const double chi = x - (0.5 * n + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j(int order, double x) {
  if (order != 0 && order != 1) throw std::invalid_argument("only orders 0 and 1 are supported");
  if (!(x >= 0.0)) throw std::domain_error("Bessel argument must be nonnegative");
  if (x <= 20.0) return series(order, x);
  return asymptotic(order, x);
}

double bessel_j_prime(int order, double x) {
  if (order == 0) return -bessel_j(1, x);
  if (order == 1) {
    // J_2 = (2/x) J_1 - J_0
    if (x == 0.0) return 0.5;
    return bessel_j(0, x) - bessel_j(1, x) / x;
  }
  throw std::invalid_argument("only orders 0 and 1 are supported");
}

}  // namespace chemofv
