#include "gblab/constants.hpp"

#include <cmath>

namespace gblab::constants {

std::int64_t odd_double_factorial(int m) {
  if (m < 1) throw DomainError("odd double factorial needs m >= 1");
  std::int64_t acc = 1;
  for (int k = 3; k <= 2 * m - 1; k += 2) acc *= k;
  return acc;
}

double sphere_volume(int n) {
  if (n < 1) throw DomainError("sphere volume needs n >= 1");
  const double sqrt_pi = std::sqrt(M_PI);
  return 2.0 * std::pow(sqrt_pi, n) / std::tgamma(0.5 * n);
}

double gaussian_even_moment(int k) {
  if (k < 0) throw DomainError("moment order must be >= 0");
  double acc = std::sqrt(M_PI);
  for (int j = 1; j <= k; ++j) acc *= (2.0 * j - 1.0) / 2.0;  // *(2j-1)/2
  return acc;
}

double gaussian_half_moment(int j) {
  if (j < 0) throw DomainError("moment order must be >= 0");
  return 0.5 * std::tgamma(0.5 * (j + 1));
}

}  // namespace gblab::constants
