#include "gblab/skew.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gblab::skew {

SkewMatrix::SkewMatrix(int dim, const std::vector<double>& entries) : dim_(dim) {
  if (dim <= 0) throw DimensionError("matrix dimension must be positive");
  if (entries.size() != static_cast<std::size_t>(dim) * dim)
    throw DimensionError("entry count does not match dimension");
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (std::abs(entries[i * dim + j] + entries[j * dim + i]) > skew_tol)
        throw NotSkewError("matrix is not skew-symmetric within 1e-12");
  a_ = entries;
}

namespace {

int permutation_sign(const std::vector<int>& p) {
  int sign = 1;
  std::vector<bool> seen(p.size(), false);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (seen[i]) continue;
    std::size_t j = i, len = 0;
    while (!seen[j]) {
      seen[j] = true;
      j = p[j];
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

double pf_recursive_impl(const SkewMatrix& A, std::vector<int>& live) {
  const std::size_t n = live.size();
  if (n == 0) return 1.0;
  if (n == 2) return A.at(live[0], live[1]);
  const int i0 = live[0];
  double acc = 0.0;
  // j runs over positions 1..n-1 of the live index list; the sign pattern
  // matches the first-row expansion (+, -, +, ... on positions 1,2,3,...).
  for (std::size_t jpos = 1; jpos < n; ++jpos) {
    const double aij = A.at(i0, live[jpos]);
    if (aij == 0.0) continue;
    std::vector<int> rest;
    rest.reserve(n - 2);
    for (std::size_t k = 1; k < n; ++k)
      if (k != jpos) rest.push_back(live[k]);
    const double sign = (jpos % 2 == 1) ? 1.0 : -1.0;
    acc += sign * aij * pf_recursive_impl(A, rest);
  }
  return acc;
}

}  // namespace

double pfaffian_definition_sum(const SkewMatrix& A) {
  const int n = A.dim();
  if (n % 2 != 0) throw DimensionError("Pfaffian needs even dimension");
  if (n > 6) throw DimensionError("definition sum limited to dimension <= 6");
  const int m = n / 2;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double acc = 0.0;
  do {
    double term = permutation_sign(perm);
    for (int k = 0; k < m && term != 0.0; ++k)
      term *= A.at(perm[2 * k], perm[2 * k + 1]);
    acc += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  double norm = 1.0;
  for (int k = 1; k <= m; ++k) norm *= 2.0 * k;  // 2^m m!
  return acc / norm;
}

double pfaffian_recursive(const SkewMatrix& A) {
  const int n = A.dim();
  if (n % 2 != 0) throw DimensionError("Pfaffian needs even dimension");
  if (n > 12) throw DimensionError("recursive Pfaffian limited to dimension <= 12");
  std::vector<int> live(n);
  std::iota(live.begin(), live.end(), 0);
  return pf_recursive_impl(A, live);
}

double pfaffian(const SkewMatrix& A) {
  return A.dim() <= 6 ? pfaffian_definition_sum(A) : pfaffian_recursive(A);
}

}  // namespace gblab::skew
