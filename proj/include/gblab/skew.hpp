#pragma once
#include <vector>

#include "gblab/errors.hpp"

// Skew-symmetric matrices and their Pfaffians.
namespace gblab::skew {

// Dense skew-symmetric matrix.  Construction rejects (never repairs) input
// whose symmetric part exceeds `skew_tol`.
class SkewMatrix {
 public:
  static constexpr double skew_tol = 1e-12;

  SkewMatrix(int dim, const std::vector<double>& entries);  // row-major dim*dim

  int dim() const { return dim_; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * dim_ + j]; }

 private:
  int dim_;
  std::vector<double> a_;
};

// Pfaffian by the signed permutation sum,
//   Pf(A) = (1/(2^m m!)) sum_sigma sgn(sigma) a_{s1 s2} ... a_{s(2m-1) s(2m)}.
// Exponential cost; restricted to dim <= 6.
double pfaffian_definition_sum(const SkewMatrix& A);

// Pfaffian by expansion along the first row,
//   Pf(A) = sum_{j>1} (-1)^j a_{1j} Pf(A with rows/cols 1,j removed).
// Restricted to dim <= 12.
double pfaffian_recursive(const SkewMatrix& A);

// Dispatcher: definition sum for dim <= 6, recursion above.  Odd dimension
// raises DimensionError.
double pfaffian(const SkewMatrix& A);

}  // namespace gblab::skew
