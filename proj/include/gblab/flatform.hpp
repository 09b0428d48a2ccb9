#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

// Diagonalization of flat symmetric bilinear maps: given a tensor of n
// symmetric n x n slices whose bilinear map satisfies the flatness identity
// <b(x,x), b(y,y)> = <b(x,y), b(x,y)> with trivial kernel, recover the
// rank-one directions, the scaled one-forms, and the orthogonal mixing
// matrix, so that every slice is a signed combination of rank-one squares.
namespace gblab::flatform {

// Coordinates h[lambda][i][j] of a symmetric bilinear map V x V -> W with
// dim V = dim W = n; each slice must be symmetric in (i, j) exactly.
struct FlatBilinearTensor {
  int n = 0;
  std::vector<std::vector<std::vector<double>>> h;
};

void validate_tensor(const FlatBilinearTensor& beta);

// Matrix of b(x, .) : V -> W; row lambda, column j.
Eigen::MatrixXd slice_matrix(const FlatBilinearTensor& beta, const Eigen::VectorXd& x);

// Max violation of the flatness identity over seeded random unit pairs plus
// its polarized four-argument form 2<b(x,z),b(y,w)> = <b(x,y),b(z,w)> +
// <b(x,w),b(z,y)>.
double flatness_residual(const FlatBilinearTensor& beta, std::uint64_t seed = 0x5EED,
                         int pair_samples = 1000);

// A unit vector x maximizing rank of b(x, .), searched over seeded random
// unit vectors plus the coordinate directions; among full-rank candidates
// the best-conditioned one wins. KernelError when every candidate is rank
// deficient, which signals a nontrivial kernel.
Eigen::VectorXd find_regular_element(const FlatBilinearTensor& beta,
                                     std::uint64_t seed = 0x5EED, int samples = 200);

struct DiagonalizeOptions {
  double flatness_gate = 1e-8;  // inputs above this residual are rejected
  std::uint64_t seed = 0x5EED;
};

struct Diagonalization {
  std::vector<Eigen::VectorXd> basis;  // rank-one directions in V, unit length
  std::vector<Eigen::VectorXd> phis;   // scaled one-forms, phi_j phi_j^T terms
  Eigen::MatrixXd A;                   // orthogonal mixing matrix, columns in W

  double flatness = 0.0;                 // gate residual of the input
  double symmetry_residual = 0.0;        // max |B(y) - B(y)^T|
  double commutation_residual = 0.0;     // max |[B(y_a), B(y_b)]|
  double basis_orthonormality = 0.0;     // max |<v_i, v_j> - delta_ij|
  double a_orthogonality = 0.0;          // max |A^T A - I|
  double reconstruction_residual = 0.0;  // max |h - sum_j A(., j) phi_j phi_j^T|
};

// Full pipeline: flatness gate (DomainError above it), regular element
// (KernelError), the commuting family B(y) = b(y,.) b(x,.)^{-1}
// (CommutationError above 1e-5), joint Jacobi diagonalization of the family,
// and rank-one extraction per common eigenvector.
Diagonalization diagonalize(const FlatBilinearTensor& beta,
                            const DiagonalizeOptions& opt = {});

// Synthetic instance with planted structure: orthonormal directions q_k in
// V, orthonormal axes w_k in W, positive scales c_k, and slices
// h[lambda] = sum_k c_k^2 w_k[lambda] q_k q_k^T.  Flat by construction.
struct PlantedInstance {
  FlatBilinearTensor beta;
  std::vector<Eigen::VectorXd> directions;  // q_k
  std::vector<double> scales;               // c_k
  Eigen::MatrixXd w;                        // columns w_k
};

PlantedInstance random_planted_instance(int n, std::uint64_t seed);

// Same construction with one term dropped: b(x, .) is never invertible, so
// the solver must report a kernel.
FlatBilinearTensor degenerate_instance(int n, std::uint64_t seed);

// Smallest |cosine| over an optimal sign-insensitive matching between two
// direction sets; 1 means the sets agree up to signs and order.  Greedy
// matching with an exhaustive fallback for small sizes.
double direction_match_min_cos(const std::vector<Eigen::VectorXd>& recovered,
                               const std::vector<Eigen::VectorXd>& planted);

// JSON interchange: the tensor is a bare 3D array indexed [lambda][i][j].
FlatBilinearTensor tensor_from_json(const nlohmann::json& j);
nlohmann::json tensor_to_json(const FlatBilinearTensor& beta);
nlohmann::json diagonalization_to_json(const Diagonalization& d);

}  // namespace gblab::flatform
