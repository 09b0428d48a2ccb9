#pragma once
#include <map>
#include <utility>
#include <vector>

#include "gblab/mixed_form.hpp"

// Orthonormal-frame machinery on a chart: connection one-forms, curvature
// via the structure equations, the Euler form as a form-valued Pfaffian, the
// hypersurface curvature identity, principal-frame identities, and the sign
// action of the coordinate-flip group on a connection.
//
// Conventions (fixed project-wide):
//   nabla e_j = sum_i omega_ij e_i,   omega_ij = -omega_ji
//   d theta_i = -sum_j omega_ij ^ theta_j
//   Omega_ij  = d omega_ij + sum_k omega_ik ^ omega_kj
// so a metric of constant curvature K satisfies Omega_ij = K theta_i^theta_j.
namespace gblab::frames {

using forms::MixedForm;
using forms::MixedSum;
using grid::GridFn;
using grid::GridPtr;

struct FrameConnection {
  GridPtr grid;
  int rank = 0;
  // Coframe; may be left empty for bundle connections restricted to a chart
  // of lower dimension, where no coframe of full rank exists.
  std::vector<MixedForm> theta;
  std::map<std::pair<int, int>, MixedForm> omega;  // keyed i<j

  // Signed accessor: omega_at(j,i) = -omega_at(i,j), omega_at(i,i) = 0.
  MixedForm omega_at(int i, int j) const;
};

struct CurvatureSet {
  GridPtr grid;
  int rank = 0;
  std::map<std::pair<int, int>, MixedForm> Omega;  // keyed i<j, bidegree (2,0)

  MixedForm at(int i, int j) const;  // signed, zero on the diagonal
};

CurvatureSet curvature(const FrameConnection& conn);

// Residual of d theta_i + sum_j omega_ij ^ theta_j (zero for a torsion-free
// metric connection attached to its coframe).
double first_structure_residual(const FrameConnection& conn);

// max_{i<j} |Omega_ij - k theta_i ^ theta_j| over the grid.
double constant_curvature_residual(const FrameConnection& conn, double k);

// Residual of d Omega_ij - sum_k (Omega_ik ^ omega_kj - omega_ik ^ Omega_kj).
double bianchi_residual(const FrameConnection& conn);

// (1/(2 pi)^m) Pf(Omega) as an (n,0)-form for rank n = 2m; identically zero
// for odd rank.
MixedForm euler_form(const CurvatureSet& curv);

// -(1/2) sum_{i<j} Omega_ij e_i e_j as a (2,2)-form in a fiber algebra of the
// given rank (>= curv.rank, allowing a boundary curvature to be compared
// inside the ambient algebra).
MixedForm quadratic_curvature_element(const CurvatureSet& curv, int fiber_rank);

// Hypersurface curvature identity.  `ambient` is a rank-n connection with
// its forms restricted to the (n-1)-dimensional chart of the hypersurface,
// the last frame vector playing the normal; `boundary` is the induced
// rank-(n-1) connection on the same chart.  Checks
//   Omega^bdy_ab = Omega^amb_ab + omega_na ^ omega_nb
// together with the same identity repackaged through the quadratic curvature
// elements, R^bdy = R^amb + (nabla N)^2 / 4.  FrameError when the ambient
// coframe is missing or its normal component does not vanish on the chart.
double gauss_equation_residual(const FrameConnection& ambient,
                               const FrameConnection& boundary);

struct PrincipalFrameData {
  std::vector<GridFn> x;  // principal functions, positive
  std::vector<GridFn> y;  // coordinates with dy_i = (1/x_i) theta_i
  // frame_vectors[i][a]: chart-coordinate components of the frame vector e_i,
  // used to form directional derivatives e_j(x_i) from finite-difference
  // gradients.
  std::vector<std::vector<GridFn>> frame_vectors;
  // Normal-connection one-forms keyed i<j; may be empty when the frame has
  // no ambient normal directions.
  std::map<std::pair<int, int>, MixedForm> phi;
};

struct PrincipalResiduals {
  double connection = 0;   // omega_ij - [(1/x_i)e_j(x_i) theta_i - (1/x_j)e_i(x_j) theta_j]
  double normal_form = 0;  // phi_ij - [(1/x_i)e_i(x_j) theta_i - (1/x_j)e_j(x_i) theta_j]
  double closedness = 0;   // d((1/x_i) theta_i)
  double coordinate = 0;   // dy_i - (1/x_i) theta_i
  double unit_norm = 0;    // sum x_i^2 - 1
};

PrincipalResiduals principal_frame_residuals(const PrincipalFrameData& data,
                                             const FrameConnection& conn);

// Conjugation of the connection by a diagonal sign matrix:
// theta^g_i = g_i theta_i, omega^g_ij = g_i g_j omega_ij.
FrameConnection apply_group_action(const FrameConnection& conn,
                                   const std::vector<int>& signs);

}  // namespace gblab::frames
