#include "gblab/flatform.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <random>
#include <utility>

#include "gblab/errors.hpp"

namespace gblab::flatform {

namespace {

double uniform01(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double gaussian(std::mt19937_64& rng) {
  const double r = std::sqrt(-2.0 * std::log(uniform01(rng)));
  return r * std::cos(2.0 * std::numbers::pi * uniform01(rng));
}

Eigen::VectorXd random_unit(std::mt19937_64& rng, int n) {
  Eigen::VectorXd v(n);
  double norm2 = 0.0;
  do {
    for (int i = 0; i < n; ++i) v[i] = gaussian(rng);
    norm2 = v.squaredNorm();
  } while (norm2 < 1e-12);
  return v / std::sqrt(norm2);
}

Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, int n) {
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gaussian(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

Eigen::VectorXd beta_eval(const FlatBilinearTensor& beta, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y) {
  Eigen::VectorXd out(beta.n);
  for (int l = 0; l < beta.n; ++l) {
    double acc = 0.0;
    for (int i = 0; i < beta.n; ++i)
      for (int j = 0; j < beta.n; ++j) acc += beta.h[l][i][j] * x[i] * y[j];
    out[l] = acc;
  }
  return out;
}

Eigen::MatrixXd contract_w(const FlatBilinearTensor& beta, const Eigen::VectorXd& u) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(beta.n, beta.n);
  for (int l = 0; l < beta.n; ++l)
    for (int i = 0; i < beta.n; ++i)
      for (int j = 0; j < beta.n; ++j) m(i, j) += u[l] * beta.h[l][i][j];
  return m;
}

}  // namespace

void validate_tensor(const FlatBilinearTensor& beta) {
  if (beta.n < 1) throw DomainError("tensor dimension must be positive");
  const std::size_t n = static_cast<std::size_t>(beta.n);
  if (beta.h.size() != n) throw DomainError("tensor needs one slice per output axis");
  for (const auto& slice : beta.h) {
    if (slice.size() != n) throw DomainError("tensor slices must be square");
    for (const auto& row : slice)
      if (row.size() != n) throw DomainError("tensor slices must be square");
  }
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!(beta.h[l][i][j] == beta.h[l][j][i]))
          throw DomainError("tensor slices must be symmetric in the trailing index pair");
}

Eigen::MatrixXd slice_matrix(const FlatBilinearTensor& beta, const Eigen::VectorXd& x) {
  Eigen::MatrixXd m(beta.n, beta.n);
  for (int l = 0; l < beta.n; ++l)
    for (int j = 0; j < beta.n; ++j) {
      double acc = 0.0;
      for (int i = 0; i < beta.n; ++i) acc += beta.h[l][i][j] * x[i];
      m(l, j) = acc;
    }
  return m;
}

double flatness_residual(const FlatBilinearTensor& beta, std::uint64_t seed,
                         int pair_samples) {
  validate_tensor(beta);
  if (pair_samples < 1) throw DomainError("sample count must be positive");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < pair_samples; ++s) {
    const Eigen::VectorXd x = random_unit(rng, beta.n);
    const Eigen::VectorXd y = random_unit(rng, beta.n);
    const double two_arg = beta_eval(beta, x, x).dot(beta_eval(beta, y, y)) -
                           beta_eval(beta, x, y).squaredNorm();
    worst = std::max(worst, std::fabs(two_arg));
    const Eigen::VectorXd z = random_unit(rng, beta.n);
    const Eigen::VectorXd w = random_unit(rng, beta.n);
    const double four_arg = 2.0 * beta_eval(beta, x, z).dot(beta_eval(beta, y, w)) -
                            beta_eval(beta, x, y).dot(beta_eval(beta, z, w)) -
                            beta_eval(beta, x, w).dot(beta_eval(beta, z, y));
    worst = std::max(worst, std::fabs(four_arg));
  }
  return worst;
}

Eigen::VectorXd find_regular_element(const FlatBilinearTensor& beta, std::uint64_t seed,
                                     int samples) {
  validate_tensor(beta);
  if (samples < 1) throw DomainError("sample count must be positive");
  std::mt19937_64 rng(seed);
  std::vector<Eigen::VectorXd> candidates;
  for (int i = 0; i < beta.n; ++i) candidates.push_back(Eigen::VectorXd::Unit(beta.n, i));
  for (int s = 0; s < samples; ++s) candidates.push_back(random_unit(rng, beta.n));

  int best_rank = -1;
  double best_sigma = -1.0;
  Eigen::VectorXd best;
  for (const auto& x : candidates) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(slice_matrix(beta, x));
    const auto& sv = svd.singularValues();
    const double thresh = sv.size() > 0 ? sv[0] * beta.n * 1e-12 : 0.0;
    int rank = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv[k] > thresh) ++rank;
    const double sigma_min = sv.size() > 0 ? sv[sv.size() - 1] : 0.0;
    if (rank > best_rank || (rank == best_rank && sigma_min > best_sigma)) {
      best_rank = rank;
      best_sigma = sigma_min;
      best = x;
    }
  }
  if (best_rank < beta.n)
    throw KernelError("every sampled slice is rank deficient: the map has a kernel");
  return best;
}

Diagonalization diagonalize(const FlatBilinearTensor& beta, const DiagonalizeOptions& opt) {
  validate_tensor(beta);
  if (!(opt.flatness_gate > 0.0)) throw DomainError("flatness gate must be positive");
  const int n = beta.n;

  Diagonalization out;
  out.flatness = flatness_residual(beta, opt.seed ^ 0x9E3779B97F4A7C15ULL);
  if (out.flatness > opt.flatness_gate)
    throw DomainError("flatness residual above the gate");

  const Eigen::VectorXd xstar = find_regular_element(beta, opt.seed);
  const Eigen::MatrixXd bx_inverse =
      Eigen::FullPivLU<Eigen::MatrixXd>(slice_matrix(beta, xstar)).inverse();

  // B(y) is linear in y, so the coordinate directions span the family.
  std::vector<Eigen::MatrixXd> family;
  for (int i = 0; i < n; ++i)
    family.push_back(slice_matrix(beta, Eigen::VectorXd::Unit(n, i)) * bx_inverse);
  for (const auto& b : family)
    out.symmetry_residual =
        std::max(out.symmetry_residual, (b - b.transpose()).cwiseAbs().maxCoeff());
  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = a + 1; b < family.size(); ++b)
      out.commutation_residual = std::max(
          out.commutation_residual,
          (family[a] * family[b] - family[b] * family[a]).cwiseAbs().maxCoeff());
  if (out.commutation_residual > 1e-5)
    throw CommutationError("family does not commute: non-flat input slipped past the gate");

  std::vector<Eigen::MatrixXd> sym;
  sym.reserve(family.size());
  for (const auto& b : family) sym.push_back(0.5 * (b + b.transpose()));

  // Seed with the eigenvectors of a random member, then refine by joint
  // Jacobi sweeps over the whole family; the sweeps separate eigenvalue
  // clusters that no single member resolves.
  std::mt19937_64 rng(opt.seed ^ 0xABCDEF9876543210ULL);
  const Eigen::VectorXd t = random_unit(rng, n);
  Eigen::MatrixXd probe = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) probe += t[i] * sym[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(probe);
  Eigen::MatrixXd u = es.eigenvectors();

  std::vector<Eigen::MatrixXd> work;
  work.reserve(sym.size());
  for (const auto& m : sym) work.push_back(u.transpose() * m * u);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double moved = 0.0;
    for (int pc = 0; pc < n - 1; ++pc)
      for (int qc = pc + 1; qc < n; ++qc) {
        double g11 = 0.0, g12 = 0.0, g22 = 0.0;
        for (const auto& m : work) {
          const double a = m(pc, pc) - m(qc, qc);
          const double b = m(pc, qc) + m(qc, pc);
          g11 += a * a;
          g12 += a * b;
          g22 += b * b;
        }
        const double ton = g11 - g22;
        const double toff = 2.0 * g12;
        const double theta = 0.5 * std::atan2(toff, ton + std::hypot(ton, toff));
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        if (std::fabs(s) < 1e-16) continue;
        moved += std::fabs(s);
        for (auto& m : work) {
          for (int r = 0; r < n; ++r) {
            const double mp = m(r, pc), mq = m(r, qc);
            m(r, pc) = c * mp + s * mq;
            m(r, qc) = -s * mp + c * mq;
          }
          for (int col = 0; col < n; ++col) {
            const double mp = m(pc, col), mq = m(qc, col);
            m(pc, col) = c * mp + s * mq;
            m(qc, col) = -s * mp + c * mq;
          }
        }
        for (int r = 0; r < n; ++r) {
          const double up = u(r, pc), uq = u(r, qc);
          u(r, pc) = c * up + s * uq;
          u(r, qc) = -s * up + c * uq;
        }
      }
    if (moved < 1e-15) break;
  }

  out.basis.resize(n);
  out.phis.resize(n);
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXd bj = contract_w(beta, u.col(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ej(bj);
    const int top = std::fabs(ej.eigenvalues()[n - 1]) >= std::fabs(ej.eigenvalues()[0])
                        ? n - 1
                        : 0;
    double lam = ej.eigenvalues()[top];
    if (lam < 0.0) {
      // Flip the column so the rank-one weight comes out positive.
      u.col(j) = -u.col(j);
      lam = -lam;
    }
    out.phis[j] = std::sqrt(std::max(lam, 0.0)) * ej.eigenvectors().col(top);
    Eigen::VectorXd bvec = bx_inverse * u.col(j);
    const double norm = bvec.norm();
    if (norm < 1e-300) throw KernelError("degenerate rank-one direction");
    out.basis[j] = bvec / norm;
  }

  out.A = u;
  out.a_orthogonality =
      (u.transpose() * u - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double target = i == j ? 1.0 : 0.0;
      out.basis_orthonormality = std::max(
          out.basis_orthonormality, std::fabs(out.basis[i].dot(out.basis[j]) - target));
    }
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += u(l, k) * out.phis[k][i] * out.phis[k][j];
        out.reconstruction_residual =
            std::max(out.reconstruction_residual, std::fabs(beta.h[l][i][j] - acc));
      }
  return out;
}

PlantedInstance random_planted_instance(int n, std::uint64_t seed) {
  if (n < 1) throw DomainError("dimension must be positive");
  std::mt19937_64 rng(seed);
  const Eigen::MatrixXd q = random_orthogonal(rng, n);
  const Eigen::MatrixXd w = random_orthogonal(rng, n);

  PlantedInstance inst;
  inst.beta.n = n;
  inst.beta.h.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  inst.w = w;
  for (int k = 0; k < n; ++k) {
    inst.scales.push_back(0.5 + 1.5 * uniform01(rng));
    inst.directions.push_back(q.col(k));
  }
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) {
          const double c2 = inst.scales[k] * inst.scales[k];
          acc += c2 * w(l, k) * q(i, k) * q(j, k);
        }
        inst.beta.h[l][i][j] = acc;
        inst.beta.h[l][j][i] = acc;
      }
  return inst;
}

FlatBilinearTensor degenerate_instance(int n, std::uint64_t seed) {
  if (n < 2) throw DomainError("degenerate construction needs dimension at least 2");
  PlantedInstance inst = random_planted_instance(n, seed);
  FlatBilinearTensor beta;
  beta.n = n;
  beta.h.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  // Rebuild with the last rank-one term removed: the image misses one axis,
  // so every slice is singular.
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n - 1; ++k) {
          const double c2 = inst.scales[k] * inst.scales[k];
          acc += c2 * inst.w(l, k) * inst.directions[k][i] * inst.directions[k][j];
        }
        beta.h[l][i][j] = acc;
        beta.h[l][j][i] = acc;
      }
  return beta;
}

double direction_match_min_cos(const std::vector<Eigen::VectorXd>& recovered,
                               const std::vector<Eigen::VectorXd>& planted) {
  const std::size_t n = recovered.size();
  if (n == 0 || planted.size() != n)
    throw DomainError("direction sets must be non-empty and equal in size");
  std::vector<std::vector<double>> cosines(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double den = recovered[i].norm() * planted[j].norm();
      if (den < 1e-300) throw DomainError("zero direction");
      cosines[i][j] = std::fabs(recovered[i].dot(planted[j])) / den;
    }

  std::vector<bool> used_r(n, false), used_p(n, false);
  double greedy_min = 1.0;
  for (std::size_t step = 0; step < n; ++step) {
    double best = -1.0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (used_r[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (used_p[j]) continue;
        if (cosines[i][j] > best) {
          best = cosines[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    used_r[bi] = true;
    used_p[bj] = true;
    greedy_min = std::min(greedy_min, best);
  }
  if (greedy_min >= 1.0 - 1e-8 || n > 9) return greedy_min;

  // The greedy matching can be suboptimal; small sets afford the exact
  // assignment maximizing the worst matched cosine.
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best_min = greedy_min;
  do {
    double m = 1.0;
    for (std::size_t i = 0; i < n; ++i) m = std::min(m, cosines[i][perm[i]]);
    best_min = std::max(best_min, m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best_min;
}

FlatBilinearTensor tensor_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("tensor must be a non-empty 3D array");
  const int n = static_cast<int>(j.size());
  FlatBilinearTensor t;
  t.n = n;
  t.h.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (int l = 0; l < n; ++l) {
    const auto& slice = j[l];
    if (!slice.is_array() || static_cast<int>(slice.size()) != n)
      throw ConfigError("every tensor slice must be an n x n array");
    for (int i = 0; i < n; ++i) {
      const auto& row = slice[i];
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw ConfigError("every tensor slice must be an n x n array");
      for (int k = 0; k < n; ++k) {
        if (!row[k].is_number()) throw ConfigError("tensor entries must be numbers");
        t.h[l][i][k] = row[k].get<double>();
      }
    }
  }
  validate_tensor(t);
  return t;
}

nlohmann::json tensor_to_json(const FlatBilinearTensor& beta) {
  validate_tensor(beta);
  nlohmann::json j = nlohmann::json::array();
  for (const auto& slice : beta.h) {
    nlohmann::json js = nlohmann::json::array();
    for (const auto& row : slice) js.push_back(row);
    j.push_back(std::move(js));
  }
  return j;
}

nlohmann::json diagonalization_to_json(const Diagonalization& d) {
  auto vecs = [](const std::vector<Eigen::VectorXd>& vs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : vs) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(v[i]);
      out.push_back(std::move(row));
    }
    return out;
  };
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < d.A.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < d.A.cols(); ++j) row.push_back(d.A(i, j));
    a.push_back(std::move(row));
  }
  return nlohmann::json{
      {"basis", vecs(d.basis)},
      {"phis", vecs(d.phis)},
      {"A", std::move(a)},
      {"residuals",
       {{"flatness", d.flatness},
        {"symmetry", d.symmetry_residual},
        {"commutation", d.commutation_residual},
        {"basis_orthonormality", d.basis_orthonormality},
        {"a_orthogonality", d.a_orthogonality},
        {"reconstruction", d.reconstruction_residual}}}};
}

}  // namespace gblab::flatform
