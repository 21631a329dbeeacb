#include "ricci/spectral.hpp"

#include <cmath>
#include <limits>

namespace ricci {

NormalizedLaplacian normalized_laplacian(const Graph& g, const EdgeWeights& w) {
  const Index n = g.num_vertices();
  NormalizedLaplacian lap;
  lap.wdeg = weighted_degrees(g, w);
  for (Index v = 0; v < n; ++v)
    if (!(lap.wdeg[v] > 0.0))
      throw std::invalid_argument("normalized_laplacian: zero weighted degree at vertex " +
                                  std::to_string(v));

  Eigen::VectorXd dinv_sqrt = lap.wdeg.array().rsqrt();
  lap.matrix = Eigen::MatrixXd::Identity(n, n);
  for (Index e = 0; e < g.num_edges(); ++e) {
    const auto [u, v] = g.edge_endpoints(e);
    const double s = -w[e] * dinv_sqrt[u] * dinv_sqrt[v];
    lap.matrix(u, v) = s;
    lap.matrix(v, u) = s;
  }
  return lap;
}

double operator_norm_sym(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("operator_norm_sym: eigensolver failed");
  const auto& ev = es.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

namespace {

void canonical_sign(Eigen::VectorXd& v) {
  for (Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

}  // namespace

SpectralSummary eigs_bottom(const NormalizedLaplacian& lap, Index k) {
  const Index n = lap.dim();
  if (k < 3 || k > n) throw std::invalid_argument("eigs_bottom requires 3 <= k <= dim");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap.matrix);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigs_bottom: eigensolver failed");

  SpectralSummary s;
  s.lambda = es.eigenvalues().head(k);
  if (!s.lambda.allFinite()) throw std::runtime_error("eigs_bottom: non-finite eigenvalues");
  s.v2 = es.eigenvectors().col(1);
  canonical_sign(s.v2);
  s.gap = s.lambda[2] - s.lambda[1];

  const double resid = (lap.matrix * s.v2 - s.lambda[1] * s.v2).norm();
  if (!(resid <= 1e-8))
    throw std::runtime_error("eigs_bottom: eigenvector residual " + std::to_string(resid) +
                             " exceeds 1e-8");
  return s;
}

std::pair<NormalizedLaplacian, SpectralSummary> block_two_level_laplacian(Index n, double a,
                                                                          double b) {
  if (n < 2) throw std::invalid_argument("block_two_level_laplacian: n must be >= 2");
  if (!(a > 0.0) || b < 0.0 || b > a)
    throw std::invalid_argument("block_two_level_laplacian: require 0 <= b <= a, a > 0");
  const double dstar = (n - 1.0) * a + static_cast<double>(n) * b;

  const Index n2 = 2 * n;
  NormalizedLaplacian lap;
  lap.wdeg = Eigen::VectorXd::Constant(n2, dstar);
  lap.matrix.setZero(n2, n2);
  for (Index i = 0; i < n2; ++i)
    for (Index j = 0; j < n2; ++j) {
      if (i == j) {
        lap.matrix(i, j) = 1.0;
        continue;
      }
      const bool same = (i < n) == (j < n);
      lap.matrix(i, j) = -(same ? a : b) / dstar;
    }

  const double r_n = ((n - 1.0) * a - static_cast<double>(n) * b) / dstar;
  SpectralSummary s;
  s.lambda.resize(3);
  s.lambda << 0.0, 1.0 - r_n, 1.0 + a / dstar;
  s.gap = s.lambda[2] - s.lambda[1];
  s.v2 = Eigen::VectorXd::Constant(n2, 1.0 / std::sqrt(static_cast<double>(n2)));
  s.v2.tail(n) *= -1.0;

  // The closed form is a theorem; disagreement with the dense solver means a
  // numerical fault, so it is always cross-checked.
  SpectralSummary dense = eigs_bottom(lap, 3);
  for (Index j = 0; j < 3; ++j)
    if (std::abs(dense.lambda[j] - s.lambda[j]) > 1e-9)
      throw std::runtime_error("block_two_level_laplacian: closed-form eigenvalue " +
                               std::to_string(j) + " disagrees with dense solver");
  const double resid = (lap.matrix * s.v2 - s.lambda[1] * s.v2).norm();
  if (!(resid <= 1e-9 * std::max(1.0, operator_norm_sym(lap.matrix))))
    throw std::runtime_error("block_two_level_laplacian: block eigenvector residual too large");

  return {std::move(lap), std::move(s)};
}

std::pair<NormalizedLaplacian, SpectralSummary> population_laplacian(Index n, double p0,
                                                                     double p1, int level) {
  if (level < 0) throw std::invalid_argument("population_laplacian: level must be >= 0");
  const MeanFieldTrajectory tr = benchmark_trajectory(n, p0, p1, level);
  return block_two_level_laplacian(n, p0 * tr.w_in[static_cast<std::size_t>(level)],
                                   p1 * tr.w_out[static_cast<std::size_t>(level)]);
}

ClusteringResult sign_cluster(const Eigen::VectorXd& v, const Labels* truth) {
  const Index n2 = static_cast<Index>(v.size());
  if (n2 == 0) throw std::invalid_argument("sign_cluster: empty vector");

  Eigen::VectorXd centered = v.array() - v.mean();
  const double norm = centered.norm();
  if (!(norm > 1e-12 * std::max(1.0, v.norm())))
    throw std::invalid_argument("sign_cluster: degenerate eigenvector (parallel to ones)");
  centered /= norm;

  ClusteringResult out;
  if (truth != nullptr) {
    if (truth->size() != n2) throw std::invalid_argument("sign_cluster: labels size mismatch");
    // Fix the global sign by nonnegative inner product with the block vector f.
    const double fscale = 1.0 / std::sqrt(static_cast<double>(n2));
    double dot = 0.0;
    for (Index i = 0; i < n2; ++i)
      dot += centered[i] * (truth->of(i) == 1 ? fscale : -fscale);
    if (dot < 0.0) {
      centered = -centered;
      dot = -dot;
    }
    const double cos2 = std::min(1.0, dot * dot);
    out.tan_angle_sq = cos2 > 0.0 ? (1.0 - cos2) / cos2
                                  : std::numeric_limits<double>::infinity();
  } else {
    canonical_sign(centered);
  }

  out.labels.resize(static_cast<std::size_t>(n2));
  for (Index i = 0; i < n2; ++i)
    out.labels[static_cast<std::size_t>(i)] = centered[i] < 0.0 ? 2 : 1;

  if (truth != nullptr) {
    Index mismatch = 0;
    for (Index i = 0; i < n2; ++i)
      if (out.labels[static_cast<std::size_t>(i)] != truth->of(i)) ++mismatch;
    out.err = static_cast<double>(std::min(mismatch, n2 - mismatch)) / static_cast<double>(n2);
  }
  return out;
}

PerturbationReport perturbation_diagnostics(const NormalizedLaplacian& emp,
                                            const NormalizedLaplacian& ref,
                                            double gap_ref) {
  if (emp.dim() != ref.dim())
    throw std::invalid_argument("perturbation_diagnostics: dimension mismatch");
  if (!(gap_ref > 0.0))
    throw std::invalid_argument("perturbation_diagnostics: gap_ref must be positive");
  const Index n = emp.dim();

  PerturbationReport rep;
  rep.delta_op = operator_norm_sym(emp.matrix - ref.matrix);
  rep.lap_bound_lhs = rep.delta_op;
  rep.davis_kahan_bound = rep.delta_op / gap_ref;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es_emp(emp.matrix), es_ref(ref.matrix);
  if (es_emp.info() != Eigen::Success || es_ref.info() != Eigen::Success)
    throw std::runtime_error("perturbation_diagnostics: eigensolver failed");
  rep.max_weyl_excess =
      (es_emp.eigenvalues() - es_ref.eigenvalues()).cwiseAbs().maxCoeff() - rep.delta_op;

  const double dot = std::abs(es_emp.eigenvectors().col(1).dot(es_ref.eigenvectors().col(1)));
  rep.sin_angle_v2 = std::sqrt(std::max(0.0, 1.0 - std::min(1.0, dot) * std::min(1.0, dot)));

  // Recover the weight matrices: W = D^{1/2} (I − L) D^{1/2}.
  auto recover = [n](const NormalizedLaplacian& lap) {
    Eigen::VectorXd dsqrt = lap.wdeg.array().sqrt();
    Eigen::MatrixXd w = (Eigen::MatrixXd::Identity(n, n) - lap.matrix);
    return Eigen::MatrixXd(dsqrt.asDiagonal() * w * dsqrt.asDiagonal());
  };
  const Eigen::MatrixXd w_emp = recover(emp), w_ref = recover(ref);
  const double m = std::min(emp.wdeg.minCoeff(), ref.wdeg.minCoeff());
  const double dd = (emp.wdeg - ref.wdeg).cwiseAbs().maxCoeff();
  rep.lap_bound_rhs = operator_norm_sym(w_emp - w_ref) / m +
                      dd / (m * m) * (operator_norm_sym(w_emp) + operator_norm_sym(w_ref));
  return rep;
}

}  // namespace ricci
