#include "fuzzysweep/gk.hpp"

#include <cmath>
#include <limits>

namespace fuzzysweep {

namespace {

constexpr double kMinDeterminant = 1e-300;

}  // namespace

double GkConfig::rho_for(std::size_t cluster) const {
  if (rho.empty()) return 1.0;
  if (rho.size() == 1) return rho.front();
  return rho.at(cluster);
}

void GkConfig::validate() const {
  base.validate();
  if (!(cov_regularization >= 0.0 && cov_regularization < 1.0)) {
    throw InvalidArgument("covariance regularization must be in [0, 1)");
  }
  if (rho.size() > 1 && static_cast<int>(rho.size()) != base.k) {
    throw InvalidArgument("rho needs one value or one per cluster");
  }
  for (double r : rho) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("rho values must be > 0");
  }
}

Eigen::MatrixXd fuzzy_covariance(const MembershipMatrix& u, const DataSet& data,
                                 const Matrix& centers, double m, Eigen::Index cluster,
                                 double gamma) {
  const Eigen::Index d = data.dim();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  Eigen::VectorXd diff(d);
  double weight = 0.0;
  for (Eigen::Index k = 0; k < data.size(); ++k) {
    const double w = std::pow(u(cluster, k), m);
    if (w == 0.0) continue;
    diff = (data.points().row(k) - centers.row(cluster)).transpose();
    cov.selfadjointView<Eigen::Lower>().rankUpdate(diff, w);
    weight += w;
  }
  if (!(weight > 0.0)) throw DegenerateClusterError(static_cast<std::size_t>(cluster));
  Eigen::MatrixXd full = cov.selfadjointView<Eigen::Lower>();
  cov = full / weight;
  if (gamma > 0.0) {
    const double scale = cov.trace() / static_cast<double>(d);
    cov *= (1.0 - gamma);
    cov.diagonal().array() += gamma * scale;
  }
  return cov;
}

Eigen::MatrixXd norm_matrix(const Eigen::MatrixXd& covariance, double rho, std::size_t cluster) {
  const Eigen::Index d = covariance.rows();
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) throw SingularCovarianceError(cluster);
  const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  if (!std::isfinite(log_det) || log_det < std::log(kMinDeterminant)) {
    throw SingularCovarianceError(cluster);
  }
  const double scale = std::exp((std::log(rho) + log_det) / static_cast<double>(d));
  Eigen::MatrixXd inverse = llt.solve(Eigen::MatrixXd::Identity(d, d));
  // symmetrize away solver round-off
  inverse = 0.5 * (inverse + inverse.transpose()).eval();
  return scale * inverse;
}

double gk_distance_sq(std::span<const double> x, std::span<const double> v,
                      const Eigen::MatrixXd& norm) {
  const std::size_t d = x.size();
  if (v.size() != d || static_cast<std::size_t>(norm.rows()) != d ||
      static_cast<std::size_t>(norm.cols()) != d) {
    throw InvalidArgument("dimension mismatch in GK distance");
  }
  // Accumulates in the same order as sq_euclidean so an identity norm reproduces it exactly.
  thread_local std::vector<double> diff;
  diff.resize(d);
  for (std::size_t j = 0; j < d; ++j) diff[j] = x[j] - v[j];
  double sum = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double projected = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
      projected += norm(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) * diff[l];
    }
    sum += diff[j] * projected;
  }
  return sum;
}

Eigen::MatrixXd gk_distances(const DataSet& data, const Matrix& centers,
                             const std::vector<Eigen::MatrixXd>& norms) {
  if (static_cast<Eigen::Index>(norms.size()) != centers.rows()) {
    throw InvalidArgument("need one norm matrix per center");
  }
  Eigen::MatrixXd dist(centers.rows(), data.size());
  for (Eigen::Index k = 0; k < data.size(); ++k) {
    for (Eigen::Index i = 0; i < centers.rows(); ++i) {
      dist(i, k) = gk_distance_sq(data.point(k), row_span(centers, i),
                                  norms[static_cast<std::size_t>(i)]);
    }
  }
  return dist;
}

GkStep gk_step(const DataSet& data, const MembershipMatrix& u, const GkConfig& cfg,
               bool freeze_identity) {
  const double m = cfg.base.m;
  Matrix centers = update_centers(u, data, m);
  std::vector<Eigen::MatrixXd> covariances;
  std::vector<Eigen::MatrixXd> norms;
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    if (freeze_identity) {
      norms.push_back(Eigen::MatrixXd::Identity(data.dim(), data.dim()));
      continue;
    }
    covariances.push_back(fuzzy_covariance(u, data, centers, m, i, cfg.cov_regularization));
    norms.push_back(norm_matrix(covariances.back(), cfg.rho_for(static_cast<std::size_t>(i)),
                                static_cast<std::size_t>(i)));
  }
  const Eigen::MatrixXd dist = gk_distances(data, centers, norms);
  MembershipMatrix next = memberships_from_distances(dist, m);
  const double j = weighted_objective(next, dist, m);
  return {std::move(centers), std::move(covariances), std::move(norms), std::move(next), j};
}

FcmResult gk_run_from(const DataSet& data, const GkConfig& cfg, MembershipMatrix initial,
                      const GkObserver& observer) {
  cfg.validate();
  if (cfg.base.k > data.size()) {
    throw InvalidArgument("cluster count " + std::to_string(cfg.base.k) +
                          " exceeds point count " + std::to_string(data.size()));
  }
  if (initial.clusters() != cfg.base.k || initial.points() != data.size()) {
    throw InvalidArgument("initial partition shape does not match configuration");
  }

  FcmResult result{ClusterModel{}, std::move(initial), 0, {}, false};
  double previous = std::numeric_limits<double>::infinity();
  while (result.iterations < cfg.base.max_iter) {
    GkStep step = gk_step(data, result.memberships, cfg);
    if (observer) observer(step);
    ++result.iterations;
    result.model.centers = std::move(step.centers);
    result.model.covariances = std::move(step.covariances);
    result.model.norm_matrices = std::move(step.norm_matrices);
    result.memberships = std::move(step.memberships);
    result.objective_trace.push_back(step.objective);
    if (std::abs(previous - step.objective) < cfg.base.tol) {
      result.converged = true;
      break;
    }
    previous = step.objective;
  }
  result.model.fuzzifier = cfg.base.m;
  result.model.objective = result.objective_trace.back();
  return result;
}

FcmResult gk_run(const DataSet& data, const GkConfig& cfg, Rng& rng, const GkObserver& observer) {
  cfg.validate();
  if (cfg.base.k > data.size()) {
    throw InvalidArgument("cluster count " + std::to_string(cfg.base.k) +
                          " exceeds point count " + std::to_string(data.size()));
  }
  return gk_run_from(data, cfg, init_membership(rng, cfg.base.k, data.size()), observer);
}

}  // namespace fuzzysweep
