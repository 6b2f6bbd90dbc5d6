#pragma once

#include <functional>
#include <vector>

#include "fuzzysweep/fcm.hpp"

namespace fuzzysweep {

struct GkConfig {
  ClusterConfig base;
  // Cluster volumes. Empty means 1.0 for every cluster; a single value is broadcast.
  std::vector<double> rho;
  // Blend weight toward the scaled identity, in [0, 1).
  double cov_regularization = 1e-4;

  double rho_for(std::size_t cluster) const;
  void validate() const;
};

// Membership-weighted scatter of cluster `cluster` around its center, blended as
// (1 - gamma) C + gamma (tr C / d) I.
Eigen::MatrixXd fuzzy_covariance(const MembershipMatrix& u, const DataSet& data,
                                 const Matrix& centers, double m, Eigen::Index cluster,
                                 double gamma);

// Volume-constrained inverse covariance: (rho det C)^(1/d) C^-1, so det(A) = rho.
// Throws SingularCovarianceError (tagged with `cluster`) if C is not positive definite or
// det C < 1e-300.
Eigen::MatrixXd norm_matrix(const Eigen::MatrixXd& covariance, double rho,
                            std::size_t cluster = 0);

// (x - v)^T A (x - v)
double gk_distance_sq(std::span<const double> x, std::span<const double> v,
                      const Eigen::MatrixXd& norm);

// c x N matrix of GK distances, one norm matrix per center.
Eigen::MatrixXd gk_distances(const DataSet& data, const Matrix& centers,
                             const std::vector<Eigen::MatrixXd>& norms);

struct GkStep {
  Matrix centers;
  std::vector<Eigen::MatrixXd> covariances;
  std::vector<Eigen::MatrixXd> norm_matrices;
  MembershipMatrix memberships;
  double objective;
};

// One GK iteration: centers from U, then memberships under the adaptive per-cluster norms.
// With `freeze_identity` every norm matrix is the identity and the covariance estimate is
// skipped, which reproduces fcm_step exactly.
GkStep gk_step(const DataSet& data, const MembershipMatrix& u, const GkConfig& cfg,
               bool freeze_identity = false);

using GkObserver = std::function<void(const GkStep&)>;

FcmResult gk_run(const DataSet& data, const GkConfig& cfg, Rng& rng,
                 const GkObserver& observer = {});

FcmResult gk_run_from(const DataSet& data, const GkConfig& cfg, MembershipMatrix initial,
                      const GkObserver& observer = {});

}  // namespace fuzzysweep
