#pragma once

#include <functional>
#include <vector>

#include "fuzzysweep/core.hpp"

namespace fuzzysweep {

struct FcmResult {
  ClusterModel model;
  MembershipMatrix memberships;
  int iterations = 0;
  std::vector<double> objective_trace;
  bool converged = false;
};

// One alternating-optimization cycle: centers from U, then memberships from those centers.
struct FcmStep {
  Matrix centers;
  MembershipMatrix memberships;
  double objective;
};

// Each column is a uniform draw per cluster divided by the column sum.
MembershipMatrix init_membership(Rng& rng, Eigen::Index clusters, Eigen::Index points);

// Weighted means with weights mu^m. Throws DegenerateClusterError for a zero-weight cluster.
Matrix update_centers(const MembershipMatrix& u, const DataSet& data, double m);

// c x N matrix of squared Euclidean distances between centers and points.
Eigen::MatrixXd squared_distances(const DataSet& data, const Matrix& centers);

// Standard fuzzy membership update from a c x N distance matrix. A point at zero distance
// from one or more centers is assigned crisply to the first of them.
MembershipMatrix memberships_from_distances(const Eigen::MatrixXd& distances, double m);

MembershipMatrix update_memberships(const DataSet& data, const Matrix& centers, double m);

// sum_k sum_i mu_ik^m * distances(i, k)
double weighted_objective(const MembershipMatrix& u, const Eigen::MatrixXd& distances, double m);

// J = sum_k sum_i mu_ik^m ||x_k - v_i||^2
double objective(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m);

FcmStep fcm_step(const DataSet& data, const MembershipMatrix& u, double m);

// Runs from a random initial partition until |dJ| < tol or max_iter cycles.
FcmResult fcm_run(const DataSet& data, const ClusterConfig& cfg, Rng& rng);

// Same loop from a caller-supplied initial partition.
FcmResult fcm_run_from(const DataSet& data, const ClusterConfig& cfg, MembershipMatrix initial);

}  // namespace fuzzysweep
