#pragma once

#include <span>
#include <vector>

#include "fuzzysweep/fcm.hpp"
#include "fuzzysweep/foa.hpp"
#include "fuzzysweep/gk.hpp"

namespace fuzzysweep {

// Fitness assigned to center sets the base algorithm cannot refine (empty cluster,
// singular covariance). Large enough that the forest always drops such trees.
inline constexpr double kSentinelFitness = 1e30;

// Row-major flattening of a c x d center matrix.
std::vector<double> encode_centers(const Matrix& centers);
Matrix decode_centers(std::span<const double> flat, Eigen::Index clusters, Eigen::Index dim);

// Per-feature [min, max] of the data; a constant feature gets a unit-wide interval.
BoundsList data_bounds(const DataSet& data);

// Result of refining a center set with a single base-algorithm cycle.
struct Refinement {
  Matrix centers;
  MembershipMatrix memberships;
  std::vector<Eigen::MatrixXd> covariances;
  std::vector<Eigen::MatrixXd> norm_matrices;
  double objective;
};

// memberships(V) -> centers -> memberships -> J
Refinement refine_fcm(const DataSet& data, const Matrix& centers, double m);

// Euclidean memberships seed the covariance estimate at V; then GK memberships at V and one
// full GK cycle. With `freeze_identity` it coincides with refine_fcm.
Refinement refine_gk(const DataSet& data, const Matrix& centers, const GkConfig& cfg,
                     bool freeze_identity = false);

// Both fitness functions hold a reference to `data`; it must outlive them.
FitnessFn hybrid_fitness_fcm(const DataSet& data, Eigen::Index clusters, double m);
FitnessFn hybrid_fitness_gk(const DataSet& data, const GkConfig& cfg,
                            bool freeze_identity = false);

// FOA over center encodings. `iterations` in the result is the epoch count and
// `objective_trace` is the best-so-far fitness per epoch.
FcmResult foa_fcm_run(const DataSet& data, const ClusterConfig& cfg, const FoaParams& foa,
                      Rng& rng);
FcmResult foa_gk_run(const DataSet& data, const GkConfig& cfg, const FoaParams& foa, Rng& rng);

}  // namespace fuzzysweep
