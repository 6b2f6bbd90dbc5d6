#include "fuzzysweep/hybrid.hpp"

#include <algorithm>

namespace fuzzysweep {

std::vector<double> encode_centers(const Matrix& centers) {
  return {centers.data(), centers.data() + centers.size()};
}

Matrix decode_centers(std::span<const double> flat, Eigen::Index clusters, Eigen::Index dim) {
  if (clusters < 1 || dim < 1 || static_cast<Eigen::Index>(flat.size()) != clusters * dim) {
    throw InvalidArgument("flat center vector of length " + std::to_string(flat.size()) +
                          " cannot be reshaped to " + std::to_string(clusters) + " x " +
                          std::to_string(dim));
  }
  Matrix centers(clusters, dim);
  std::copy(flat.begin(), flat.end(), centers.data());
  return centers;
}

BoundsList data_bounds(const DataSet& data) {
  BoundsList bounds;
  for (Eigen::Index j = 0; j < data.dim(); ++j) {
    double low = data.points().col(j).minCoeff();
    double high = data.points().col(j).maxCoeff();
    if (!(low < high)) {
      low -= 0.5;
      high += 0.5;
    }
    bounds.push_back({low, high});
  }
  return bounds;
}

Refinement refine_fcm(const DataSet& data, const Matrix& centers, double m) {
  const MembershipMatrix u = update_memberships(data, centers, m);
  FcmStep step = fcm_step(data, u, m);
  return {std::move(step.centers), std::move(step.memberships), {}, {}, step.objective};
}

Refinement refine_gk(const DataSet& data, const Matrix& centers, const GkConfig& cfg,
                     bool freeze_identity) {
  const double m = cfg.base.m;
  MembershipMatrix u = update_memberships(data, centers, m);
  if (!freeze_identity) {
    std::vector<Eigen::MatrixXd> norms;
    for (Eigen::Index i = 0; i < centers.rows(); ++i) {
      const auto cov = fuzzy_covariance(u, data, centers, m, i, cfg.cov_regularization);
      norms.push_back(norm_matrix(cov, cfg.rho_for(static_cast<std::size_t>(i)),
                                  static_cast<std::size_t>(i)));
    }
    u = memberships_from_distances(gk_distances(data, centers, norms), m);
  }
  GkStep step = gk_step(data, u, cfg, freeze_identity);
  return {std::move(step.centers), std::move(step.memberships), std::move(step.covariances),
          std::move(step.norm_matrices), step.objective};
}

FitnessFn hybrid_fitness_fcm(const DataSet& data, Eigen::Index clusters, double m) {
  return [&data, clusters, m](std::span<const double> flat) {
    const Matrix centers = decode_centers(flat, clusters, data.dim());
    try {
      return refine_fcm(data, centers, m).objective;
    } catch (const DegenerateClusterError&) {
      return kSentinelFitness;
    }
  };
}

FitnessFn hybrid_fitness_gk(const DataSet& data, const GkConfig& cfg, bool freeze_identity) {
  return [&data, cfg, freeze_identity](std::span<const double> flat) {
    const Matrix centers = decode_centers(flat, cfg.base.k, data.dim());
    try {
      return refine_gk(data, centers, cfg, freeze_identity).objective;
    } catch (const DegenerateClusterError&) {
      return kSentinelFitness;
    } catch (const SingularCovarianceError&) {
      return kSentinelFitness;
    }
  };
}

namespace {

FcmResult finish(Refinement refined, const FoaResult& search, double m, int epochs) {
  FcmResult result{ClusterModel{}, std::move(refined.memberships), epochs, search.trace, true};
  result.model.centers = std::move(refined.centers);
  result.model.covariances = std::move(refined.covariances);
  result.model.norm_matrices = std::move(refined.norm_matrices);
  result.model.fuzzifier = m;
  result.model.objective = refined.objective;
  return result;
}

void check_cluster_count(const DataSet& data, int k) {
  if (k > data.size()) {
    throw InvalidArgument("cluster count " + std::to_string(k) + " exceeds point count " +
                          std::to_string(data.size()));
  }
}

BoundsList center_bounds(const DataSet& data, int k) {
  const BoundsList per_feature = data_bounds(data);
  BoundsList bounds;
  for (int i = 0; i < k; ++i) bounds.insert(bounds.end(), per_feature.begin(), per_feature.end());
  return bounds;
}

}  // namespace

FcmResult foa_fcm_run(const DataSet& data, const ClusterConfig& cfg, const FoaParams& foa,
                      Rng& rng) {
  cfg.validate();
  check_cluster_count(data, cfg.k);
  const auto dim = static_cast<std::size_t>(cfg.k * data.dim());
  const FoaResult search =
      foa_minimize(hybrid_fitness_fcm(data, cfg.k, cfg.m), dim, center_bounds(data, cfg.k), foa, rng);
  const Matrix best = decode_centers(search.best_position, cfg.k, data.dim());
  // Degenerate best trees can only occur if every tree was degenerate.
  return finish(refine_fcm(data, best, cfg.m), search, cfg.m, foa.epochs);
}

FcmResult foa_gk_run(const DataSet& data, const GkConfig& cfg, const FoaParams& foa, Rng& rng) {
  cfg.validate();
  check_cluster_count(data, cfg.base.k);
  const auto dim = static_cast<std::size_t>(cfg.base.k * data.dim());
  const FoaResult search = foa_minimize(hybrid_fitness_gk(data, cfg), dim,
                                        center_bounds(data, cfg.base.k), foa, rng);
  const Matrix best = decode_centers(search.best_position, cfg.base.k, data.dim());
  return finish(refine_gk(data, best, cfg), search, cfg.base.m, foa.epochs);
}

}  // namespace fuzzysweep
