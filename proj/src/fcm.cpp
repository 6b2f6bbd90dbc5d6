#include "fuzzysweep/fcm.hpp"

#include <cmath>
#include <limits>

namespace fuzzysweep {

MembershipMatrix init_membership(Rng& rng, Eigen::Index clusters, Eigen::Index points) {
  if (clusters < 1 || points < 1) {
    throw InvalidArgument("membership initialization needs c >= 1 and N >= 1");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd mu(clusters, points);
  for (Eigen::Index k = 0; k < points; ++k) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < clusters; ++i) {
      // open interval so a column can never be all zeros
      double v = 0.0;
      while (v == 0.0) v = unit(rng);
      mu(i, k) = v;
      sum += v;
    }
    mu.col(k) /= sum;
  }
  return MembershipMatrix(std::move(mu));
}

Matrix update_centers(const MembershipMatrix& u, const DataSet& data, double m) {
  if (u.points() != data.size()) {
    throw InvalidArgument("membership matrix covers " + std::to_string(u.points()) +
                          " points, data set has " + std::to_string(data.size()));
  }
  const auto& x = data.points();
  Matrix centers = Matrix::Zero(u.clusters(), data.dim());
  for (Eigen::Index i = 0; i < u.clusters(); ++i) {
    double weight = 0.0;
    for (Eigen::Index k = 0; k < data.size(); ++k) {
      const double w = std::pow(u(i, k), m);
      weight += w;
      centers.row(i) += w * x.row(k);
    }
    if (!(weight > 0.0)) throw DegenerateClusterError(static_cast<std::size_t>(i));
    centers.row(i) /= weight;
  }
  return centers;
}

Eigen::MatrixXd squared_distances(const DataSet& data, const Matrix& centers) {
  if (centers.cols() != data.dim()) {
    throw InvalidArgument("center dimension " + std::to_string(centers.cols()) +
                          " does not match data dimension " + std::to_string(data.dim()));
  }
  Eigen::MatrixXd dist(centers.rows(), data.size());
  for (Eigen::Index k = 0; k < data.size(); ++k) {
    for (Eigen::Index i = 0; i < centers.rows(); ++i) {
      dist(i, k) = sq_euclidean(data.point(k), row_span(centers, i));
    }
  }
  return dist;
}

MembershipMatrix memberships_from_distances(const Eigen::MatrixXd& distances, double m) {
  const double exponent = 1.0 / (m - 1.0);
  const Eigen::Index c = distances.rows();
  Eigen::MatrixXd mu(c, distances.cols());
  for (Eigen::Index k = 0; k < distances.cols(); ++k) {
    Eigen::Index coincident = -1;
    for (Eigen::Index i = 0; i < c; ++i) {
      if (distances(i, k) <= 0.0) {
        coincident = i;
        break;
      }
    }
    if (coincident >= 0) {
      mu.col(k).setZero();
      mu(coincident, k) = 1.0;
      continue;
    }
    for (Eigen::Index i = 0; i < c; ++i) {
      double denom = 0.0;
      for (Eigen::Index t = 0; t < c; ++t) {
        denom += std::pow(distances(i, k) / distances(t, k), exponent);
      }
      mu(i, k) = 1.0 / denom;
    }
  }
  return MembershipMatrix(std::move(mu));
}

MembershipMatrix update_memberships(const DataSet& data, const Matrix& centers, double m) {
  return memberships_from_distances(squared_distances(data, centers), m);
}

double weighted_objective(const MembershipMatrix& u, const Eigen::MatrixXd& distances, double m) {
  double j = 0.0;
  for (Eigen::Index k = 0; k < u.points(); ++k) {
    for (Eigen::Index i = 0; i < u.clusters(); ++i) {
      j += std::pow(u(i, k), m) * distances(i, k);
    }
  }
  return j;
}

double objective(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m) {
  if (u.clusters() != centers.rows() || u.points() != data.size()) {
    throw InvalidArgument("membership matrix shape does not match centers and data");
  }
  return weighted_objective(u, squared_distances(data, centers), m);
}

FcmStep fcm_step(const DataSet& data, const MembershipMatrix& u, double m) {
  Matrix centers = update_centers(u, data, m);
  const Eigen::MatrixXd dist = squared_distances(data, centers);
  MembershipMatrix next = memberships_from_distances(dist, m);
  const double j = weighted_objective(next, dist, m);
  return {std::move(centers), std::move(next), j};
}

FcmResult fcm_run_from(const DataSet& data, const ClusterConfig& cfg, MembershipMatrix initial) {
  cfg.validate();
  if (cfg.k > data.size()) {
    throw InvalidArgument("cluster count " + std::to_string(cfg.k) + " exceeds point count " +
                          std::to_string(data.size()));
  }
  if (initial.clusters() != cfg.k || initial.points() != data.size()) {
    throw InvalidArgument("initial partition shape does not match configuration");
  }

  FcmResult result{ClusterModel{}, std::move(initial), 0, {}, false};
  double previous = std::numeric_limits<double>::infinity();
  while (result.iterations < cfg.max_iter) {
    FcmStep step = fcm_step(data, result.memberships, cfg.m);
    ++result.iterations;
    result.model.centers = std::move(step.centers);
    result.memberships = std::move(step.memberships);
    result.objective_trace.push_back(step.objective);
    if (std::abs(previous - step.objective) < cfg.tol) {
      result.converged = true;
      break;
    }
    previous = step.objective;
  }
  result.model.fuzzifier = cfg.m;
  result.model.objective = result.objective_trace.back();
  return result;
}

FcmResult fcm_run(const DataSet& data, const ClusterConfig& cfg, Rng& rng) {
  cfg.validate();
  if (cfg.k > data.size()) {
    throw InvalidArgument("cluster count " + std::to_string(cfg.k) + " exceeds point count " +
                          std::to_string(data.size()));
  }
  return fcm_run_from(data, cfg, init_membership(rng, cfg.k, data.size()));
}

}  // namespace fuzzysweep
