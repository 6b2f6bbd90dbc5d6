#include "fuzzysweep/cvi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzzysweep/gk.hpp"

namespace fuzzysweep {

std::string_view to_string(IndexName name) {
  switch (name) {
    case IndexName::PC: return "PC";
    case IndexName::NPC: return "NPC";
    case IndexName::FHV: return "FHV";
    case IndexName::FS: return "FS";
    case IndexName::XB: return "XB";
    case IndexName::BH: return "BH";
    case IndexName::BWS: return "BWS";
  }
  return "?";
}

std::string_view to_string(Direction direction) {
  return direction == Direction::Min ? "min" : "max";
}

std::optional<IndexName> parse_index(std::string_view text) {
  for (IndexName n : kAllIndexes) {
    if (to_string(n) == text) return n;
  }
  return std::nullopt;
}

Direction direction_of(IndexName name) {
  switch (name) {
    case IndexName::PC:
    case IndexName::NPC:
    case IndexName::BWS:
      return Direction::Max;
    default:
      return Direction::Min;
  }
}

namespace cvi {

namespace {

// Sums in ascending order so that relabeling clusters cannot change the rounding.
double canonical_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

void check_shapes(const MembershipMatrix& u, const DataSet& data, const Matrix& centers) {
  if (u.points() != data.size() || u.clusters() != centers.rows() ||
      centers.cols() != data.dim()) {
    throw InvalidArgument("membership, data and center shapes disagree");
  }
}

double compactness(const MembershipMatrix& u, const DataSet& data, const Matrix& centers,
                   double m) {
  check_shapes(u, data, centers);
  std::vector<double> terms(static_cast<std::size_t>(u.clusters()));
  double total = 0.0;
  for (Eigen::Index k = 0; k < data.size(); ++k) {
    for (Eigen::Index i = 0; i < u.clusters(); ++i) {
      terms[static_cast<std::size_t>(i)] =
          std::pow(u(i, k), m) * sq_euclidean(data.point(k), row_span(centers, i));
    }
    total += canonical_sum(terms);
  }
  return total;
}

// sum_k mu_ik^m for every cluster i
std::vector<double> cluster_weights(const MembershipMatrix& u, double m) {
  std::vector<double> w(static_cast<std::size_t>(u.clusters()), 0.0);
  for (Eigen::Index i = 0; i < u.clusters(); ++i) {
    for (Eigen::Index k = 0; k < u.points(); ++k) w[static_cast<std::size_t>(i)] += std::pow(u(i, k), m);
  }
  return w;
}

// Weighted squared distances of the centers to the data mean.
double separation(const MembershipMatrix& u, const DataSet& data, const Matrix& centers,
                  double m) {
  const Eigen::RowVectorXd mean = data.grand_mean();
  const std::span<const double> mean_span(mean.data(), static_cast<std::size_t>(mean.size()));
  std::vector<double> w = cluster_weights(u, m);
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    w[static_cast<std::size_t>(i)] *= sq_euclidean(row_span(centers, i), mean_span);
  }
  return canonical_sum(w);
}

double min_center_separation(const Matrix& centers) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < centers.rows(); ++j) {
      best = std::min(best, sq_euclidean(row_span(centers, i), row_span(centers, j)));
    }
  }
  return best;
}

}  // namespace

double pc(const MembershipMatrix& u) {
  std::vector<double> terms(static_cast<std::size_t>(u.clusters()));
  double total = 0.0;
  for (Eigen::Index k = 0; k < u.points(); ++k) {
    for (Eigen::Index i = 0; i < u.clusters(); ++i) {
      terms[static_cast<std::size_t>(i)] = u(i, k) * u(i, k);
    }
    total += canonical_sum(terms);
  }
  return total / static_cast<double>(u.points());
}

double npc(const MembershipMatrix& u) {
  const auto c = static_cast<double>(u.clusters());
  if (u.clusters() < 2) throw UndefinedIndexError("NPC needs at least 2 clusters");
  return 1.0 - c / (c - 1.0) * (1.0 - pc(u));
}

double fhv(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m) {
  check_shapes(u, data, centers);
  std::vector<double> terms;
  for (Eigen::Index i = 0; i < u.clusters(); ++i) {
    const Eigen::MatrixXd f = fuzzy_covariance(u, data, centers, m, i, 0.0);
    const double det = f.determinant();
    if (!std::isfinite(det)) {
      throw UndefinedIndexError("FHV: determinant of cluster " + std::to_string(i) +
                                " covariance is not finite");
    }
    // PSD matrices have det >= 0; a negative value is round-off on a rank-deficient matrix.
    terms.push_back(std::sqrt(std::max(det, 0.0)));
  }
  return canonical_sum(terms);
}

double fs(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m) {
  return compactness(u, data, centers, m) - separation(u, data, centers, m);
}

double xb(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m) {
  check_shapes(u, data, centers);
  if (centers.rows() < 2) throw UndefinedIndexError("XB needs at least 2 clusters");
  const double min_sep = min_center_separation(centers);
  if (!(min_sep > 0.0)) throw UndefinedIndexError("XB: two cluster centers coincide");
  return compactness(u, data, centers, m) / (static_cast<double>(data.size()) * min_sep);
}

double bh_compactness(const MembershipMatrix& u, const DataSet& data, const Matrix& centers,
                      double m) {
  return compactness(u, data, centers, m) / static_cast<double>(data.size());
}

double bh(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m) {
  check_shapes(u, data, centers);
  if (centers.rows() < 2) throw UndefinedIndexError("BH needs at least 2 clusters");
  std::vector<double> inverse;
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < centers.rows(); ++j) {
      const double d = sq_euclidean(row_span(centers, i), row_span(centers, j));
      if (!(d > 0.0)) throw UndefinedIndexError("BH: two cluster centers coincide");
      inverse.push_back(1.0 / d);
    }
  }
  return bh_compactness(u, data, centers, m) * canonical_sum(inverse);
}

double bws(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m) {
  check_shapes(u, data, centers);
  std::vector<double> traces;
  for (Eigen::Index i = 0; i < u.clusters(); ++i) {
    traces.push_back(fuzzy_covariance(u, data, centers, m, i, 0.0).trace());
  }
  const double comp = canonical_sum(traces);
  if (!(comp > 0.0)) throw UndefinedIndexError("BWS: every cluster is point-degenerate");
  return separation(u, data, centers, m) / comp;
}

}  // namespace cvi

std::vector<IndexValue> evaluate_all(const MembershipMatrix& u, const DataSet& data,
                                     const Matrix& centers, double m) {
  std::vector<IndexValue> out;
  for (IndexName name : kAllIndexes) {
    IndexValue entry{name, std::nullopt, direction_of(name), {}};
    try {
      switch (name) {
        case IndexName::PC: entry.value = cvi::pc(u); break;
        case IndexName::NPC: entry.value = cvi::npc(u); break;
        case IndexName::FHV: entry.value = cvi::fhv(u, data, centers, m); break;
        case IndexName::FS: entry.value = cvi::fs(u, data, centers, m); break;
        case IndexName::XB: entry.value = cvi::xb(u, data, centers, m); break;
        case IndexName::BH: entry.value = cvi::bh(u, data, centers, m); break;
        case IndexName::BWS: entry.value = cvi::bws(u, data, centers, m); break;
      }
      if (entry.value && !std::isfinite(*entry.value)) {
        entry.value.reset();
        entry.reason = "non-finite value";
      }
    } catch (const Error& e) {
      entry.reason = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace fuzzysweep
