#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fuzzysweep/errors.hpp"

namespace fuzzysweep {

// Row-major so every data point / center is a contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Rng = std::mt19937_64;

inline std::span<const double> row_span(const Matrix& m, Eigen::Index row) {
  return {m.data() + row * m.cols(), static_cast<std::size_t>(m.cols())};
}

// N x d feature matrix with optional per-point class labels.
class DataSet {
 public:
  explicit DataSet(Matrix points, std::optional<std::vector<std::string>> labels = std::nullopt,
                   std::string name = {});

  const Matrix& points() const noexcept { return points_; }
  Eigen::Index size() const noexcept { return points_.rows(); }
  Eigen::Index dim() const noexcept { return points_.cols(); }
  std::span<const double> point(Eigen::Index i) const { return row_span(points_, i); }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::vector<std::string>& labels() const;
  const std::string& name() const noexcept { return name_; }

  // Column-wise mean of all points.
  Eigen::RowVectorXd grand_mean() const { return points_.colwise().mean(); }

 private:
  Matrix points_;
  std::optional<std::vector<std::string>> labels_;
  std::string name_;
};

// c x N fuzzy partition; column k holds the memberships of point k.
class MembershipMatrix {
 public:
  static constexpr double kColumnSumTolerance = 1e-9;

  // Throws InvalidArgument unless every entry is in [0,1] and every column sums to 1.
  explicit MembershipMatrix(Eigen::MatrixXd mu);

  Eigen::Index clusters() const noexcept { return mu_.rows(); }
  Eigen::Index points() const noexcept { return mu_.cols(); }
  double operator()(Eigen::Index cluster, Eigen::Index point) const { return mu_(cluster, point); }
  const Eigen::MatrixXd& values() const noexcept { return mu_; }

 private:
  Eigen::MatrixXd mu_;
};

struct ClusterModel {
  Matrix centers;
  std::vector<Eigen::MatrixXd> covariances;    // GK only
  std::vector<Eigen::MatrixXd> norm_matrices;  // GK only
  double fuzzifier = 2.0;
  double objective = 0.0;
};

struct ClusterConfig {
  int k = 2;
  double m = 2.0;
  double tol = 1e-5;
  int max_iter = 300;
  std::uint64_t seed = 0;

  void validate() const;
};

double sq_euclidean(std::span<const double> x, std::span<const double> v);

// CSV ingestion: comma separated, optional header row (detected when no cell of the first
// row parses as a number), optional trailing label column.
DataSet parse_csv(std::istream& in, bool has_labels, std::string name = {});
DataSet load_csv(const std::filesystem::path& path, bool has_labels);
// Writes points (and labels, if any) with round-trip precision.
void write_csv(const DataSet& data, std::ostream& out);

// Per point, the index of the largest membership; ties go to the smallest cluster index.
std::vector<int> hard_assign(const MembershipMatrix& u);

// Fraction of points whose cluster maps to their label under the best cluster-to-label
// bijection. Exhaustive over permutations, so meant for small cluster counts.
double best_permutation_accuracy(std::span<const int> assignment,
                                 std::span<const std::string> labels);

// Derives an independent 64-bit seed from a base seed and a stream tag.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace fuzzysweep
