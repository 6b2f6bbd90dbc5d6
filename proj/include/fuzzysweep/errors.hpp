#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fuzzysweep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration, dimension mismatch or out-of-domain argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  // row and column are 1-based positions in the source file.
  ParseError(std::size_t row, std::size_t column, const std::string& what)
      : Error("parse error at row " + std::to_string(row) + ", column " + std::to_string(column) +
              ": " + what),
        row_(row),
        column_(column) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t row_;
  std::size_t column_;
};

class DegenerateClusterError : public Error {
 public:
  explicit DegenerateClusterError(std::size_t cluster)
      : Error("cluster " + std::to_string(cluster) + " has zero total membership weight"),
        cluster_(cluster) {}

  std::size_t cluster() const noexcept { return cluster_; }

 private:
  std::size_t cluster_;
};

class SingularCovarianceError : public Error {
 public:
  explicit SingularCovarianceError(std::size_t cluster)
      : Error("fuzzy covariance of cluster " + std::to_string(cluster) +
              " is singular; raise the covariance regularization (--cov-reg)"),
        cluster_(cluster) {}

  std::size_t cluster() const noexcept { return cluster_; }

 private:
  std::size_t cluster_;
};

// A validity index that has no value for the given partition (e.g. NPC at c = 1).
class UndefinedIndexError : public Error {
 public:
  using Error::Error;
};

class FitnessError : public Error {
 public:
  using Error::Error;
};

}  // namespace fuzzysweep
