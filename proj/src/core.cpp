#include "fuzzysweep/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace fuzzysweep {

DataSet::DataSet(Matrix points, std::optional<std::vector<std::string>> labels, std::string name)
    : points_(std::move(points)), labels_(std::move(labels)), name_(std::move(name)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw InvalidArgument("data set needs at least one point and one feature");
  }
  if (!points_.allFinite()) {
    throw InvalidArgument("data set contains non-finite features");
  }
  if (labels_ && static_cast<Eigen::Index>(labels_->size()) != points_.rows()) {
    throw InvalidArgument("label count " + std::to_string(labels_->size()) +
                          " does not match point count " + std::to_string(points_.rows()));
  }
}

const std::vector<std::string>& DataSet::labels() const {
  if (!labels_) throw InvalidArgument("data set '" + name_ + "' has no labels");
  return *labels_;
}

MembershipMatrix::MembershipMatrix(Eigen::MatrixXd mu) : mu_(std::move(mu)) {
  if (mu_.rows() < 1 || mu_.cols() < 1) {
    throw InvalidArgument("membership matrix needs at least one cluster and one point");
  }
  for (Eigen::Index k = 0; k < mu_.cols(); ++k) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < mu_.rows(); ++i) {
      const double v = mu_(i, k);
      if (!(v >= 0.0 && v <= 1.0)) {
        throw InvalidArgument("membership (" + std::to_string(i) + ", " + std::to_string(k) +
                              ") outside [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kColumnSumTolerance) {
      throw InvalidArgument("memberships of point " + std::to_string(k) + " sum to " +
                            std::to_string(sum));
    }
  }
}

void ClusterConfig::validate() const {
  if (k < 1) throw InvalidArgument("cluster count must be >= 1");
  if (!(m > 1.0) || !std::isfinite(m)) throw InvalidArgument("fuzzifier m must be > 1");
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be > 0");
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
}

double sq_euclidean(std::span<const double> x, std::span<const double> v) {
  if (x.size() != v.size()) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                          std::to_string(v.size()));
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double diff = x[j] - v[j];
    sum += diff * diff;
  }
  return sum;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end || cell.empty()) return std::nullopt;
  return value;
}

}  // namespace

DataSet parse_csv(std::istream& in, bool has_labels, std::string name) {
  std::vector<double> values;
  std::vector<std::string> labels;
  std::size_t columns = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool first = true;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);  // UTF-8 BOM
    const auto content = trim(line);
    if (content.empty()) continue;
    // Comment lines before the data carry metadata such as the embedding dimension.
    if (first && content.front() == '#') continue;
    const auto cells = split_cells(line);
    const std::size_t features = has_labels ? cells.size() - 1 : cells.size();

    if (first) {
      first = false;
      const bool any_numeric = std::any_of(cells.begin(), cells.begin() + features,
                                           [](auto c) { return parse_number(c).has_value(); });
      if (!any_numeric) {
        columns = cells.size();
        continue;  // header
      }
    }
    if (columns == 0) columns = cells.size();
    if (cells.size() != columns) {
      throw ParseError(line_no, std::min(cells.size(), columns) + 1,
                       "expected " + std::to_string(columns) + " columns, found " +
                           std::to_string(cells.size()));
    }
    if (has_labels && cells.size() < 2) {
      throw ParseError(line_no, 1, "labelled rows need at least one feature and a label");
    }
    for (std::size_t j = 0; j < features; ++j) {
      const auto value = parse_number(cells[j]);
      if (!value) {
        throw ParseError(line_no, j + 1, "'" + std::string(cells[j]) + "' is not a number");
      }
      if (!std::isfinite(*value)) {
        throw ParseError(line_no, j + 1, "non-finite value");
      }
      values.push_back(*value);
    }
    if (has_labels) labels.emplace_back(cells.back());
    ++rows;
  }
  if (rows == 0) throw ParseError(line_no + 1, 1, "no data rows");

  const std::size_t dim = values.size() / rows;
  Matrix points(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(dim));
  std::copy(values.begin(), values.end(), points.data());
  std::optional<std::vector<std::string>> label_column;
  if (has_labels) label_column = std::move(labels);
  return DataSet(std::move(points), std::move(label_column), std::move(name));
}

DataSet load_csv(const std::filesystem::path& path, bool has_labels) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return parse_csv(in, has_labels, path.stem().string());
}

void write_csv(const DataSet& data, std::ostream& out) {
  const auto precision = out.precision(std::numeric_limits<double>::max_digits10);
  const auto& x = data.points();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (j > 0) out << ',';
      out << x(i, j);
    }
    if (data.has_labels()) out << ',' << data.labels()[static_cast<std::size_t>(i)];
    out << '\n';
  }
  out.precision(precision);
}

std::vector<int> hard_assign(const MembershipMatrix& u) {
  std::vector<int> out(static_cast<std::size_t>(u.points()));
  for (Eigen::Index k = 0; k < u.points(); ++k) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < u.clusters(); ++i) {
      if (u(i, k) > u(best, k)) best = i;
    }
    out[static_cast<std::size_t>(k)] = static_cast<int>(best);
  }
  return out;
}

double best_permutation_accuracy(std::span<const int> assignment,
                                 std::span<const std::string> labels) {
  if (assignment.size() != labels.size() || assignment.empty()) {
    throw InvalidArgument("assignment and label lists must be nonempty and of equal length");
  }
  std::map<std::string, int> label_ids;
  for (const auto& l : labels) label_ids.emplace(l, static_cast<int>(label_ids.size()));
  const int clusters = *std::max_element(assignment.begin(), assignment.end()) + 1;
  const int classes = static_cast<int>(label_ids.size());
  const int side = std::max(clusters, classes);

  // contingency[cluster][class]
  std::vector<std::vector<int>> contingency(side, std::vector<int>(side, 0));
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    ++contingency[assignment[i]][label_ids.at(labels[i])];
  }

  std::vector<int> perm(side);
  std::iota(perm.begin(), perm.end(), 0);
  int best = 0;
  do {
    int hits = 0;
    for (int c = 0; c < side; ++c) hits += contingency[c][perm[c]];
    best = std::max(best, hits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(assignment.size());
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over the combined words
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace fuzzysweep
