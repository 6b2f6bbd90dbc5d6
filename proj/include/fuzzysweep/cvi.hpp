#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fuzzysweep/core.hpp"

namespace fuzzysweep {

enum class IndexName { PC, NPC, FHV, FS, XB, BH, BWS };
enum class Direction { Min, Max };

inline constexpr std::array<IndexName, 7> kAllIndexes = {
    IndexName::PC, IndexName::NPC, IndexName::FHV, IndexName::FS,
    IndexName::XB, IndexName::BH,  IndexName::BWS};

std::string_view to_string(IndexName name);
std::string_view to_string(Direction direction);
std::optional<IndexName> parse_index(std::string_view text);
Direction direction_of(IndexName name);

struct IndexValue {
  IndexName name;
  std::optional<double> value;  // empty when undefined for this partition
  Direction direction;
  std::string reason;           // why the value is undefined
};

namespace cvi {

// Partition coefficient, (1/N) sum mu^2. In [1/c, 1], larger is better.
double pc(const MembershipMatrix& u);

// 1 - c/(c-1) (1 - PC). Undefined for c = 1.
double npc(const MembershipMatrix& u);

// Fuzzy hypervolume: sum over clusters of sqrt(det F_i), F_i the unregularized fuzzy
// covariance. Rank-deficient clusters contribute 0.
double fhv(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m);

// Fukuyama-Sugeno: J minus sum mu^m ||v_i - grand mean||^2.
double fs(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m);

// Xie-Beni: J / (N min_{i != j} ||v_i - v_j||^2). Undefined for c = 1 or coincident centers.
double xb(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m);

// (1/N) J, the compactness factor of BH.
double bh_compactness(const MembershipMatrix& u, const DataSet& data, const Matrix& centers,
                      double m);

// Beringer-Hullermeier: compactness times sum_{i<j} 1 / ||v_i - v_j||^2.
double bh(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m);

// Bouguessa-Wang-Sun: separation trace over the summed covariance traces.
double bws(const MembershipMatrix& u, const DataSet& data, const Matrix& centers, double m);

}  // namespace cvi

// All seven indexes in kAllIndexes order. Failures are captured per index.
std::vector<IndexValue> evaluate_all(const MembershipMatrix& u, const DataSet& data,
                                     const Matrix& centers, double m);

}  // namespace fuzzysweep
